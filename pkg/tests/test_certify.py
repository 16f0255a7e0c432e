from fractions import Fraction

import numpy as np
import pytest

from specsum import certify as ct
from specsum import exactq

C87 = Fraction(8, 7)


@pytest.fixture(scope="module")
def p3_problem():
    return ct.assemble(ct.cert_base("P3"), C87)


@pytest.fixture(scope="module")
def p3_result(p3_problem):
    r = ct.certify(ct.cert_base("P3"), C87)
    assert r.status == "FOUND"
    return r


class TestAssemble:
    def test_h6_dimensions(self):
        p = ct.assemble(ct.cert_base("H6"), C87)
        assert (p.k, p.m, p.dim) == (6, 15, 105)
        assert len(p.pairs) == 15
        assert len(p.R) == 6 and len(p.F) == 15

    def test_k2_dimensions(self):
        p = ct.assemble(ct.cert_base("K2"), 1)
        assert (p.k, p.m, p.dim) == (2, 1, 3)

    def test_psi_e11_diagonal_structure(self):
        # R_1 = c*I - psi(E_11): psi(E_11) is diagonal with 1 exactly at
        # wedge pairs containing vertex 1
        p = ct.assemble(ct.cert_base("H6"), C87)
        R1 = p.R[0]
        for a, (i, j) in enumerate(p.pairs):
            for b in range(p.m):
                if a != b:
                    assert R1[a][b] == 0
            want = C87 - (1 if 1 in (i, j) else 0)
            assert R1[a][a] == want

    def test_off_diagonal_fixed_parts_vanish_on_non_edges(self):
        p = ct.assemble(ct.cert_base("P3"), C87)
        # (1,3) is not an edge of the looped path
        assert all(x == 0 for row in p.F[(1, 3)] for x in row)
        assert any(x != 0 for row in p.F[(1, 2)] for x in row)

    def test_unknown_base(self):
        with pytest.raises(ValueError):
            ct.cert_base("K3")


class TestSdpSolve:
    def test_trivial_base_immediate(self):
        p = ct.assemble(ct.cert_base("K2"), 1)
        r = ct.sdp_solve(p)
        assert r.status == "CONVERGED"
        assert r.iterations <= 5
        assert np.abs(r.Q).max() < 1e-9
        assert np.abs(r.T - np.eye(1)).max() < 1e-9

    def test_p3_converges(self, p3_problem):
        r = ct.sdp_solve(p3_problem, tol=1e-9)
        assert r.status == "CONVERGED"
        assert r.affine_residual <= 1e-9 and r.psd_residual <= 1e-9

    def test_infeasible_bound_stalls(self, p3_problem):
        # 9/8 < 8/7 = attained max, so no certificate exists
        p = ct.assemble(ct.cert_base("P3"), Fraction(9, 8))
        r = ct.sdp_solve(p, tol=1e-9, max_iter=4000)
        assert r.status == "NOT_FOUND"
        assert r.psd_residual > 1e-9

    def test_h6_below_true_max_stalls(self):
        # same at full scale: sigma reaches 8/7 on H6, so 9/8 is infeasible
        p = ct.assemble(ct.cert_base("H6"), Fraction(9, 8))
        r = ct.sdp_solve(p, tol=1e-9, max_iter=800)
        assert r.status == "NOT_FOUND"
        assert max(r.psd_residual, r.affine_residual) > 1e-9

    def test_parameter_validation(self, p3_problem):
        with pytest.raises(ValueError):
            ct.sdp_solve(p3_problem, tol=0.0)
        with pytest.raises(ValueError):
            ct.sdp_solve(p3_problem, omega=2.5)


class TestRationalize:
    def test_identity_holds_regardless_of_input(self, p3_problem):
        # dependent entries are reconstructed exactly, so even rounding
        # garbage yields a (non-PSD) certificate satisfying the identity
        rng = np.random.default_rng(0)
        junk = rng.standard_normal((p3_problem.dim, p3_problem.dim))
        cert = ct.rationalize(p3_problem, junk, None, max_den=97)
        assert ct.verify_identity(cert).ok

    def test_trivial_base_exact(self):
        p = ct.assemble(ct.cert_base("K2"), 1)
        cert = ct.rationalize(p, np.zeros((3, 3)), None, max_den=10)
        assert all(x == 0 for row in cert.Q for x in row)
        assert cert.T == ((Fraction(1),),)


class TestVerifyIdentity:
    def test_pipeline_output_passes(self, p3_result):
        rep = ct.verify_identity(p3_result.certificate)
        assert rep.ok and rep.violations == ()

    def test_perturbed_entry_identified(self, p3_result):
        cert = p3_result.certificate
        Q = [list(row) for row in cert.Q]
        Q[2][5] += Fraction(1, 10 ** 6)
        bad = ct.Certificate(cert.candidate, cert.c, cert.k, cert.m,
                             tuple(tuple(r) for r in Q), cert.T)
        rep = ct.verify_identity(bad)
        assert not rep.ok
        assert rep.violations  # names the violated coefficient
        assert any("sym(Q)" in v[0] or "x" in v[0] or v[0] == "1"
                   for v in rep.violations)

    def test_zero_q_cannot_match(self):
        p = ct.assemble(ct.cert_base("H6"), C87)
        dim, m = p.dim, p.m
        zq = tuple((Fraction(0),) * dim for _ in range(dim))
        zt = tuple((Fraction(0),) * m for _ in range(m))
        rep = ct.verify_identity(ct.Certificate("H6", C87, p.k, p.m, zq, zt))
        assert not rep.ok


class TestVerifyPsd:
    def test_pipeline_output_is_psd(self, p3_result):
        wit = ct.verify_psd(p3_result.certificate)
        assert wit.verdict == exactq.PSD

    def test_shifted_down_is_not_psd(self, p3_result):
        cert = p3_result.certificate
        Q = [list(row) for row in cert.Q]
        for i in range(len(Q)):
            Q[i][i] -= Fraction(1, 1000)
        bad = ct.Certificate(cert.candidate, cert.c, cert.k, cert.m,
                             tuple(tuple(r) for r in Q), cert.T)
        wit = ct.verify_psd(bad)
        assert wit.verdict == exactq.NOT_PSD
        assert exactq.q_eval([list(r) for r in bad.Q],
                             list(wit.counterexample)) < 0


class TestCertify:
    def test_p3_end_to_end(self, p3_result):
        cert = p3_result.certificate
        assert cert.candidate == "P3" and cert.c == C87
        assert (cert.k, cert.m, len(cert.Q), len(cert.T)) == (3, 3, 12, 3)
        assert ct.verify_identity(cert).ok
        assert ct.verify_psd(cert).verdict == exactq.PSD
        assert p3_result.attempts  # ladder consulted and recorded

    def test_trivial_base(self):
        r = ct.certify(ct.cert_base("K2"), 1)
        assert r.status == "FOUND"
        assert all(x == 0 for row in r.certificate.Q for x in row)
        assert r.certificate.T == ((Fraction(1),),)

    def test_deterministic(self, p3_result):
        again = ct.certify(ct.cert_base("P3"), C87)
        assert again.certificate == p3_result.certificate
        assert again.attempts == p3_result.attempts

    def test_infeasible_bound_reports_not_found(self):
        cfg = ct.CertifyConfig(max_iter=2000, solve_rounds=1)
        r = ct.certify(ct.cert_base("P3"), Fraction(9, 8), cfg)
        assert r.status == "NOT_FOUND"
        assert r.certificate is None
        assert r.stage in ("sdp_solve", "verify_psd")

    def test_denominator_ladder_small_first(self):
        ladder = ct._denominator_ladder(10 ** 4, 4 * 10 ** 4)
        assert ladder[0] == 7
        assert 21 in ladder and 10 ** 4 in ladder and 2 * 10 ** 4 in ladder
        assert ladder == sorted(ladder)


class TestCertificateIO:
    def test_round_trip(self, p3_result):
        text = ct.format_certificate(p3_result.certificate)
        again = ct.parse_certificate(text)
        assert again == p3_result.certificate

    def test_header_layout(self, p3_result):
        lines = ct.format_certificate(p3_result.certificate).splitlines()
        assert lines[0] == "candidate P3"
        assert lines[1] == "bound 8/7"
        assert lines[2] == "3 3 12"
        assert len(lines) == 3 + 12 + 3

    def test_parse_errors(self):
        with pytest.raises(ValueError, match="line 1"):
            ct.parse_certificate("bogus\n")
        with pytest.raises(ValueError, match="line 2"):
            ct.parse_certificate("candidate P3\nnope\n1 1 2\n")
        with pytest.raises(ValueError, match="line 3"):
            ct.parse_certificate("candidate P3\nbound 8/7\n3 3 11\n")
        good = "candidate K2\nbound 1/1\n2 1 3\n0/1 0/1 0/1\n0/1 0/1 0/1\n"
        with pytest.raises(ValueError, match="rows"):
            ct.parse_certificate(good)  # truncated body


class TestSoundness:
    def test_spot_check_p3(self):
        worst = ct.soundness_spot_check(ct.cert_base("P3"), C87,
                                        samples=200, seed=0)
        assert worst >= -1e-9

    def test_bridge_to_weighted_matrix(self):
        # x = sqrt(u) turns M*(x) into the weighted step matrix
        from specsum import stepmodel
        rng = np.random.default_rng(1)
        cand = stepmodel.candidate("H6")
        A = cand.graph.adjacency()
        for _ in range(100):
            u = rng.dirichlet(np.ones(6))
            x = np.sqrt(u)
            M = A * np.outer(x, x)
            w = np.linalg.eigvalsh(M)
            direct = float(w[-1] + w[-2])
            via_model = stepmodel.sigma(stepmodel.StepModel(cand, u))
            assert abs(direct - via_model) < 1e-9
