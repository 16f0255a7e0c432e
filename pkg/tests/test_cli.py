import math

import pytest

from specsum import cli, graphs
from oracles import K722_SUM, PATH4_SUM


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def kv(out):
    d = {}
    for ln in out.splitlines():
        if ": " in ln:
            k, v = ln.split(": ", 1)
            d.setdefault(k, []).append(v)
    return {k: v[0] if len(v) == 1 else v for k, v in d.items()}


@pytest.fixture()
def k722_file(tmp_path):
    f = tmp_path / "k722.txt"
    f.write_text(graphs.format_graph(graphs.knpq(7, 2, 2)))
    return str(f)


@pytest.fixture()
def p4_file(tmp_path):
    f = tmp_path / "p4.txt"
    f.write_text("4 3\n1 2\n2 3\n3 4\n")
    return str(f)


class TestSpectrum:
    def test_k722(self, capsys, k722_file):
        code, out = run(capsys, "spectrum", k722_file)
        assert code == 0
        assert abs(float(kv(out)["spectral_sum"]) - K722_SUM) < 1e-9

    def test_p4(self, capsys, p4_file):
        code, out = run(capsys, "spectrum", p4_file)
        assert code == 0
        assert abs(float(kv(out)["spectral_sum"]) - PATH4_SUM) < 1e-9

    def test_empty_graph(self, capsys, tmp_path):
        f = tmp_path / "e.txt"
        f.write_text("3 0\n")
        code, out = run(capsys, "spectrum", str(f))
        assert code == 0
        assert float(kv(out)["spectral_sum"]) == 0.0

    def test_parse_error_is_usage_exit(self, capsys, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("2 1\n1 7\n")
        code = cli.main(["spectrum", str(f)])
        err = capsys.readouterr().err
        assert code == 2
        assert "error:" in err

    def test_missing_file(self, capsys):
        assert cli.main(["spectrum", "/nonexistent/g.txt"]) == 2


class TestSearch:
    def test_min_connected_n4_is_star(self, capsys):
        code, out = run(capsys, "search", "4", "--min-connected")
        d = kv(out)
        assert code == 0
        assert abs(float(d["value"]) - math.sqrt(3)) < 1e-9
        assert d["degree_sequence"] == "3 1 1 1"

    def test_max_n5_matches_conjecture_family(self, capsys):
        code, out = run(capsys, "search", "5", "--max")
        d = kv(out)
        K = graphs.knpq(5, *graphs.conjecture_pq(5))
        want = sorted((int(x) for x in K.adjacency().sum(axis=1)), reverse=True)
        assert code == 0
        assert [int(x) for x in d["degree_sequence"].split()] == want

    def test_mode_required(self, capsys):
        with pytest.raises(SystemExit) as e:
            cli.main(["search", "4"])
        assert e.value.code == 2


class TestOptimize:
    def test_p3_report(self, capsys):
        code, out = run(capsys, "optimize", "P3", "--restarts", "30", "--seed", "0")
        d = kv(out)
        assert code == 0
        assert abs(float(d["sigma"]) - 8 / 7) < 1e-6
        u = [float(x) for x in d["u"].split()]
        assert abs(u[0] - 2 / 7) < 1e-4 and abs(u[1] - 3 / 7) < 1e-4
        assert d["adjacency_criterion"] == "PASS"
        assert "pair_1_3" in d

    def test_human_table(self, capsys):
        code, out = run(capsys, "--human", "optimize", "P3", "--restarts", "5")
        assert code == 0
        assert "kappa" in out and "consistent" in out

    def test_unknown_candidate_rejected(self, capsys):
        with pytest.raises(SystemExit) as e:
            cli.main(["optimize", "P9"])
        assert e.value.code == 2

    def test_weights_evaluation_mode(self, capsys):
        code, out = run(capsys, "optimize", "P3", "--weights", "2/7,3/7,2/7")
        d = kv(out)
        assert code == 0
        assert abs(float(d["sigma"]) - 8 / 7) < 1e-12
        assert d["weights"] == "2/7,3/7,2/7"
        code, out = run(capsys, "optimize", "P3", "--weights", "0.25,0.5,0.25")
        assert abs(float(kv(out)["sigma"]) - 1.1403882032022075) < 1e-12

    def test_weights_validation(self, capsys):
        assert cli.main(["optimize", "P3", "--weights", "1/2,1/2"]) == 2
        assert cli.main(["optimize", "P3", "--weights", "1/2,1/2,1/2"]) == 2
        assert cli.main(["optimize", "P3", "--weights=-1/7,5/7,3/7"]) == 2


class TestCertifyVerify:
    def test_trivial_round_trip(self, capsys, tmp_path):
        cert = tmp_path / "k2.txt"
        code, out = run(capsys, "certify", "K2", "--bound", "1", "--out", str(cert))
        assert code == 0
        assert kv(out)["status"] == "FOUND"
        code, out = run(capsys, "verify", str(cert))
        d = kv(out)
        assert code == 0
        assert d["identity"] == "PASS" and d["psd"] == "PSD" and d["verdict"] == "PASS"

    def test_p3_round_trip_and_corruption(self, capsys, tmp_path):
        cert = tmp_path / "p3.txt"
        code, _ = run(capsys, "certify", "P3", "--out", str(cert))
        assert code == 0
        code, out = run(capsys, "verify", str(cert))
        assert code == 0 and kv(out)["verdict"] == "PASS"

        # corrupt one Q entry: exact verification must fail closed
        lines = cert.read_text().splitlines()
        row = lines[4].split()
        row[5] = "1000001/1000000" if row[5] == "1/1" else "1/1000000"
        lines[4] = " ".join(row)
        bad = tmp_path / "p3_bad.txt"
        bad.write_text("\n".join(lines) + "\n")
        code, out = run(capsys, "verify", str(bad))
        d = kv(out)
        assert code == 1
        assert d["identity"] == "FAIL" and d["verdict"] == "FAIL"
        assert "identity_violation" in d

    def test_infeasible_bound_exit_code(self, capsys):
        code, out = run(capsys, "certify", "P3", "--bound", "9/8",
                        "--max-iter", "1500")
        assert code == 1
        assert kv(out)["status"] == "NOT_FOUND"

    def test_verify_unknown_base_is_usage_error(self, capsys, tmp_path):
        f = tmp_path / "u.txt"
        f.write_text("candidate K9\nbound 1/1\n2 1 3\n" + "0/1 0/1 0/1\n" * 3
                     + "1/1\n")
        assert cli.main(["verify", str(f)]) == 2


class TestCompound:
    def test_exact_matrix(self, capsys, tmp_path):
        f = tmp_path / "m.txt"
        f.write_text("3\n2 1/2 0\n1/2 1 -1\n0 -1 3\n")
        code, out = run(capsys, "compound", str(f), "2")
        d = kv(out)
        assert code == 0
        assert d["arithmetic"] == "exact" and d["dim"] == "3"
        assert d["row"][0].split() == ["3/1", "-1/1", "0/1"]

    def test_k1_is_identity_map(self, capsys, tmp_path):
        f = tmp_path / "m.txt"
        f.write_text("2\n5 -1\n-1 2\n")
        code, out = run(capsys, "compound", str(f), "1")
        d = kv(out)
        assert d["row"][0].split() == ["5/1", "-1/1"]

    def test_kn_is_trace(self, capsys, tmp_path):
        f = tmp_path / "m.txt"
        f.write_text("2\n5 -1\n-1 2\n")
        code, out = run(capsys, "compound", str(f), "2")
        assert kv(out)["row"] == "7/1"

    def test_float_fallback(self, capsys, tmp_path):
        # 1_0 is a float literal but not a rational one, so the exact
        # reader refuses it and the float reader takes over
        f = tmp_path / "m.txt"
        f.write_text("2\n1_0 0\n0 2\n")
        code, out = run(capsys, "compound", str(f), "2")
        d = kv(out)
        assert code == 0
        assert d["arithmetic"] == "float"
        assert abs(float(d["row"]) - 12.0) < 1e-12

    def test_unparseable_either_way(self, capsys, tmp_path):
        f = tmp_path / "m.txt"
        f.write_text("2\n1.5e0x 0\n0 1\n")
        assert cli.main(["compound", str(f), "1"]) == 2

    def test_bad_k(self, capsys, tmp_path):
        f = tmp_path / "m.txt"
        f.write_text("2\n1 0\n0 1\n")
        assert cli.main(["compound", str(f), "3"]) == 2


class TestSeedFallback:
    def test_ssc_seed_env(self, capsys, monkeypatch):
        monkeypatch.setenv("SSC_SEED", "17")
        code, out = run(capsys, "optimize", "P3", "--restarts", "5")
        assert code == 0
        assert kv(out)["seed"] == "17"

    def test_explicit_seed_wins(self, capsys, monkeypatch):
        monkeypatch.setenv("SSC_SEED", "17")
        code, out = run(capsys, "optimize", "P3", "--restarts", "5", "--seed", "4")
        assert kv(out)["seed"] == "4"

    def test_invalid_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("SSC_SEED", "seventeen")
        assert cli.main(["optimize", "P3", "--restarts", "5"]) == 2


class TestDeterminism:
    def test_identical_reports_modulo_duration(self, capsys):
        def strip(out):
            return [ln for ln in out.splitlines() if not ln.startswith("duration")]

        _, o1 = run(capsys, "optimize", "H5", "--restarts", "10", "--seed", "2")
        _, o2 = run(capsys, "optimize", "H5", "--restarts", "10", "--seed", "2")
        assert strip(o1) == strip(o2)
