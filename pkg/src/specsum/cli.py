"""Command-line surface: `ssc <command>`.

Commands: spectrum, search, optimize, certify, verify, compound. Output is
machine-parseable `key: value` lines (append --human for formatted tables);
every command is deterministic under a fixed --seed (default: env SSC_SEED,
else 0). Exit codes: 0 success/PASS, 1 FAIL/NOT_FOUND, 2 usage/parse error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import certify as certify_mod
from . import compound, exactq, graphs, numerics, stepmodel


@dataclass(frozen=True)
class RunReport:
    command: str
    config: tuple  # (key, value) echo of run parameters
    results: tuple
    duration_s: float
    status: int = 0
    human: str = ""  # optional formatted block, shown with --human

    def lines(self) -> list[str]:
        out = [f"command: {self.command}"]
        out += [f"{k}: {v}" for k, v in self.config]
        out += [f"{k}: {v}" for k, v in self.results]
        out.append(f"duration_s: {self.duration_s:.3f}")
        return out


def _f(x) -> str:
    return repr(float(x))


def _vec(v) -> str:
    return " ".join(_f(x) for x in np.asarray(v).ravel())


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def default_seed() -> int:
    raw = os.environ.get("SSC_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"SSC_SEED must be an integer, got {raw!r}")


def _resolve_seed(seed) -> int:
    return default_seed() if seed is None else int(seed)


def cmd_spectrum(path: str) -> RunReport:
    t0 = time.perf_counter()
    G = graphs.read_graph(_read_text(path))
    s = graphs.spectral_sum(G)
    results = [("n", str(G.n)), ("edges", str(len(G.edges))),
               ("eigenvalues", _vec(s.eigenvalues)),
               ("lambda1", _f(s.lambda1)), ("lambda2", _f(s.lambda2)),
               ("spectral_sum", _f(s.spectral_sum))]
    if s.lambda2_by_convention:
        results.append(("note", "single vertex: lambda2 is 0 by convention"))
    return RunReport("spectrum", (("file", path),), tuple(results),
                     time.perf_counter() - t0)


def cmd_search(n: int, mode: str, threads: int = 1) -> RunReport:
    t0 = time.perf_counter()
    G, val = graphs.search_extremal(n, mode, threads=threads)
    A = G.adjacency()
    degs = sorted((int(d) for d in A.sum(axis=1)), reverse=True)
    edges = " ".join(f"{i}-{j}" for i, j in sorted(G.edges))
    results = (("n", str(n)), ("mode", mode), ("value", _f(val)),
               ("edge_count", str(len(G.edges))), ("edges", edges or "none"),
               ("degree_sequence", " ".join(map(str, degs))))
    return RunReport("search", (("threads", str(threads)),), results,
                     time.perf_counter() - t0, human=graphs.format_graph(G))


def _parse_weights(text: str, k: int) -> np.ndarray:
    toks = [t for t in text.split(",") if t.strip()]
    if len(toks) != k:
        raise ValueError(f"expected {k} comma-separated weights, got {len(toks)}")
    return np.array([numerics.parse_number(t.strip()) for t in toks])


def cmd_optimize(name: str, restarts: int = 200, seed: int | None = None,
                 threads: int = 1, weights: str | None = None) -> RunReport:
    # threads accepted for interface symmetry; the optimizer is vectorized
    # internally and runs single-process regardless. With --weights the
    # model is evaluated at the given point instead of optimized.
    t0 = time.perf_counter()
    seed = _resolve_seed(seed)
    cand = stepmodel.candidate(name)
    if weights is None:
        u, val = stepmodel.maximize_sigma(cand, restarts=restarts, seed=seed)
        model = stepmodel.StepModel(cand, u)
    else:
        model = stepmodel.StepModel(cand, _parse_weights(weights, cand.k))
        u, val = model.u, stepmodel.sigma(model)
    se = stepmodel.step_eigs(model)
    resid = stepmodel.ellipse_residual(model)
    checks = stepmodel.adjacency_criterion_check(model)
    twins = stepmodel.true_twin_check(cand.graph)
    results = [("candidate", name), ("sigma", _f(val)), ("u", _vec(u)),
               ("mu1", _f(se.mu1)), ("mu2", _f(se.mu2)),
               ("alpha", _vec(se.alpha)), ("beta", _vec(se.beta)),
               ("ellipse_residual", _vec(resid))]
    for c in checks:
        results.append((f"pair_{c.i}_{c.j}",
                        f"kappa={_f(c.kappa)} adjacent={c.adjacent} consistent={c.consistent}"))
    results.append(("adjacency_criterion",
                    "PASS" if all(c.consistent for c in checks) else "FAIL"))
    results.append(("true_twins", " ".join(f"{a}-{b}" for a, b in twins) or "none"))
    rows = [f"{'pair':>6} {'kappa':>22} {'adjacent':>9} {'consistent':>11}"]
    for c in checks:
        rows.append(f"{c.i}-{c.j:<4} {c.kappa:>22.15g} {str(c.adjacent):>9} "
                    f"{str(c.consistent):>11}")
    if weights is None:
        cfg = (("restarts", str(restarts)), ("seed", str(seed)),
               ("threads", str(threads)))
    else:
        cfg = (("weights", weights),)
    return RunReport("optimize", cfg, tuple(results),
                     time.perf_counter() - t0, human="\n".join(rows))


def cmd_certify(name: str, bound: str = "8/7", max_den: int = 10 ** 4,
                tol: float = 1e-9, max_iter: int = 50000,
                seed: int | None = None, out: str | None = None) -> RunReport:
    t0 = time.perf_counter()
    seed = _resolve_seed(seed)
    cand = certify_mod.cert_base(name)
    c = exactq.parse_rational(bound)
    cfg = certify_mod.CertifyConfig(tol=tol, max_iter=max_iter, seed=seed,
                                    max_den=max_den)
    r = certify_mod.certify(cand, c, cfg)
    results = [("candidate", name), ("bound", exactq.format_rational(c)),
               ("status", r.status),
               ("sdp_status", r.solve.status),
               ("iterations", str(r.solve.iterations)),
               ("affine_residual", _f(r.solve.affine_residual)),
               ("psd_residual", _f(r.solve.psd_residual)),
               ("attempts", " ".join(f"{d}:{v}" for d, v in r.attempts) or "none")]
    status = 0
    if r.status == "FOUND":
        path = out or f"{name}_certificate.txt"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(certify_mod.format_certificate(r.certificate))
        results += [("k", str(r.certificate.k)), ("m", str(r.certificate.m)),
                    ("dimQ", str(len(r.certificate.Q))),
                    ("certificate", path)]
    else:
        results.append(("failing_stage", r.stage))
        status = 1
    cfg_echo = (("max_den", str(max_den)), ("tol", _f(tol)),
                ("max_iter", str(max_iter)), ("seed", str(seed)))
    return RunReport("certify", cfg_echo, tuple(results),
                     time.perf_counter() - t0, status=status)


def cmd_verify(path: str) -> RunReport:
    """Exact verdict from file contents alone: parse, re-derive the
    coefficient equations for the named base, compare over Q, then LDL^T."""
    t0 = time.perf_counter()
    cert = certify_mod.parse_certificate(_read_text(path))
    base = certify_mod.cert_base(cert.candidate)  # unknown name -> usage error
    results = [("candidate", cert.candidate),
               ("bound", exactq.format_rational(cert.c)),
               ("k", str(cert.k)), ("m", str(cert.m)),
               ("dimQ", str(len(cert.Q)))]
    idr = certify_mod.verify_identity(cert, base=base)
    results.append(("identity", "PASS" if idr.ok else "FAIL"))
    for coeff, r, s, got, want in idr.violations[:5]:
        results.append(("identity_violation",
                        f"coefficient {coeff} entry ({r},{s}): "
                        f"got {got}, want {want}"))
    ok = idr.ok
    if idr.ok:
        wit = certify_mod.verify_psd(cert)
        results.append(("psd", wit.verdict))
        if wit.verdict != exactq.PSD:
            ok = False
            z = " ".join(exactq.format_rational(x) for x in wit.counterexample)
            results.append(("psd_counterexample", z))
            results.append(("psd_value", exactq.format_rational(
                exactq.q_eval([list(row) for row in cert.Q], list(wit.counterexample)))))
    else:
        results.append(("psd", "SKIPPED"))
    results.append(("verdict", "PASS" if ok else "FAIL"))
    return RunReport("verify", (("file", path),), tuple(results),
                     time.perf_counter() - t0, status=0 if ok else 1)


def cmd_compound(path: str, k: int) -> RunReport:
    t0 = time.perf_counter()
    text = _read_text(path)
    try:
        M = exactq.read_matrix_q(text)
        exact = True
    except ValueError:
        M = numerics.read_matrix(text)
        exact = False
    C = compound.additive_compound(M, k)
    n = len(M) if exact else M.shape[0]
    dim = len(C) if exact else C.shape[0]
    results = [("n", str(n)), ("k", str(k)), ("dim", str(dim)),
               ("arithmetic", "exact" if exact else "float")]
    for row in C:
        if exact:
            results.append(("row", " ".join(exactq.format_rational(x) for x in row)))
        else:
            results.append(("row", _vec(row)))
    return RunReport("compound", (("file", path),), tuple(results),
                     time.perf_counter() - t0)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ssc",
        description="spectral-sum toolkit: spectra, exhaustive search, "
                    "weight optimization, and exact SOS certificates")
    ap.add_argument("--human", action="store_true",
                    help="append human-formatted tables to the report")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("spectrum", help="eigenvalues and spectral sum of a graph file")
    p.add_argument("file")
    p.set_defaults(run=lambda a: cmd_spectrum(a.file))

    p = sub.add_parser("search", help="exhaustive labeled-graph extremal search")
    p.add_argument("n", type=int)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--max", dest="mode", action="store_const",
                   const=graphs.MAX, help="maximize the spectral sum")
    g.add_argument("--min-connected", dest="mode", action="store_const",
                   const=graphs.MIN_CONNECTED,
                   help="minimize over connected graphs")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(run=lambda a: cmd_search(a.n, a.mode, threads=a.threads))

    p = sub.add_parser("optimize", help="maximize sigma over simplex weights")
    p.add_argument("candidate", choices=sorted(stepmodel.CANDIDATES))
    p.add_argument("--restarts", type=int, default=200)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--weights", default=None, metavar="W1,W2,...",
                   help="evaluate at these weights (rationals or decimals) "
                        "instead of optimizing")
    p.set_defaults(run=lambda a: cmd_optimize(a.candidate, restarts=a.restarts,
                                              seed=a.seed, threads=a.threads,
                                              weights=a.weights))

    p = sub.add_parser("certify", help="produce an exact SOS certificate")
    p.add_argument("candidate", choices=sorted(certify_mod.CERT_BASES))
    p.add_argument("--bound", default="8/7")
    p.add_argument("--max-den", type=int, default=10 ** 4)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=50000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="certificate path "
                   "(default <candidate>_certificate.txt)")
    p.set_defaults(run=lambda a: cmd_certify(a.candidate, bound=a.bound,
                                             max_den=a.max_den, tol=a.tol,
                                             max_iter=a.max_iter, seed=a.seed,
                                             out=a.out))

    p = sub.add_parser("verify", help="exactly verify a certificate file")
    p.add_argument("file")
    p.set_defaults(run=lambda a: cmd_verify(a.file))

    p = sub.add_parser("compound", help="k-th additive compound of a matrix file")
    p.add_argument("file")
    p.add_argument("k", type=int)
    p.set_defaults(run=lambda a: cmd_compound(a.file, a.k))
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.run(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    for ln in report.lines():
        print(ln)
    if args.human and report.human:
        print(report.human)
    return report.status


if __name__ == "__main__":
    sys.exit(main())
