"""Candidate base graphs with loops, weighted matrices M*, spectral-sum
maximization over the weight simplex, and extremal diagnostics.

A step model is a base graph on k looped vertices plus simplex weights u;
its matrix is M*[i][j] = sqrt(u_i u_j) on edges (loops included) and 0
elsewhere. sigma = lambda1(M*) + lambda2(M*). The four catalog bases:

    P3: path 1-2-3
    P4: path 1-2-3-4
    H5: edges 12 13 23 24 34 35 45
    H6: edges 12 13 23 24 34 35 45 46 56

each with a loop on every vertex. All four are true-twin-free. The maximum
of sigma over the simplex is 8/7 for every one of them; for P3 it is
attained at u = (2/7, 3/7, 2/7), and the larger bases attain it on
embedded-path boundary points (e.g. H6 at u = (2/7, 3/7, 0, 2/7, 0, 0)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numerics
from .graphs import Graph, graph

SIMPLEX_TOL = 1e-12


@dataclass(frozen=True)
class CandidateGraph:
    name: str
    graph: Graph

    @property
    def k(self) -> int:
        return self.graph.n


def _looped(n: int, edges) -> Graph:
    return graph(n, list(edges) + [(i, i) for i in range(1, n + 1)])


CANDIDATES: dict[str, CandidateGraph] = {
    "P3": CandidateGraph("P3", _looped(3, [(1, 2), (2, 3)])),
    "P4": CandidateGraph("P4", _looped(4, [(1, 2), (2, 3), (3, 4)])),
    "H5": CandidateGraph("H5", _looped(5, [(1, 2), (1, 3), (2, 3), (2, 4),
                                           (3, 4), (3, 5), (4, 5)])),
    "H6": CandidateGraph("H6", _looped(6, [(1, 2), (1, 3), (2, 3), (2, 4),
                                           (3, 4), (3, 5), (4, 5), (4, 6),
                                           (5, 6)])),
}


def candidate(name: str) -> CandidateGraph:
    try:
        return CANDIDATES[name]
    except KeyError:
        raise ValueError(f"unknown candidate {name!r}; have {sorted(CANDIDATES)}")


@dataclass(frozen=True)
class StepModel:
    candidate: CandidateGraph
    u: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        if u.shape != (self.candidate.k,):
            raise ValueError(f"weight vector must have length {self.candidate.k}")
        if np.any(u < 0):
            raise ValueError("weights must be nonnegative")
        if abs(float(u.sum()) - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"weights must sum to 1 within {SIMPLEX_TOL}")
        u = u.copy()
        u.setflags(write=False)
        object.__setattr__(self, "u", u)


@dataclass(frozen=True)
class StepEigs:
    mu1: float
    mu2: float
    alpha: np.ndarray  # nan on zero-weight blocks
    beta: np.ndarray
    support: tuple[int, ...]  # 1-based blocks with u_i > 0


@dataclass(frozen=True)
class PairCheck:
    i: int
    j: int
    kappa: float
    adjacent: bool
    consistent: bool


def _weighted(A: np.ndarray, u: np.ndarray) -> np.ndarray:
    s = np.sqrt(u)
    return A * np.outer(s, s)


def weighted_matrix(model: StepModel) -> np.ndarray:
    """M* = D_u^{1/2} A D_u^{1/2}: sqrt(u_i u_j) on edges, loops included."""
    return _weighted(model.candidate.graph.adjacency(), model.u)


def sigma(model: StepModel) -> float:
    """lambda1(M*) + lambda2(M*), on the full matrix (zero blocks vanish)."""
    w = numerics.eigh(weighted_matrix(model)).eigenvalues
    return float(w[0] + w[1])


def _sigma_raw(A: np.ndarray, u: np.ndarray) -> float:
    # extended objective for the optimizer: u need not sum to 1
    w = np.linalg.eigvalsh(_weighted(A, np.maximum(u, 0.0)))
    return float(w[-1] + w[-2])


def _sigma_batch(A: np.ndarray, U: np.ndarray) -> np.ndarray:
    S = np.sqrt(np.maximum(U, 0.0))
    mats = A[None, :, :] * (S[:, None, :] * S[:, :, None])
    w = np.linalg.eigvalsh(mats)
    return w[:, -1] + w[:, -2]


def simplex_grid(k: int, mesh: int) -> np.ndarray:
    """All points v/mesh with v a nonnegative integer k-composition of mesh."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + [remaining])
            return
        for v in range(remaining + 1):
            rec(prefix + [v], remaining - v, slots - 1)

    rec([], mesh, k)
    return np.array(out, dtype=float) / mesh


def _ascend(A: np.ndarray, u0: np.ndarray, rng, h: float = 1e-6,
            max_iter: int = 100) -> tuple[np.ndarray, float]:
    """Projected finite-difference gradient ascent with Armijo halving."""
    k = u0.size
    u = numerics.project_simplex(u0)
    val = _sigma_raw(A, u)
    for _ in range(max_iter):
        w = np.linalg.eigvalsh(_weighted(A, u))
        if k >= 3 and abs(w[-2] - w[-3]) < 1e-9:
            # nonsmooth point: lambda2 crossing; step off it instead of
            # differentiating through the kink
            u = numerics.project_simplex(u + 1e-7 * rng.standard_normal(k))
            val = _sigma_raw(A, u)
            continue
        probes = np.repeat(u[None, :], k, axis=0) + h * np.eye(k)
        g = (_sigma_batch(A, probes) - val) / h
        g = g - g.mean()  # tangent of the simplex
        gnorm2 = float(g @ g)
        if gnorm2 < 1e-18:
            break
        t = 0.5
        improved = False
        while t > 1e-12:
            cand = numerics.project_simplex(u + t * g)
            cval = _sigma_raw(A, cand)
            if cval > val + 1e-4 * t * gnorm2:
                u, val = cand, cval
                improved = True
                break
            t /= 2.0
        if not improved:
            break
    return u, val


def maximize_sigma(cand: CandidateGraph, restarts: int = 200,
                   seed: int = 0) -> tuple[np.ndarray, float]:
    """Best (u*, sigma*) from a deterministic 1/14 simplex grid plus
    Dirichlet(1) restarts, each polished by projected ascent.

    The grid contains the exact extremal weights (2/7 = 4/14, 3/7 = 6/14),
    so the returned value is never below the best grid evaluation. Ascent
    runs from every Dirichlet start and from the best grid points (the full
    grid is evaluated, but only the top slice is polished; at k = 6 the
    grid has ~12k points and polishing all of them buys nothing).
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    A = cand.graph.adjacency()
    k = cand.k
    rng = np.random.default_rng(seed)

    grid = simplex_grid(k, 14)
    grid_vals = _sigma_batch(A, grid)

    best_u, best_val = None, -np.inf

    def consider(u, val):
        nonlocal best_u, best_val
        if val > best_val or (val == best_val and tuple(u) < tuple(best_u)):
            best_u, best_val = u.copy(), float(val)

    order = np.argsort(-grid_vals, kind="stable")
    for idx in order:
        consider(grid[idx], grid_vals[idx])
    starts = [grid[i] for i in order[:50]]
    starts += list(rng.dirichlet(np.ones(k), size=restarts))
    for u0 in starts:
        u, val = _ascend(A, np.asarray(u0, dtype=float), rng)
        consider(u, val)

    # Optima routinely sit on a simplex face; the projection leaves
    # weights at roundoff scale (~1e-17) instead of exact zeros, which
    # would drag phantom blocks into the support downstream. Snap and
    # keep the snapped point unless it actually costs anything.
    snapped = np.where(best_u < 1e-9, 0.0, best_u)
    if snapped.sum() > 0 and not np.array_equal(snapped, best_u):
        snapped /= snapped.sum()
        val = _sigma_batch(A, snapped[None, :])[0]
        if val >= best_val - 1e-9:
            best_u, best_val = snapped, float(val)
    return best_u, best_val


def step_eigs(model: StepModel) -> StepEigs:
    """Step values alpha_i = a_i/sqrt(u_i), beta_i = b_i/sqrt(u_i) of the top
    two eigenvectors, on positive-weight blocks (undefined elsewhere).

    Computed on the matrix restricted to the support: the nonzero spectrum
    is unchanged and restriction keeps the step functions unit-normalized.
    Signs: sum u_i alpha_i >= 0, and beta decreasing between the first and
    last defined blocks.
    """
    u = model.u
    support = tuple(int(i) + 1 for i in np.nonzero(u > 0)[0])
    if len(support) < 2:
        raise ValueError("need at least 2 positive-weight blocks")
    idx = [i - 1 for i in support]
    A = model.candidate.graph.adjacency()[np.ix_(idx, idx)]
    us = u[idx]
    dec = numerics.eigh(_weighted(A, us))
    mu1, mu2 = float(dec.eigenvalues[0]), float(dec.eigenvalues[1])
    a = dec.eigenvectors[:, 0]
    b = dec.eigenvectors[:, 1]
    alpha_s = a / np.sqrt(us)
    beta_s = b / np.sqrt(us)
    if float(us @ alpha_s) < 0:
        alpha_s = -alpha_s
    if beta_s[0] < beta_s[-1]:
        beta_s = -beta_s
    k = model.candidate.k
    alpha = np.full(k, np.nan)
    beta = np.full(k, np.nan)
    alpha[idx] = alpha_s
    beta[idx] = beta_s
    return StepEigs(mu1=mu1, mu2=mu2, alpha=alpha, beta=beta, support=support)


def ellipse_residual(model: StepModel) -> np.ndarray:
    """Per-block r_i = mu1 alpha_i^2 + mu2 beta_i^2 - (mu1 + mu2); nan on
    zero-weight blocks. Residuals vanish at extremal weights."""
    se = step_eigs(model)
    return se.mu1 * se.alpha ** 2 + se.mu2 * se.beta ** 2 - (se.mu1 + se.mu2)


def adjacency_criterion_check(model: StepModel, tol: float = 1e-8) -> list[PairCheck]:
    """kappa_ij = alpha_i alpha_j + beta_i beta_j for positive-weight block
    pairs (i <= j); an edge should have kappa >= -tol, a non-edge <= tol."""
    se = step_eigs(model)
    edges = model.candidate.graph.edges
    out = []
    for a in range(len(se.support)):
        for b in range(a, len(se.support)):
            i, j = se.support[a], se.support[b]
            kappa = float(se.alpha[i - 1] * se.alpha[j - 1]
                          + se.beta[i - 1] * se.beta[j - 1])
            adjacent = (min(i, j), max(i, j)) in edges
            consistent = (kappa >= -tol) if adjacent else (kappa <= tol)
            out.append(PairCheck(i=i, j=j, kappa=kappa,
                                 adjacent=adjacent, consistent=consistent))
    return out


def true_twin_check(G: Graph) -> list[tuple[int, int]]:
    """Pairs of vertices with identical closed neighborhoods."""
    closed = []
    for v in range(1, G.n + 1):
        nb = {v}
        for i, j in G.edges:
            if i == v:
                nb.add(j)
            elif j == v:
                nb.add(i)
        closed.append(nb)
    return [(i, j) for i in range(1, G.n + 1) for j in range(i + 1, G.n + 1)
            if closed[i - 1] == closed[j - 1]]
