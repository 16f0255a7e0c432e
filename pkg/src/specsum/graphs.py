"""Graphs with optional loops: spectral sums, blowups, the K(n,p,q) family,
and exhaustive extremal search over all labeled graphs on small orders.

Vertices are labeled 1..n. Edges are unordered pairs {i,j}; i = j is a loop
(adjacency diagonal 1). Only base graphs carry loops; blowups reject them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import numerics

MAX = "MAX"
MIN_CONNECTED = "MIN_CONNECTED"


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        norm = set()
        for e in self.edges:
            i, j = e
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise ValueError(f"edge {e} out of range 1..{self.n}")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(norm))

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for i, j in self.edges:
            A[i - 1, j - 1] = 1.0
            A[j - 1, i - 1] = 1.0
        return A

    def has_loops(self) -> bool:
        return any(i == j for i, j in self.edges)


def graph(n: int, edges=()) -> Graph:
    return Graph(n=n, edges=frozenset(tuple(e) for e in edges))


def complete_graph(n: int) -> Graph:
    return graph(n, itertools.combinations(range(1, n + 1), 2))


@dataclass(frozen=True)
class SpectralSummary:
    eigenvalues: np.ndarray
    lambda1: float
    lambda2: float
    spectral_sum: float
    lambda2_by_convention: bool = False  # True only for n = 1


def spectral_sum(G: Graph) -> SpectralSummary:
    """lambda1 + lambda2 of the adjacency matrix (loops contribute diagonal 1)."""
    if G.n == 0:
        raise ValueError("spectral sum undefined on the empty vertex set")
    dec = numerics.eigh(G.adjacency())
    w = dec.eigenvalues
    if G.n == 1:
        return SpectralSummary(w, float(w[0]), 0.0, float(w[0]),
                               lambda2_by_convention=True)
    return SpectralSummary(w, float(w[0]), float(w[1]), float(w[0] + w[1]))


def blowup(G: Graph, t: int) -> Graph:
    """Replace each vertex by t independent copies; copies inherit adjacency.

    Spectrum of the result is {t * lambda_i(G)} plus n(t-1) zeros.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if G.has_loops():
        raise ValueError("blowup is undefined for graphs with loops")
    edges = set()
    for i, j in G.edges:
        for a in range(t):
            for b in range(t):
                edges.add(((i - 1) * t + a + 1, (j - 1) * t + b + 1))
    return graph(G.n * t, edges)


def knpq(n: int, p: int, q: int) -> Graph:
    """Join of K_{n-p-q} with the disjoint union K_p + K_q.

    Vertex split: A = 1..p, B = p+1..p+q, C = the rest; A, B, C internally
    complete, C joined to A and B, no A-B edges, no loops.
    """
    if not (n >= p >= q >= 0 and p + q <= n):
        raise ValueError(f"need n >= p >= q >= 0 and p+q <= n, got ({n},{p},{q})")
    a = list(range(1, p + 1))
    b = list(range(p + 1, p + q + 1))
    c = list(range(p + q + 1, n + 1))
    edges = set()
    for part in (a, b, c):
        edges.update(itertools.combinations(part, 2))
    for v in c:
        for w in a + b:
            edges.add((v, w))
    return graph(n, edges)


def conjecture_pq(n: int) -> tuple[int, int]:
    """The (p, q) split conjectured extremal for the spectral sum at order n.

    Writes n = 7k + r and returns:
      r in {0,1} -> (2k, 2k);      r = 2      -> (2k+1, 2k)
      r in {3,4} -> (2k+1, 2k+1);  r = 5      -> (2k+2, 2k+1)
      r = 6      -> (2k+2, 2k+2)
    """
    if n < 5:
        raise ValueError("defined for n >= 5")
    k, r = divmod(n, 7)
    if r in (0, 1):
        return (2 * k, 2 * k)
    if r == 2:
        return (2 * k + 1, 2 * k)
    if r in (3, 4):
        return (2 * k + 1, 2 * k + 1)
    if r == 5:
        return (2 * k + 2, 2 * k + 1)
    return (2 * k + 2, 2 * k + 2)


def _pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(1, n + 1), 2))


def mask_to_graph(n: int, mask: int) -> Graph:
    pairs = _pairs(n)
    return graph(n, (pairs[b] for b in range(len(pairs)) if mask >> b & 1))


def _connected_mask(n: int, mask: int, pairs) -> bool:
    # union-find over the edges selected by the bitmask
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b, (i, j) in enumerate(pairs):
        if mask >> b & 1:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    root = find(1)
    return all(find(v) == root for v in range(2, n + 1))


def _batch_eigenvalues(n: int, masks: np.ndarray, pairs) -> np.ndarray:
    A = np.zeros((masks.size, n, n))
    for b, (i, j) in enumerate(pairs):
        on = (masks >> b & 1).astype(bool)
        A[on, i - 1, j - 1] = 1.0
        A[on, j - 1, i - 1] = 1.0
    return np.linalg.eigvalsh(A)


def search_extremal(n: int, mode: str, threads: int = 1,
                    batch: int = 4096) -> tuple[Graph, float]:
    """Exhaustive scan of all 2^C(n,2) labeled loop-free graphs on n vertices.

    MAX: maximize lambda1 + lambda2 over all graphs. MIN_CONNECTED: minimize
    over connected graphs only. Ties broken by the lexicographically
    smallest edge bitmask (bit b of the mask is pair b in lexicographic
    order (1,2),(1,3),...). The eigenvalue pass runs in fixed-size batches,
    which keeps the scan deterministic; `threads` partitions batches but the
    reduction rule makes the result independent of it.
    """
    if not (2 <= n <= 8):
        raise ValueError("exhaustive search supports 2 <= n <= 8")
    if mode not in (MAX, MIN_CONNECTED):
        raise ValueError(f"unknown mode {mode!r}")
    pairs = _pairs(n)
    total = 1 << len(pairs)
    sign = 1.0 if mode == MAX else -1.0

    def scan(start: int):
        masks = np.arange(start, min(start + batch, total), dtype=np.int64)
        if mode == MIN_CONNECTED:
            keep = np.fromiter((_connected_mask(n, int(mk), pairs) for mk in masks),
                               dtype=bool, count=masks.size)
            masks = masks[keep]
            if masks.size == 0:
                return (-np.inf, -1)
        w = _batch_eigenvalues(n, masks, pairs)
        sums = sign * (w[:, -1] + w[:, -2])
        i = int(np.argmax(sums))
        return (float(sums[i]), int(masks[i]))

    starts = range(0, total, batch)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            locals_ = list(pool.map(scan, starts))
    else:
        locals_ = [scan(s) for s in starts]
    # per-batch results are independent of the thread count; fold them in
    # mask order so ties keep the lexicographically smallest bitmask
    best_val, best_mask = -np.inf, -1
    for val, mask in locals_:
        if val > best_val:
            best_val, best_mask = val, mask
    if best_mask < 0:
        raise ValueError("no graph satisfied the filter")
    return mask_to_graph(n, best_mask), sign * best_val


# --- plain-text graph format: "n m" then m lines "i j" (i = j is a loop) --

def read_graph(text: str) -> Graph:
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    if idx >= len(lines):
        raise ValueError("line 1: missing header 'n m'")
    head = lines[idx].split()
    if len(head) != 2:
        raise ValueError(f"line {idx + 1}: expected 'n m', got {lines[idx].strip()!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ValueError(f"line {idx + 1}: expected integers 'n m'")
    edges = []
    for ln_no in range(idx + 1, len(lines)):
        ln = lines[ln_no].strip()
        if not ln:
            continue
        toks = ln.split()
        if len(toks) != 2:
            raise ValueError(f"line {ln_no + 1}: expected 'i j', got {ln!r}")
        try:
            i, j = int(toks[0]), int(toks[1])
        except ValueError:
            raise ValueError(f"line {ln_no + 1}: expected integer endpoints")
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"line {ln_no + 1}: endpoint out of range 1..{n}")
        edges.append((i, j))
    if len(edges) != m:
        raise ValueError(f"header says {m} edges, file has {len(edges)}")
    return graph(n, edges)


def format_graph(G: Graph) -> str:
    es = sorted(G.edges)
    lines = [f"{G.n} {len(es)}"]
    lines += [f"{i} {j}" for i, j in es]
    return "\n".join(lines) + "\n"
