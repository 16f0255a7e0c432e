"""Exact rational matrix arithmetic.

PSD verification by pivoted LDL^T elimination over Fraction, bounded-
denominator rationalization of floats, and exact quadratic-form evaluation.
Matrices over Q are plain lists of lists of Fraction; Fraction keeps every
value in lowest terms after each operation, which is the growth control.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

QMatrix = list[list[Fraction]]

PSD = "PSD"
NOT_PSD = "NOT_PSD"


@dataclass(frozen=True)
class PsdWitness:
    """PSD: Q = sum_r d_r w_r w_r^T exactly with d_r > 0.

    NOT_PSD: counterexample z with z^T Q z an exactly negative rational.
    """

    verdict: str
    decomposition: tuple[tuple[tuple[Fraction, ...], Fraction], ...] = ()
    counterexample: tuple[Fraction, ...] = ()


def as_qmatrix(rows: Sequence[Sequence]) -> QMatrix:
    Q = [[Fraction(x) for x in row] for row in rows]
    n = len(Q)
    if any(len(row) != n for row in Q):
        raise ValueError("matrix is not square")
    for i in range(n):
        for j in range(i):
            if Q[i][j] != Q[j][i]:
                raise ValueError(f"matrix is not symmetric at ({i},{j})")
    return Q


def q_eval(Q: Sequence[Sequence[Fraction]], z: Sequence[Fraction]) -> Fraction:
    """z^T Q z, exact."""
    n = len(Q)
    if len(z) != n or any(len(row) != n for row in Q):
        raise ValueError(f"dimension mismatch: matrix {len(Q)}, vector {len(z)}")
    total = Fraction(0)
    for i in range(n):
        zi = z[i]
        if zi == 0:
            continue
        row = Q[i]
        total += zi * sum((row[j] * z[j] for j in range(n) if z[j] != 0), Fraction(0))
    return total


def rational_approx(x: float, max_den: int) -> Fraction:
    """Best rational approximation to x with denominator <= max_den."""
    if max_den < 1:
        raise ValueError("max_den must be >= 1")
    x = float(x)
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError("x must be finite")
    return Fraction(x).limit_denominator(max_den)


def ldl_psd_check(Q_in: Sequence[Sequence]) -> PsdWitness:
    """Exact PSD check by symmetric elimination with diagonal pivoting.

    Pivot = largest remaining diagonal entry. Each positive pivot d with
    column c (c[pivot] = 1) contributes a rank-one term d*c*c^T that is
    subtracted from the residual. Accept PSD only when the residual hits
    exactly zero and the accumulated decomposition re-multiplies to Q.

    A negative remaining diagonal, or a zero diagonal with a nonzero entry
    in its row (indefinite 2x2 principal minor), yields a witness vector in
    residual coordinates that is pulled back through the recorded columns.
    """
    Q = as_qmatrix(Q_in)
    n = len(Q)
    S = [row[:] for row in Q]
    active = list(range(n))
    piv_cols: list[list[Fraction]] = []
    piv_vals: list[Fraction] = []
    piv_idx: list[int] = []

    def pull_back(y: list[Fraction]) -> tuple[Fraction, ...]:
        # find z with z^T Q z = y^T S y: z agrees with y on active indices,
        # corrections on eliminated ones kill every recorded column.
        z = y[:]
        for r in range(len(piv_cols) - 1, -1, -1):
            c = piv_cols[r]
            dot = sum((c[t] * z[t] for t in range(n) if z[t] != 0), Fraction(0))
            z[piv_idx[r]] -= dot
        return tuple(z)

    def negative_witness(y: list[Fraction]) -> PsdWitness:
        z = pull_back(y)
        val = q_eval(Q, z)
        assert val < 0
        return PsdWitness(verdict=NOT_PSD, counterexample=z)

    while active:
        p = max(active, key=lambda i: S[i][i])
        d = S[p][p]
        if d < 0:
            y = [Fraction(0)] * n
            y[p] = Fraction(1)
            return negative_witness(y)
        if d == 0:
            # every remaining diagonal is <= 0, hence exactly 0 here
            for i in active:
                if S[i][i] < 0:
                    y = [Fraction(0)] * n
                    y[i] = Fraction(1)
                    return negative_witness(y)
                for j in active:
                    if S[i][j] != 0:
                        # minor [[0, s],[s, S_jj]]: try z = e_i - sign(s) e_j
                        y = [Fraction(0)] * n
                        y[i] = Fraction(1)
                        y[j] = Fraction(-1 if S[i][j] > 0 else 1)
                        return negative_witness(y)
            break  # residual is exactly zero
        col = [Fraction(0)] * n
        for i in active:
            col[i] = S[i][p] / d
        for i in active:
            ci = col[i]
            if ci == 0:
                continue
            Si = S[i]
            for j in active:
                if col[j] != 0:
                    Si[j] -= d * ci * col[j]
        piv_cols.append(col)
        piv_vals.append(d)
        piv_idx.append(p)
        active.remove(p)

    # re-multiply the decomposition and compare with Q exactly
    R = [[Fraction(0)] * n for _ in range(n)]
    for c, d in zip(piv_cols, piv_vals):
        support = [t for t in range(n) if c[t] != 0]
        for i in support:
            dci = d * c[i]
            Ri = R[i]
            for j in support:
                Ri[j] += dci * c[j]
    if R != Q:
        raise ArithmeticError("internal error: decomposition does not re-multiply to Q")
    decomp = tuple((tuple(c), d) for c, d in zip(piv_cols, piv_vals))
    return PsdWitness(verdict=PSD, decomposition=decomp)


# --- rational rendering and the shared matrix format ---------------------

def parse_rational(tok: str) -> Fraction:
    """Parse 'p/q' or a decimal literal, exactly."""
    tok = tok.strip()
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"bad rational {tok!r}: {e}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def read_matrix_q(text: str) -> QMatrix:
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    if idx >= len(lines):
        raise ValueError("line 1: missing dimension")
    try:
        k = int(lines[idx].strip())
    except ValueError:
        raise ValueError(f"line {idx + 1}: expected integer dimension")
    if k < 1:
        raise ValueError(f"line {idx + 1}: dimension must be >= 1")
    rows: QMatrix = []
    for ln_no in range(idx + 1, len(lines)):
        ln = lines[ln_no].strip()
        if not ln:
            continue
        if len(rows) >= k:
            raise ValueError(f"line {ln_no + 1}: more than {k} rows")
        toks = ln.split()
        if len(toks) != k:
            raise ValueError(f"line {ln_no + 1}: expected {k} entries, got {len(toks)}")
        try:
            rows.append([parse_rational(t) for t in toks])
        except ValueError as e:
            raise ValueError(f"line {ln_no + 1}: {e}")
    if len(rows) != k:
        raise ValueError(f"expected {k} rows, got {len(rows)}")
    return rows


def format_matrix_q(Q: Sequence[Sequence[Fraction]]) -> str:
    lines = [str(len(Q))]
    for row in Q:
        lines.append(" ".join(format_rational(x) for x in row))
    return "\n".join(lines) + "\n"
