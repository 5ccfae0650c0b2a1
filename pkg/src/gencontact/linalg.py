"""Exact linear algebra over the fraction field of the coefficient algebra,
plus the numeric rank/membership helpers used for pointwise certificates.

Symbolic solves run over formal quotients num/den of Scalars with no
simplification beyond zero tests; pivots are chosen to prefer invertible
constants, then entries that are numerically nonzero at the most sample
points.  Results are converted back to honest Scalar vectors only when every
surviving denominator is an invertible constant; otherwise callers fall back
to sampled (pointwise numeric) routes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scalar import Scalar

RANK_TOL = 1e-8


@dataclass(frozen=True)
class Frac:
    num: Scalar
    den: Scalar  # never the zero Scalar

    @staticmethod
    def of(s) -> "Frac":
        if isinstance(s, Frac):
            return s
        if not isinstance(s, Scalar):
            s = Scalar.const(s)
        return Frac(s, Scalar.one())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "Frac") -> "Frac":
        return Frac(self.num * other.den + other.num * self.den,
                    self.den * other.den)

    def __sub__(self, other: "Frac") -> "Frac":
        return Frac(self.num * other.den - other.num * self.den,
                    self.den * other.den)

    def __mul__(self, other: "Frac") -> "Frac":
        return Frac(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "Frac") -> "Frac":
        if other.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return Frac(self.num * other.den, self.den * other.num)

    def __neg__(self) -> "Frac":
        return Frac(-self.num, self.den)

    def as_scalar(self) -> Scalar | None:
        """The underlying Scalar when the denominator is a constant."""
        if self.den.is_constant():
            return self.num / self.den.const_value()
        return None


def _pivot_score(entry: Frac, samples) -> tuple:
    """Sort key for pivot choice (higher is better)."""
    num = entry.num
    const = 1 if (num.is_constant() and entry.den.is_constant()) else 0
    if samples:
        nz = sum(1 for p in samples if abs(num.eval(p)) > RANK_TOL)
    else:
        nz = 1
    return (const, nz, -len(num.terms))


class LinSolveError(Exception):
    pass


def solve_linear(columns: list[list[Scalar]], target: list[Scalar],
                 samples=()) -> tuple[list[Frac], list[Scalar]] | None:
    """Solve  sum_j c_j * columns[j] = target  over the fraction field.

    Returns (coefficients, residual rows) where the residual is a list of
    Scalars that are all zero iff the system is consistent; None only when
    there is nothing to solve against (no columns) and the target is nonzero.
    """
    m = len(target)
    k = len(columns)
    rows = [[Frac.of(columns[j][i]) for j in range(k)] + [Frac.of(target[i])]
            for i in range(m)]
    piv_cols: list[int] = []
    piv_rows: list[int] = []
    for col in range(k):
        best = None
        best_score = None
        for r in range(m):
            if r in piv_rows:
                continue
            e = rows[r][col]
            if e.is_zero():
                continue
            score = _pivot_score(e, samples)
            if best is None or score > best_score:
                best, best_score = r, score
        if best is None:
            continue
        piv_cols.append(col)
        piv_rows.append(best)
        pe = rows[best][col]
        for r in range(m):
            if r == best:
                continue
            f = rows[r][col]
            if f.is_zero():
                continue
            factor = f / pe
            rows[r] = [a - factor * b for a, b in zip(rows[r], rows[best])]

    coeffs = [Frac.of(Scalar.zero())] * k
    for col, r in zip(piv_cols, piv_rows):
        coeffs[col] = rows[r][k] / rows[r][col]
    residual = []
    for r in range(m):
        if r in piv_rows:
            continue
        residual.append(rows[r][k].num)
    return coeffs, residual


def in_span_symbolic(columns: list[list[Scalar]], target: list[Scalar],
                     samples=()) -> tuple[bool, list[Frac] | None]:
    """Exact membership of target in the function-module span of columns."""
    if not columns:
        return all(t.is_zero() for t in target), []
    coeffs, residual = solve_linear(columns, target, samples)
    ok = all(r.is_zero() for r in residual)
    return ok, (coeffs if ok else None)


def kernel_basis(rows: list[list[Scalar]], samples=()) -> list[list[Scalar]] | None:
    """Basis of the kernel of a small Scalar matrix, as Scalar vectors.

    Pivots are chosen as in solve_linear.  Returns None when clearing the
    denominators would require dividing by a non-constant function (the
    caller then degrades to a sampled frame).
    """
    if not rows:
        return None
    m, k = len(rows), len(rows[0])
    work = [[Frac.of(v) for v in row] for row in rows]
    piv: list[tuple[int, int]] = []  # (row, col)
    used_rows: set[int] = set()
    used_cols: set[int] = set()
    while True:
        # global pivot choice: the best-scoring entry over all free positions,
        # so constant pivots win over function entries whenever possible
        best, best_score = None, None
        for r in range(m):
            if r in used_rows:
                continue
            for col in range(k):
                if col in used_cols:
                    continue
                e = work[r][col]
                if e.is_zero():
                    continue
                score = _pivot_score(e, samples)
                if best is None or score > best_score:
                    best, best_score = (r, col), score
        if best is None:
            break
        r0, c0 = best
        used_rows.add(r0)
        used_cols.add(c0)
        piv.append((r0, c0))
        pe = work[r0][c0]
        for r in range(m):
            if r == r0 or work[r][c0].is_zero():
                continue
            factor = work[r][c0] / pe
            work[r] = [a - factor * b for a, b in zip(work[r], work[r0])]

    piv_cols = {c: r for r, c in piv}
    free_cols = [c for c in range(k) if c not in piv_cols]
    basis = []
    for fc in free_cols:
        vec = [Frac.of(Scalar.zero())] * k
        vec[fc] = Frac.of(Scalar.one())
        for c, r in piv_cols.items():
            vec[c] = -(work[r][fc] / work[r][c])
        scalars = []
        for f in vec:
            s = f.as_scalar()
            if s is None:
                return None
            scalars.append(s)
        basis.append(scalars)
    return basis


# -- numeric helpers ---------------------------------------------------------

def eval_matrix(vectors: list[list[Scalar]], point) -> np.ndarray:
    return np.array([[c.eval(point) for c in v] for v in vectors],
                    dtype=complex) if vectors else np.zeros((0, 0), dtype=complex)


def numeric_rank(mat: np.ndarray, tol: float = RANK_TOL) -> int:
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    if s.size == 0:
        return 0
    return int(np.sum(s > tol * max(1.0, s[0])))


def lstsq_residual(columns: np.ndarray, target: np.ndarray) -> float:
    """Relative least-squares residual of expressing target in the columns."""
    scale = max(1.0, float(np.linalg.norm(target)))
    if columns.size == 0:
        return float(np.linalg.norm(target)) / scale
    sol, *_ = np.linalg.lstsq(columns, target, rcond=None)
    return float(np.linalg.norm(columns @ sol - target)) / scale


def intersection_dim(a: np.ndarray, b: np.ndarray, tol: float = RANK_TOL) -> int:
    """dim(rowspace(a) ∩ rowspace(b))."""
    ra, rb = numeric_rank(a, tol), numeric_rank(b, tol)
    if ra == 0 or rb == 0:
        return 0
    stacked = np.vstack([a, b])
    return ra + rb - numeric_rank(stacked, tol)


def intersection_basis(a: np.ndarray, b: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Rows spanning rowspace(a) ∩ rowspace(b)."""
    if a.size == 0 or b.size == 0:
        return np.zeros((0, a.shape[1] if a.size else b.shape[1]), dtype=complex)
    big = np.hstack([a.T, -b.T])            # solve a^T u = b^T v
    ns = null_space(big, tol)
    if ns.shape[1] == 0:
        return np.zeros((0, a.shape[1]), dtype=complex)
    u = ns[: a.shape[0], :]
    vecs = (a.T @ u).T
    keep = [v for v in vecs if np.linalg.norm(v) > tol]
    if not keep:
        return np.zeros((0, a.shape[1]), dtype=complex)
    arr = np.array(keep)
    # orthonormalize for stable later rank computations
    q, r = np.linalg.qr(arr.T)
    cols = [q[:, i] for i in range(q.shape[1])
            if abs(r[i, i]) > tol * max(1.0, abs(r[0, 0]))]
    return np.array(cols) if cols else np.zeros((0, a.shape[1]), dtype=complex)


def null_space(mat: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    u, s, vh = np.linalg.svd(mat)
    rank = int(np.sum(s > tol * max(1.0, s[0] if s.size else 1.0)))
    return vh[rank:].conj().T


def subspace_equal(a: np.ndarray, b: np.ndarray, tol: float = RANK_TOL) -> bool:
    ra, rb = numeric_rank(a, tol), numeric_rank(b, tol)
    if ra != rb:
        return False
    return numeric_rank(np.vstack([a, b]), tol) == ra
