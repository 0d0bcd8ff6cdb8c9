"""Exact sparse linear algebra over the rationals.

Scalars are fractions.Fraction throughout: arithmetic is exact and
canonical (normalized sign, lowest terms), so equality of results never
depends on evaluation order and no rounding ever happens. Matrices are
dict-of-dicts sparse; the elimination keeps rows rescaled to primitive
integer vectors to control coefficient growth, in the spirit of
fraction-free Gaussian elimination.

All pivot choices are deterministic: Markowitz score with (row, col)
lexicographic tie break for rank, leftmost column with smallest row
index elsewhere. Same input, same pivots, same output.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def as_scalar(x) -> Fraction:
    """Coerce ints, strings like '3/4', and Fractions to a canonical Scalar."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


class SparseMatrix:
    """Immutable-ish sparse rational matrix, rows as dicts col -> Scalar."""

    def __init__(self, nrows: int, ncols: int, rows: Optional[list[dict]] = None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = [dict(r) for r in rows] if rows is not None else [
            {} for _ in range(nrows)]
        if len(self.rows) != nrows:
            raise ValueError("row count mismatch")

    @classmethod
    def from_dense(cls, dense: Iterable[Iterable]) -> "SparseMatrix":
        materialized = [list(r) for r in dense]
        width = max((len(r) for r in materialized), default=0)
        rows = [{j: as_scalar(v) for j, v in enumerate(r) if v}
                for r in materialized]
        return cls(len(rows), width, rows)

    def entry(self, i: int, j: int) -> Fraction:
        return self.rows[i].get(j, ZERO)

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    def dense(self) -> list[list[Fraction]]:
        return [[self.rows[i].get(j, ZERO) for j in range(self.ncols)]
                for i in range(self.nrows)]

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def _primitive(row: dict) -> dict:
    """Rescale a sparse row to integer entries with content 1.

    Keeps numbers small during elimination; scaling does not change the
    row space. The sign of the leading (smallest column) entry is made
    positive so the result is canonical.
    """
    if not row:
        return row
    den = 1
    for v in row.values():
        den = den * v.denominator // gcd(den, v.denominator)
    num = 0
    for v in row.values():
        num = gcd(num, abs(v.numerator * (den // v.denominator)))
    if num == 0:
        return {}
    lead = min(row)
    scale = Fraction(den, num)
    if row[lead] < 0:
        scale = -scale
    return {j: v * scale for j, v in row.items()}


def rank(m: SparseMatrix) -> int:
    """Rank by sparse elimination with Markowitz pivoting.

    Pivot = entry minimizing (nnz(row)-1)*(nnz(col)-1), ties broken by
    (row, col) lexicographic order.
    """
    rows = {i: _primitive(r) for i, r in enumerate(m.rows) if r}
    cols: dict[int, set] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    rk = 0
    while rows:
        best = None
        for i in sorted(rows):
            r = rows[i]
            ri = len(r) - 1
            for j in r:
                score = ri * (len(cols[j]) - 1)
                key = (score, i, j)
                if best is None or key < best:
                    best = key
        _, pi, pj = best
        piv_row = rows.pop(pi)
        piv = piv_row[pj]
        for j in piv_row:
            cols[j].discard(pi)
        for i in list(cols[pj]):
            r = rows[i]
            factor = r[pj] / piv
            for j, v in piv_row.items():
                nv = r.get(j, ZERO) - factor * v
                if nv:
                    if j not in r:
                        cols[j].add(i)
                    r[j] = nv
                else:
                    if j in r:
                        del r[j]
                        cols[j].discard(i)
            if r:
                rows[i] = _primitive(r)
            else:
                del rows[i]
        rk += 1
    return rk


def _eliminate(rows: list[dict], ncols: int):
    """Row echelon, returning (pivots, reduced rows).

    pivots is a list of (col, row_index) in elimination order. Rows are
    fully reduced (entries above and below pivots cleared) and pivot
    entries normalized to 1. Deterministic: columns scanned left to
    right, pivot row = fewest nonzeros then smallest index.
    """
    work = [dict(r) for r in rows]
    pivots = []
    used = set()
    for col in range(ncols):
        cand = [i for i in range(len(work)) if i not in used and col in work[i]]
        if not cand:
            continue
        pi = min(cand, key=lambda i: (len(work[i]), i))
        piv = work[pi][col]
        work[pi] = {j: v / piv for j, v in work[pi].items()}
        for i in range(len(work)):
            if i != pi and col in work[i]:
                f = work[i][col]
                row = work[i]
                for j, v in work[pi].items():
                    nv = row.get(j, ZERO) - f * v
                    if nv:
                        row[j] = nv
                    elif j in row:
                        del row[j]
        used.add(pi)
        pivots.append((col, pi))
    return pivots, work


def nullspace(m: SparseMatrix) -> list[list[Fraction]]:
    """Basis of the right kernel, as dense vectors of length ncols.

    One basis vector per free column, in increasing column order, with a
    1 in the free position. Exact and deterministic.
    """
    pivots, work = _eliminate(m.rows, m.ncols)
    piv_cols = {c: i for c, i in pivots}
    basis = []
    for free in range(m.ncols):
        if free in piv_cols:
            continue
        vec = [ZERO] * m.ncols
        vec[free] = ONE
        for c, i in pivots:
            v = work[i].get(free, ZERO)
            if v:
                vec[c] = -v
        basis.append(vec)
    return basis


def solve(m: SparseMatrix, b: list) -> Optional[list[Fraction]]:
    """One exact solution of m x = b, or None if inconsistent.

    Free variables are set to zero, which fixes the returned solution
    uniquely given the deterministic elimination.
    """
    if len(b) != m.nrows:
        raise ValueError("rhs length mismatch")
    aug = []
    bc = m.ncols
    for i, r in enumerate(m.rows):
        row = dict(r)
        v = as_scalar(b[i])
        if v:
            row[bc] = v
        aug.append(row)
    pivots, work = _eliminate(aug, m.ncols)
    for r in work:
        if r and set(r) == {bc}:
            return None
    x = [ZERO] * m.ncols
    for c, i in pivots:
        x[c] = work[i].get(bc, ZERO)
    # paranoia: residual check is cheap at our sizes
    for i, r in enumerate(m.rows):
        s = sum((v * x[j] for j, v in r.items()), ZERO)
        if s != as_scalar(b[i]):
            return None
    return x


class RowSpan:
    """Incremental echelon span of sparse rows.

    insert() reduces a row against the current echelon and, if a nonzero
    residue remains, stores it (normalized to leading coefficient 1,
    leading = smallest column). Rows inserted earlier always win ties,
    so with rows offered in a fixed order the accepted set is canonical.

    With track=True each stored row remembers its expression in terms of
    the ORIGINAL inserted rows, so express() can write any vector of the
    span as a combination of accepted originals.
    """

    def __init__(self, track: bool = False):
        self.pivots: dict[int, dict] = {}
        self.track = track
        self.combos: dict[int, dict] = {}
        self.count = 0

    def __len__(self):
        return len(self.pivots)

    def _reduce(self, row: dict):
        row = dict(row)
        combo: dict[int, Fraction] = {}
        while row:
            lead = min(row)
            piv = self.pivots.get(lead)
            if piv is None:
                break
            f = row[lead]
            for j, v in piv.items():
                nv = row.get(j, ZERO) - f * v
                if nv:
                    row[j] = nv
                elif j in row:
                    del row[j]
            if self.track:
                for k, v in self.combos[lead].items():
                    nv = combo.get(k, ZERO) - f * v
                    if nv:
                        combo[k] = nv
                    elif k in combo:
                        del combo[k]
        return row, combo

    def insert(self, row: dict, tag=None) -> bool:
        """Add a row to the span. True if it enlarged the span."""
        residue, combo = self._reduce(row)
        if not residue:
            return False
        lead = min(residue)
        inv = ONE / residue[lead]
        self.pivots[lead] = {j: v * inv for j, v in residue.items()}
        if self.track:
            key = tag if tag is not None else self.count
            combo = {k: v * inv for k, v in combo.items()}
            combo[key] = combo.get(key, ZERO) + inv
            self.combos[lead] = combo
        self.count += 1
        return True

    def contains(self, row: dict) -> bool:
        residue, _ = self._reduce(row)
        return not residue

    def express(self, row: dict) -> Optional[dict]:
        """Write row as {tag: coeff} over accepted originals, or None.

        Only available with track=True.
        """
        if not self.track:
            raise ValueError("span built without tracking")
        residue, combo = self._reduce(row)
        if residue:
            return None
        return {k: -v for k, v in combo.items()}

    def basis_rows(self) -> list[dict]:
        """Echelon rows ordered by leading column."""
        return [dict(self.pivots[c]) for c in sorted(self.pivots)]
