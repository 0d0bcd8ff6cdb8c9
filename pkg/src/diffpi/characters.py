"""Symmetric group characters and cocharacter multiplicities.

Irreducible characters come from the Murnaghan Nakayama rule on beta
sets. Multiplicities of the quotient module are recovered from exact
traces of one representative permutation per cycle type: the trace of g
is read off by expressing each permuted quotient row in the tracked row
basis. Everything is Fraction arithmetic; a multiplicity that fails to
be a non-negative integer aborts loudly.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import NamedTuple, Optional, Sequence

from .algebra import Algebra
from .codim import codim, monomial_row
from .errors import IntegrityError, NonIntegerMultiplicity
from .freediff import DiffMonomial, OperatorBasis, sn_act, DiffPoly
from .linalg import ONE, ZERO, RowSpan

Partition = tuple


def partitions(n: int) -> list[Partition]:
    """All partitions of n, weakly decreasing parts, reverse lex order
    starting at (n,)."""
    out = []

    def rec(remaining: int, maxpart: int, prefix: tuple):
        if remaining == 0:
            out.append(prefix)
            return
        for p in range(min(maxpart, remaining), 0, -1):
            rec(remaining - p, p, prefix + (p,))

    rec(n, n, ())
    return out


@lru_cache(maxsize=None)
def irr_char(lam: Partition, mu: Partition) -> int:
    """Character value chi_lambda(mu) by Murnaghan Nakayama.

    Strips of length mu[0] are located through the beta set of lambda:
    removable strips correspond to beta numbers whose decrease by the
    strip length stays non-negative and unoccupied; the sign counts the
    beta numbers jumped over.
    """
    if not lam and not mu:
        return 1
    if sum(lam) != sum(mu):
        raise ValueError("size mismatch")
    m = mu[0]
    rest = mu[1:]
    ell = len(lam)
    beta = [lam[i] + (ell - 1 - i) for i in range(ell)]
    total = 0
    occupied = set(beta)
    for i, b in enumerate(beta):
        nb = b - m
        if nb < 0 or nb in occupied:
            continue
        height = sum(1 for c in beta if nb < c < b)
        nbeta = sorted([c for c in beta if c != b] + [nb], reverse=True)
        nl = len(nbeta)
        nlam = tuple(nbeta[j] - (nl - 1 - j) for j in range(nl))
        nlam = tuple(p for p in nlam if p > 0)
        total += (-1) ** height * irr_char(nlam, rest)
    return total


def hook_dimension(lam: Partition) -> int:
    """dim of the lambda irreducible, via hook lengths (cross check)."""
    n = sum(lam)
    prodh = 1
    for i, row in enumerate(lam):
        for j in range(row):
            arm = row - j - 1
            leg = sum(1 for r in lam[i + 1:] if r > j)
            prodh *= arm + leg + 1
    return factorial(n) // prodh


def cycle_type_class_size(mu: Partition, n: int) -> int:
    """Number of permutations with cycle type mu."""
    z = 1
    counts: dict[int, int] = {}
    for p in mu:
        counts[p] = counts.get(p, 0) + 1
    for p, m in counts.items():
        z *= p ** m * factorial(m)
    return factorial(n) // z


def representative(mu: Partition, n: int) -> tuple:
    """Canonical permutation of cycle type mu: ascending cycle lengths on
    consecutive blocks, 0-indexed one line form."""
    perm = list(range(n))
    start = 0
    for length in sorted(mu):
        for i in range(length):
            perm[start + i] = start + (i + 1) % length
        start += length
    return tuple(perm)


def module_trace(a: Algebra, ob: OperatorBasis, n: int,
                 quotient_basis: Sequence[DiffMonomial]) -> dict:
    """Trace of each cycle type acting on the multilinear quotient.

    The quotient rows (tracked) form a basis; g sends basis monomial b
    to the monomial g.b whose row is expressed back in that basis. The
    trace accumulates the diagonal coefficients. Exact by construction;
    an inexpressible row means the quotient basis was not one.
    """
    span = RowSpan(track=True)
    for i, mono in enumerate(quotient_basis):
        if not span.insert(monomial_row(a, ob, mono), tag=i):
            raise IntegrityError("quotient basis rows are dependent")
    out = {}
    for mu in partitions(n):
        g = representative(mu, n)
        tr = ZERO
        for i, mono in enumerate(quotient_basis):
            moved = DiffMonomial(tuple(g[v] for v in mono.perm), mono.labels)
            combo = span.express(monomial_row(a, ob, moved))
            if combo is None:
                raise IntegrityError("permuted row escaped the quotient "
                                     "span; evaluation is not equivariant")
            tr += combo.get(i, ZERO)
        out[mu] = tr
    return out


class CocharacterTable(NamedTuple):
    """Multiplicities per partition, differential and ordinary."""

    n: int
    rows: tuple                 # (partition, m_L, m_ordinary)
    colength: int               # sum of the differential multiplicities
    colength_ordinary: int
    module_character: dict      # cycle type -> exact trace (differential)

    def multiplicity(self, lam: Partition) -> int:
        for l, mL, mo in self.rows:
            if l == lam:
                return mL
        raise KeyError(lam)

    def ordinary_multiplicity(self, lam: Partition) -> int:
        for l, mL, mo in self.rows:
            if l == lam:
                return mo
        raise KeyError(lam)


def _multiplicities(n: int, traces: dict) -> dict:
    """Inner products (1/n!) sum |class| chi(mu) trace(mu), checked
    integral and non-negative."""
    out = {}
    for lam in partitions(n):
        s = ZERO
        for mu, tr in traces.items():
            s += cycle_type_class_size(mu, n) * irr_char(lam, mu) * tr
        m = s / factorial(n)
        if m.denominator != 1 or m < 0:
            raise NonIntegerMultiplicity(
                f"multiplicity of {lam} came out {m}")
        out[lam] = int(m)
    return out


def cocharacter(a: Algebra, ob: OperatorBasis, n: int,
                budget: Optional[int] = None) -> CocharacterTable:
    """Cocharacter decomposition at degree n, with the ordinary one."""
    full = codim(a, ob, n, budget=budget)
    ordinary = codim(a, ob, n, ordinary_only=True, budget=budget)
    traces = module_trace(a, ob, n, full.quotient_basis)
    traces_ord = module_trace(a, _strip(ob), n, ordinary.quotient_basis) \
        if ordinary.quotient_basis else {mu: ZERO for mu in partitions(n)}
    m_L = _multiplicities(n, traces)
    m_ord = _multiplicities(n, traces_ord)
    rows = tuple((lam, m_L[lam], m_ord[lam]) for lam in partitions(n))
    if sum(m * irr_char(lam, tuple([1] * n)) for lam, m, _ in rows) != full.c_n_L:
        raise IntegrityError("differential multiplicities do not rebuild "
                             "the codimension")
    if sum(mo * irr_char(lam, tuple([1] * n)) for lam, _, mo in rows) \
            != ordinary.c_n_ordinary:
        raise IntegrityError("ordinary multiplicities do not rebuild the "
                             "codimension")
    return CocharacterTable(
        n=n, rows=rows,
        colength=sum(m for _, m, _ in rows),
        colength_ordinary=sum(mo for _, _, mo in rows),
        module_character={mu: traces[mu] for mu in partitions(n)})


def _strip(ob: OperatorBasis) -> OperatorBasis:
    from .codim import _identity_only
    return _identity_only(ob)


def support_violations(table: CocharacterTable, q: int) -> list:
    """Partitions below the first row longer than allowed: entries with
    |lambda| - lambda_1 >= q and nonzero differential multiplicity.

    Empty list means the support bound holds at this degree.
    """
    bad = []
    for lam, mL, _ in table.rows:
        if mL and sum(lam) - lam[0] >= q:
            bad.append((lam, mL))
    return bad


def support_check(table: CocharacterTable, q: int) -> bool:
    """True iff every nonzero multiplicity sits above the radical bound."""
    return not support_violations(table, q)
