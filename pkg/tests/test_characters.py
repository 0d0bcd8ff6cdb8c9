from fractions import Fraction
from math import factorial

import pytest

from diffpi import (builtin, cocharacter, codim, cycle_type_class_size,
                    hook_dimension, irr_char, module_trace, operator_basis,
                    partitions, support_check, support_violations)
from diffpi.characters import representative

F = Fraction


def test_partitions_small():
    assert partitions(1) == [(1,)]
    assert partitions(3) == [(3,), (2, 1), (1, 1, 1)]
    assert len(partitions(7)) == 15


def test_class_sizes_sum_to_group_order():
    for n in range(1, 8):
        assert sum(cycle_type_class_size(mu, n) for mu in partitions(n)) \
            == factorial(n)


def test_representative_has_cycle_type():
    for n in (3, 4, 5):
        for mu in partitions(n):
            perm = representative(mu, n)
            # decompose into cycles
            seen = set()
            lengths = []
            for s in range(n):
                if s in seen:
                    continue
                t, ln = s, 0
                while t not in seen:
                    seen.add(t)
                    t = perm[t]
                    ln += 1
                lengths.append(ln)
            assert tuple(sorted(lengths, reverse=True)) == mu


def test_known_character_tables():
    # standard S3 and S4 table entries
    assert irr_char((2, 1), (1, 1, 1)) == 2
    assert irr_char((2, 1), (2, 1)) == 0
    assert irr_char((2, 1), (3,)) == -1
    assert irr_char((1, 1, 1), (2, 1)) == -1
    assert irr_char((2, 2), (1, 1, 1, 1)) == 2
    assert irr_char((2, 2), (2, 1, 1)) == 0
    assert irr_char((2, 2), (2, 2)) == 2
    assert irr_char((2, 2), (3, 1)) == -1
    assert irr_char((2, 2), (4,)) == 0


@pytest.mark.parametrize("n", range(1, 8))
def test_dimension_sum_of_squares(n):
    assert sum(irr_char(lam, (1,) * n) ** 2 for lam in partitions(n)) \
        == factorial(n)


@pytest.mark.parametrize("n", range(1, 8))
def test_row_orthogonality(n):
    parts = partitions(n)
    sizes = {mu: cycle_type_class_size(mu, n) for mu in parts}
    for i, lam in enumerate(parts):
        for kap in parts[i:]:
            inner = sum(sizes[mu] * irr_char(lam, mu) * irr_char(kap, mu)
                        for mu in parts)
            assert inner == (factorial(n) if lam == kap else 0)


@pytest.mark.parametrize("n", range(1, 8))
def test_hook_dimension_matches_character(n):
    for lam in partitions(n):
        assert hook_dimension(lam) == irr_char(lam, (1,) * n)


def test_module_trace_identity_class(ut2eps, ut2eps_ob):
    for n in (1, 2, 3):
        tr = module_trace(ut2eps.algebra, ut2eps_ob, n,
                          codim(ut2eps.algebra, ut2eps_ob, n).quotient_basis)
        assert tr[(1,) * n] == codim(ut2eps.algebra, ut2eps_ob, n).c_n_L


def test_cocharacter_ut2eps_n2(ut2eps, ut2eps_ob):
    t = cocharacter(ut2eps.algebra, ut2eps_ob, 2)
    assert t.multiplicity((2,)) == 3
    assert t.multiplicity((1, 1)) == 2
    assert t.ordinary_multiplicity((2,)) == 1
    assert t.ordinary_multiplicity((1, 1)) == 1
    assert t.colength == 5
    assert t.colength_ordinary == 2
    assert t.module_character[(1, 1)] == 5
    assert t.module_character[(2,)] == 1


def test_cocharacter_ut2eps_n1(ut2eps, ut2eps_ob):
    t = cocharacter(ut2eps.algebra, ut2eps_ob, 1)
    assert t.rows == (((1,), 2, 1),)


def test_cocharacter_field_n3():
    awd = builtin("Fn(1)")
    ob = operator_basis(awd.algebra, awd.action)
    t = cocharacter(awd.algebra, ob, 3)
    assert t.multiplicity((3,)) == 1
    assert t.multiplicity((2, 1)) == 0
    assert t.multiplicity((1, 1, 1)) == 0


def test_cocharacter_reconstructs_module_trace(ut2eps, ut2eps_ob):
    for n in (2, 3):
        t = cocharacter(ut2eps.algebra, ut2eps_ob, n)
        for mu, want in t.module_character.items():
            total = sum(mL * irr_char(lam, mu) for lam, mL, _ in t.rows)
            assert total == want
        # dimension identity both differential and ordinary
        r = codim(ut2eps.algebra, ut2eps_ob, n)
        assert sum(mL * hook_dimension(lam) for lam, mL, _ in t.rows) \
            == r.c_n_L
        assert sum(mo * hook_dimension(lam) for lam, _, mo in t.rows) \
            == r.c_n_ordinary


def test_support_commutative_semisimple():
    # three copies of the field: q = 1, only the single-row partition
    awd = builtin("Fn(3)")
    ob = operator_basis(awd.algebra, awd.action)
    for n in (2, 3):
        t = cocharacter(awd.algebra, ob, n)
        assert support_check(t, 1)
        assert support_violations(t, 1) == []


def test_support_violations_report(ut2eps, ut2eps_ob):
    # exponential growth shows up as deep partitions with nonzero
    # multiplicity once n exceeds the nilpotency bound
    t = cocharacter(ut2eps.algebra, ut2eps_ob, 3)
    viol = support_violations(t, 2)
    assert support_check(t, 2) == (viol == [])
    for lam, m in viol:
        assert 3 - lam[0] >= 2 and m > 0


def test_multiplicities_never_negative(ut2eps, ut2eps_ob, m2sl2, m2sl2_ob):
    for awd, ob, n in ((builtin("UT2eps"), ut2eps_ob, 3),
                       (m2sl2, m2sl2_ob, 2)):
        t = cocharacter(awd.algebra, ob, n)
        for lam, mL, mo in t.rows:
            assert mL >= 0 and mo >= 0
            assert mo <= mL
