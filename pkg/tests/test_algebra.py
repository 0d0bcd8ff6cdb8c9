from fractions import Fraction

import pytest

from corpus import cells_algebra, random_split_algebra, truncated_poly
from diffpi import (Algebra, AlgebraWithDerivations, Derivation,
                    InvariantViolation, NonSplit, builtin, check_l_stability,
                    direct_sum, inner_derivation, make_action, radical,
                    radical_powers, split_derivation, wedderburn)

F = Fraction
Z = F(0)


def vec(*xs):
    return tuple(F(x) for x in xs)


def quaternions() -> Algebra:
    # basis 1, i, j, k over the rationals
    one = F(1)
    m = F(-1)
    tbl = {
        (0, 0): {0: one}, (0, 1): {1: one}, (0, 2): {2: one}, (0, 3): {3: one},
        (1, 0): {1: one}, (2, 0): {2: one}, (3, 0): {3: one},
        (1, 1): {0: m}, (2, 2): {0: m}, (3, 3): {0: m},
        (1, 2): {3: one}, (2, 1): {3: m},
        (2, 3): {1: one}, (3, 2): {1: m},
        (3, 1): {2: one}, (1, 3): {2: m},
    }
    return Algebra(dim=4, basis_labels=("u", "i", "j", "k"), table=tbl,
                   unit=vec(1, 0, 0, 0))


def gaussian_field() -> Algebra:
    # Q(i): does not split over the rationals
    one = F(1)
    tbl = {(0, 0): {0: one}, (0, 1): {1: one}, (1, 0): {1: one},
           (1, 1): {0: F(-1)}}
    return Algebra(dim=2, basis_labels=("one", "t"), table=tbl,
                   unit=vec(1, 0))


def test_builtin_ut2eps_structure(ut2eps):
    a = ut2eps.algebra
    assert a.dim == 3
    assert a.basis_labels == ("e11", "e22", "e12")
    assert a.associativity_witness() is None
    assert a.unit_witness() is None
    e11, e22, e12 = (a.basis_vector(i) for i in range(3))
    assert a.multiply(e11, e12) == e12
    assert a.multiply(e12, e22) == e12
    assert a.multiply(e12, e12) == vec(0, 0, 0)
    assert ut2eps.action.lie_dim == 1
    assert not ut2eps.action.killing_nondegenerate
    eps = ut2eps.action.generators[0]
    assert eps.apply(e12) == e12
    assert eps.apply(e11) == vec(0, 0, 0)


def test_builtin_m2sl2_structure(m2sl2):
    a = m2sl2.algebra
    assert a.dim == 4
    assert a.associativity_witness() is None
    assert m2sl2.action.lie_dim == 3
    assert m2sl2.action.killing_nondegenerate
    for d in m2sl2.action.generators:
        assert d.leibniz_witness(a) is None


def test_builtin_sums_and_unknown():
    s = builtin("Fn(1)+Fn(1)")
    assert s.algebra.dim == 2
    assert s.algebra.unit == vec(1, 1)
    with pytest.raises(InvariantViolation):
        builtin("nosuch")
    with pytest.raises(InvariantViolation):
        builtin("Fn(0)")


def test_builtin_matrix_algebras():
    ut3 = builtin("UTk(3)").algebra
    assert ut3.dim == 6
    assert ut3.associativity_witness() is None
    m2 = builtin("Mk(2)").algebra
    assert m2.dim == 4
    assert m2.associativity_witness() is None


def test_inner_derivation_leibniz():
    a = builtin("Mk(2)").algebra
    x = vec(1, 2, -1, F(1, 2))
    d = inner_derivation(a, x)
    assert d.leibniz_witness(a) is None
    # inner derivations kill the element itself
    assert d.apply(x) == (Z,) * 4


def test_make_action_rejects_non_leibniz():
    a = truncated_poly(2, unital=True)
    bad = Derivation(name="d", matrix=((F(1), Z), (Z, Z)))
    with pytest.raises(InvariantViolation):
        make_action(a, [bad])


def test_make_action_closes_lie_algebra():
    a = builtin("Mk(2)").algebra
    d1 = inner_derivation(a, vec(0, 1, 0, 0), name="a")
    d2 = inner_derivation(a, vec(0, 0, 1, 0), name="b")
    act = make_action(a, [d1, d2])
    # ad(e12), ad(e21) bracket to the diagonal derivation
    assert act.lie_dim == 3


def test_radical_ut2(ut2eps):
    a = ut2eps.algebra
    rad = radical(a)
    assert len(rad) == 1
    assert rad[0] == vec(0, 0, 1)
    powers = radical_powers(a, rad)
    assert len(powers) == 1  # J^2 = 0, so q = 2
    assert wedderburn(a).nilpotency_index == 2


def test_radical_semisimple_and_nilpotent():
    assert radical(builtin("Fn(3)").algebra) == []
    assert radical(builtin("Mk(2)").algebra) == []
    nil = truncated_poly(3, unital=False)
    assert len(radical(nil)) == nil.dim
    assert wedderburn(nil).nilpotency_index == 3
    assert wedderburn(nil).block_dims == ()


def test_wedderburn_ut2(ut2eps):
    wd = wedderburn(ut2eps.algebra)
    assert wd.block_dims == (1, 1)
    assert [v for v in wd.block_idempotents] == [vec(1, 0, 0), vec(0, 1, 0)]
    assert set(wd.radical_path_graph) == {(0, 1)}
    assert len(wd.complement_basis) == 2


def test_wedderburn_ut3_path_graph():
    wd = wedderburn(builtin("UTk(3)").algebra)
    assert wd.block_dims == (1, 1, 1)
    assert set(wd.radical_path_graph) == {(0, 1), (0, 2), (1, 2)}
    assert wd.nilpotency_index == 3


def test_wedderburn_m2():
    wd = wedderburn(builtin("Mk(2)").algebra)
    assert wd.block_dims == (2,)
    assert len(wd.block_idempotents) == 1
    assert wd.radical_basis == ()


def test_wedderburn_complement_is_multiplicative(ut2eps):
    a = ut2eps.algebra
    wd = wedderburn(a)
    from diffpi.linalg import RowSpan
    span = RowSpan()
    for v in wd.complement_basis:
        span.insert({i: x for i, x in enumerate(v) if x})
    for u in wd.complement_basis:
        for v in wd.complement_basis:
            w = a.multiply(u, v)
            row = {i: x for i, x in enumerate(w) if x}
            assert not row or span.contains(row)


def test_wedderburn_seed_determinism():
    a = builtin("UTk(3)").algebra
    w1 = wedderburn(a, seed=0)
    w2 = wedderburn(a, seed=0)
    assert w1 == w2


def test_split_derivation_recovers_eps(ut2eps):
    a = ut2eps.algebra
    wd = wedderburn(a)
    eps = ut2eps.action.generators[0]
    x, dprime = split_derivation(a, wd, eps)
    assert inner_derivation(a, x).matrix == eps.matrix
    assert all(not any(row) for row in dprime.matrix)


def test_split_derivation_all_inner_on_m2(m2sl2):
    a = m2sl2.algebra
    wd = wedderburn(a)
    for d in m2sl2.action.generators:
        x, dprime = split_derivation(a, wd, d)
        assert all(not any(row) for row in dprime.matrix)
        assert inner_derivation(a, x).matrix == d.matrix


def test_split_derivation_outer_part():
    # scaling derivation on F + J is not inner; the outer part must
    # vanish on the lifted complement and reproduce d on the radical
    a = truncated_poly(2, unital=True)
    d = Derivation(name="d", matrix=((Z, Z), (Z, F(1))))
    assert d.leibniz_witness(a) is None
    wd = wedderburn(a)
    x, dprime = split_derivation(a, wd, d)
    for b in wd.complement_basis:
        assert dprime.apply(b) == (Z, Z)
    t = a.basis_vector(1)
    assert dprime.apply(t) == d.apply(t)


def test_nonsplit_raises():
    with pytest.raises(NonSplit):
        wedderburn(gaussian_field())


def test_quaternions_pass_as_one_block():
    # a rational division algebra of square dimension is reported as a
    # single block; the dimension found is the one the exponent needs
    wd = wedderburn(quaternions())
    assert wd.block_dims == (2,)
    assert wd.radical_basis == ()


def test_radical_stable_under_builtin_actions():
    for name in ("UT2eps", "M2sl2", "UTk(2)", "UTk(3)", "Mk(2)", "Fn(2)"):
        awd = builtin(name)
        rad = radical(awd.algebra)
        assert check_l_stability(awd.algebra, awd.action, rad)


def test_direct_sum_structure(ut2eps):
    s = direct_sum(ut2eps, ut2eps)
    a = s.algebra
    assert a.dim == 6
    assert a.basis_labels[0] == "1:e11" and a.basis_labels[3] == "2:e11"
    assert a.unit == vec(1, 1, 0, 1, 1, 0)
    # cross terms vanish
    assert a.multiply(a.basis_vector(0), a.basis_vector(3)) == (Z,) * 6
    assert len(s.action.generators) == 1
    assert s.action.generators[0].name == "eps"


def test_direct_sum_rejects_mismatched_actions(ut2eps):
    with pytest.raises(InvariantViolation):
        direct_sum(ut2eps, builtin("Fn(1)"))


def test_corpus_algebras_are_valid():
    for seed in range(12):
        awd = random_split_algebra(seed)
        a = awd.algebra
        assert a.dim <= 4
        assert a.associativity_witness() is None
        if a.unit is not None:
            assert a.unit_witness() is None
        for d in awd.action.generators:
            assert d.leibniz_witness(a) is None
        assert check_l_stability(a, awd.action, radical(a))
        wd = wedderburn(a)
        assert sum(len(b) for b in wd.block_bases) + len(wd.radical_basis) \
            == a.dim


def test_cells_algebra_rejects_open_sets():
    with pytest.raises(ValueError):
        cells_algebra([(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)])
