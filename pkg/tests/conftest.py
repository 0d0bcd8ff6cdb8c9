import pytest

from diffpi import builtin, operator_basis, parse_diff_poly

# generators of the UT2eps identity ideal, used across test modules
UT2EPS_GENERATORS = [
    "[x1,x2]^eps - [x1,x2]",
    "x1^eps*x2^eps",
    "x1^epseps - x1^eps",
]


@pytest.fixture(scope="session")
def ut2eps():
    return builtin("UT2eps")


@pytest.fixture(scope="session")
def ut2eps_ob(ut2eps):
    return operator_basis(ut2eps.algebra, ut2eps.action)


@pytest.fixture(scope="session")
def m2sl2():
    return builtin("M2sl2")


@pytest.fixture(scope="session")
def m2sl2_ob(m2sl2):
    return operator_basis(m2sl2.algebra, m2sl2.action)


@pytest.fixture(scope="session")
def ut2eps_gens(ut2eps_ob):
    return [parse_diff_poly(src, ut2eps_ob) for src in UT2EPS_GENERATORS]
