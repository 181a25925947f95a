from fractions import Fraction
from pathlib import Path

import pytest

from frobvir.algebra import builtin_R, builtin_Z2
from frobvir.diffpoly import DiffPoly
from frobvir.euler import (
    InertiaSpec,
    Kind,
    Unsupported,
    ZeroInertia,
    build_euler_equation,
    conserved_functionals,
    drop_zeta_term,
    format_componentwise,
    hamiltonian_H2,
    rhs_is_hamiltonian_J2,
)

GOLDENS = Path(__file__).parent / "goldens"
EPS_TAGS = {-1: "m1", 0: "0", 1: "1", 2: "2"}


def z2_equation(eps, kind):
    A = builtin_Z2(eps, 1)
    one, zero = A.unit, A.zero
    alpha, beta, zeta = {
        "kdv": (one, zero, one),
        "ch": (one, one, zero),
        # the displayed HS system carries no zeta*u_xxx term
        "hs": (zero, one, zero),
    }[kind]
    return build_euler_equation(A, InertiaSpec((alpha, beta)), zeta)


@pytest.mark.parametrize("eps", list(EPS_TAGS))
@pytest.mark.parametrize("kind", ["kdv", "ch", "hs"])
def test_componentwise_golden(eps, kind):
    expected = (GOLDENS / f"z2_eps{EPS_TAGS[eps]}_{kind}.txt").read_text()
    assert format_componentwise(z2_equation(eps, kind)) == expected


def test_scalar_kdv_golden():
    R = builtin_R()
    eq = build_euler_equation(R, InertiaSpec((R.unit,)), R.unit)
    assert format_componentwise(eq) == (GOLDENS / "r_kdv.txt").read_text()


@pytest.mark.parametrize(
    "kind,expected",
    [("kdv", Kind.FKdV), ("ch", Kind.FCH), ("hs", Kind.FHS)],
)
def test_classification(kind, expected):
    assert z2_equation(2, kind).kind is expected


def test_non_invertible_alpha_is_general():
    A = builtin_Z2(0, 1)
    eq = build_euler_equation(A, InertiaSpec((A.basis(1),)), A.unit)
    assert eq.kind is Kind.General


def test_zero_inertia_rejected():
    A = builtin_Z2(1, 1)
    with pytest.raises(ZeroInertia):
        build_euler_equation(A, InertiaSpec((A.zero, A.zero)), A.unit)


def test_trailing_zero_coefficients_dropped():
    A = builtin_Z2(1, 1)
    assert InertiaSpec((A.unit, A.zero, A.zero)).n == 0


def test_symbol():
    A = builtin_Z2(1, 1)
    spec = InertiaSpec((A.unit, A.element([0, 1])))
    assert spec.symbol(2) == A.element([1, 4])
    assert spec.is_generically_invertible()
    hs = InertiaSpec((A.zero, A.unit))
    assert not A.is_invertible(hs.symbol(0))
    assert hs.is_generically_invertible()


def test_higher_order_moment_printing():
    R = builtin_R()
    eq = build_euler_equation(R, InertiaSpec((R.unit, R.unit, R.unit)), R.zero)
    assert format_componentwise(eq).splitlines()[-1] == "m = u - u_xx + u_xxxx"


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("alg", [builtin_R(), builtin_Z2(1, 1)], ids=["R", "Z2(1)"])
def test_higher_order_j2_form(n, alg):
    coeffs = tuple(alg.element([Fraction(j + 1)] + [Fraction(j)] * (alg.dim - 1)) for j in range(n + 1))
    eq = build_euler_equation(alg, InertiaSpec(coeffs), alg.unit)
    rep = rhs_is_hamiltonian_J2(eq)
    assert rep.passed, rep.failures
    assert not rhs_is_hamiltonian_J2(drop_zeta_term(eq)).passed


def test_h2_undefined_for_higher_order():
    R = builtin_R()
    eq = build_euler_equation(R, InertiaSpec((R.unit, R.unit, R.unit)), R.zero)
    with pytest.raises(Unsupported):
        hamiltonian_H2(eq)


def test_two_traces_give_two_functionals():
    A1, A2 = builtin_Z2(2, 1), builtin_Z2(2, 2)
    eq = build_euler_equation(A1, InertiaSpec((A1.unit,)), A1.unit)
    out = conserved_functionals(eq, [A1, A2])
    v, w = DiffPoly.var("v"), DiffPoly.var("w")
    assert out[0]["trace"] == "tr1" and out[1]["trace"] == "tr2"
    # tr1(u u)/2 = (v^2 + 2 w^2)/2,  tr2(u u)/2 = v w
    assert out[0]["H1"] == v * v * Fraction(1, 2) + w * w
    assert out[1]["H1"] == v * w
