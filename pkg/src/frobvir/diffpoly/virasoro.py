"""Bracket, Gelfand-Fuchs cocycle, pairing and Poisson operators on the algebra-valued Virasoro side."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..algebra import AlgebraElement, DimensionMismatch
from .core import AlgDiffPoly, DiffPoly


@dataclass(frozen=True)
class VirasoroElement:
    """``(u d/dx, a)``: an algebra-valued vector field plus a central element."""

    vector_field: AlgDiffPoly
    central: AlgebraElement


@dataclass(frozen=True)
class DualElement:
    """``(m dx^2, zeta)``: a point of the regular dual."""

    moment: AlgDiffPoly
    cocentral: AlgebraElement


def bracket_X(u: AlgDiffPoly, v: AlgDiffPoly) -> AlgDiffPoly:
    """``[u d, v d] = (u v_x - u_x v) d``."""
    return u * v.D() - u.D() * v


def pointwise_commutator(u: AlgDiffPoly, v: AlgDiffPoly) -> AlgDiffPoly:
    """Loop-algebra bracket ``u v - v u``; identically zero for a commutative algebra."""
    return u * v - v * u


def cocycle_integrand(u: AlgDiffPoly, v: AlgDiffPoly) -> DiffPoly:
    """``tr(u v_xxx)``, the traced integrand of the algebra-valued Gelfand-Fuchs cocycle."""
    return (u * v.D(3)).trace()


def cocycle_value(u: AlgDiffPoly, v: AlgDiffPoly) -> AlgDiffPoly:
    """Untraced integrand ``u v_xxx`` (algebra-valued)."""
    return u * v.D(3)


def virasoro_bracket(x: VirasoroElement, y: VirasoroElement) -> tuple[AlgDiffPoly, AlgDiffPoly]:
    """Bracket on the central extension.

    The central part is returned as the algebra-valued integrand ``u v_xxx``;
    its integral over the circle is the central element of the result.
    """
    u, v = x.vector_field, y.vector_field
    return bracket_X(u, v), cocycle_value(u, v)


def pairing_density(m_hat: DualElement, u_hat: VirasoroElement) -> DiffPoly:
    """The x-dependent part ``tr(m u)`` of the pairing."""
    return (m_hat.moment * u_hat.vector_field).trace()


def pairing(m_hat: DualElement, u_hat: VirasoroElement, length):
    """``tr int m u dx + tr(zeta a)`` for an integrand that does not depend on x.

    Raises ValueError if the integrand is not constant; use
    :func:`pairing_density` for symbolic integrands.
    """
    alg = m_hat.moment.algebra
    if u_hat.vector_field.algebra.dim != alg.dim:
        raise DimensionMismatch("pairing of elements over different algebras")
    density = pairing_density(m_hat, u_hat)
    if not density.is_constant():
        raise ValueError(f"integrand {density} depends on x; integrate symbolically instead")
    central = alg.trace(alg.multiply(m_hat.cocentral, u_hat.central))
    value = density.constant_value()
    if isinstance(length, (int, Fraction)):
        return value * length + central
    return float(value) * float(length) + float(central)


def coadjoint_rhs(m: AlgDiffPoly, u: AlgDiffPoly, zeta: AlgebraElement) -> AlgDiffPoly:
    """``2 m u_x + m_x u + zeta u_xxx`` (so that ``ad*_u m`` is this times dx^2)."""
    return m * u.D() * 2 + m.D() * u + u.D(3) * zeta


def poisson_apply_J2(m: AlgDiffPoly, zeta: AlgebraElement, X: AlgDiffPoly) -> AlgDiffPoly:
    """``-(m d + d m + zeta d^3) X``."""
    return -(m * X.D() + (m * X).D() + X.D(3) * zeta)


def poisson_apply_J1(alpha: AlgebraElement, beta: AlgebraElement, X: AlgDiffPoly) -> AlgDiffPoly:
    """``(beta d^3 - alpha d) X``, the Lie-Poisson operator frozen at ``(alpha/2, -beta)``."""
    return X.D(3) * beta - X.D() * alpha


def expand_components(equation: AlgDiffPoly, algebra=None) -> list[DiffPoly]:
    """Coordinates of an algebra-valued expression in the algebra basis."""
    if algebra is not None and algebra.dim != equation.algebra.dim:
        raise DimensionMismatch("equation and algebra dimensions differ")
    return list(equation.components)
