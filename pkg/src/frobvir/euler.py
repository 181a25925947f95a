"""Euler equations on the dual of the algebra-valued Virasoro algebra.

For an inertia specification ``(alpha_0, ..., alpha_n)`` the moment is
``m = alpha_0 u + sum_k (-1)^k alpha_k u^(2k)`` and the flow is

    m_t = -(2 m u_x + m_x u + zeta u_xxx),   zeta_t = 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import AlgebraElement, DegenerateTrace, FrobeniusAlgebra, to_fraction
from .diffpoly.core import AlgDiffPoly, DiffPoly, alg_variational_derivative, format_terms, mono_str
from .diffpoly.verify import h2_density
from .diffpoly.virasoro import coadjoint_rhs, poisson_apply_J2
from .report import VerificationReport


class ZeroInertia(ValueError):
    pass


class Unsupported(ValueError):
    pass


class Kind(enum.Enum):
    FKdV = "F-KdV"
    FCH = "F-CH"
    FHS = "F-HS"
    General = "general"


def u_names(dim: int) -> list[str]:
    if dim == 1:
        return ["u"]
    if dim == 2:
        return ["v", "w"]
    return [f"u{i + 1}" for i in range(dim)]


def m_names(dim: int) -> list[str]:
    if dim == 1:
        return ["m"]
    if dim == 2:
        return ["p", "q"]
    return [f"m{i + 1}" for i in range(dim)]


@dataclass(frozen=True)
class InertiaSpec:
    """Coefficients ``alpha_0..alpha_n`` of ``Lambda = alpha_0 + sum_k (-1)^k alpha_k d^(2k)``.

    Trailing zero coefficients are dropped, so ``(alpha, 0)`` has ``n == 0``.
    """

    coefficients: tuple

    def __post_init__(self):
        coeffs = list(self.coefficients)
        if not coeffs:
            raise ZeroInertia("inertia needs at least one coefficient")
        dims = {c.algebra.dim for c in coeffs}
        if len(dims) != 1:
            raise ValueError("inertia coefficients live in different algebras")
        while len(coeffs) > 1 and coeffs[-1].is_zero():
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def from_alpha_beta(cls, alpha: AlgebraElement, beta: AlgebraElement) -> "InertiaSpec":
        return cls((alpha, beta))

    @property
    def n(self) -> int:
        return len(self.coefficients) - 1

    @property
    def algebra(self) -> FrobeniusAlgebra:
        return self.coefficients[0].algebra

    @property
    def alpha(self) -> AlgebraElement:
        return self.coefficients[0]

    @property
    def beta(self) -> AlgebraElement:
        return self.coefficients[1] if self.n >= 1 else self.algebra.zero

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def apply(self, u: AlgDiffPoly) -> AlgDiffPoly:
        result = u * self.coefficients[0]
        for k, a in enumerate(self.coefficients[1:], start=1):
            if not a.is_zero():
                term = u.D(2 * k) * a
                result = result + (term if k % 2 == 0 else -term)
        return result

    def symbol(self, kappa) -> AlgebraElement:
        """``alpha_0 + sum_k alpha_k kappa^(2k)``, the action on Fourier mode ``exp(i kappa x)``."""
        alg = self.algebra
        if alg.exact and isinstance(kappa, (int, Fraction)):
            k2 = to_fraction(kappa) ** 2
        else:
            alg = alg.to_float()
            k2 = float(kappa) ** 2
        total = alg.element(self.coefficients[0].coeffs)
        power = 1
        for a in self.coefficients[1:]:
            power = power * k2
            total = total + alg.element(a.coeffs).scale(power)
        return total

    def symbol_matrices(self, kappas: np.ndarray) -> np.ndarray:
        """Float regular-representation matrices ``L_{S(kappa)}``, shape (len(kappas), l, l)."""
        alg = self.algebra
        C = alg.C
        mats = [np.tensordot(np.array(a.coeffs, dtype=float), C, axes=([0], [0])).T for a in self.coefficients]
        k2 = np.asarray(kappas, dtype=float) ** 2
        out = np.zeros((len(k2), alg.dim, alg.dim))
        for k, M in enumerate(mats):
            out += (k2**k)[:, None, None] * M
        return out

    def is_generically_invertible(self) -> bool:
        """Whether ``det L_{S(kappa)}`` is not identically zero as a polynomial in kappa^2."""
        alg = self.algebra
        for s in range(alg.dim * self.n + 1):
            if alg.is_invertible(self.symbol(s)):
                return True
        return False

    def __str__(self):
        return "(" + ", ".join(str(a) for a in self.coefficients) + ")"


def classify(inertia: InertiaSpec, zeta: AlgebraElement) -> Kind:
    n = inertia.n
    alpha0 = inertia.alpha
    if n == 0:
        if not alpha0.is_zero() and not zeta.is_zero() and inertia.algebra.is_invertible(alpha0):
            return Kind.FKdV
        return Kind.General
    if n == 1 and not inertia.beta.is_zero():
        return Kind.FHS if alpha0.is_zero() else Kind.FCH
    return Kind.General


@dataclass(frozen=True)
class EulerEquation:
    algebra: FrobeniusAlgebra
    inertia: InertiaSpec
    zeta: AlgebraElement
    kind: Kind
    m_of_u: AlgDiffPoly
    rhs: AlgDiffPoly = field(repr=False)  # m_t in terms of u only

    @property
    def u(self) -> AlgDiffPoly:
        return AlgDiffPoly.field(self.algebra, u_names(self.algebra.dim))

    @property
    def m(self) -> AlgDiffPoly:
        return AlgDiffPoly.field(self.algebra, m_names(self.algebra.dim))

    @property
    def rhs_moment_form(self) -> AlgDiffPoly:
        """``-(2 m u_x + m_x u + zeta u_xxx)`` with m kept as an independent field."""
        return -coadjoint_rhs(self.m, self.u, self.zeta)

    def moment_map(self) -> dict[str, DiffPoly]:
        return self.m_of_u.field_map(m_names(self.algebra.dim))

    def with_trace(self, algebra: FrobeniusAlgebra) -> "EulerEquation":
        """Same flow, viewed over another trace on the same multiplication table."""
        if not algebra.same_multiplication(self.algebra):
            raise ValueError("trace choice has a different multiplication table")
        coeffs = tuple(algebra.element(a.coeffs) for a in self.inertia.coefficients)
        return build_euler_equation(algebra, InertiaSpec(coeffs), algebra.element(self.zeta.coeffs))


def build_euler_equation(algebra: FrobeniusAlgebra, inertia: InertiaSpec, zeta: AlgebraElement) -> EulerEquation:
    if inertia.is_zero():
        raise ZeroInertia("inertia operator is identically zero")
    if inertia.algebra.dim != algebra.dim or zeta.algebra.dim != algebra.dim:
        raise ValueError("inertia/zeta dimension does not match the algebra")
    inertia = InertiaSpec(tuple(algebra.element(a.coeffs) for a in inertia.coefficients))
    zeta = algebra.element(zeta.coeffs)
    u = AlgDiffPoly.field(algebra, u_names(algebra.dim))
    m = inertia.apply(u)
    rhs = -coadjoint_rhs(m, u, zeta)
    return EulerEquation(algebra, inertia, zeta, classify(inertia, zeta), m, rhs)


def hamiltonian_H1(eq: EulerEquation) -> DiffPoly:
    """Density of ``1/2 tr int m u dx`` in the u-variables."""
    return (eq.m_of_u * eq.u).trace() * Fraction(1, 2)


def hamiltonian_H2(eq: EulerEquation) -> DiffPoly:
    """Density of ``1/2 tr int (zeta u u_xx + alpha u^3 - 1/2 beta u^2 u_xx) dx``."""
    if eq.inertia.n >= 2:
        raise Unsupported("the second Hamiltonian is only defined for inertia of order n <= 1")
    return h2_density(eq.u, eq.inertia.alpha, eq.inertia.beta, eq.zeta)


def conserved_functionals(eq: EulerEquation, trace_choices: Sequence[FrobeniusAlgebra]) -> list[dict]:
    """H1 (and H2 when defined) under each trace on the equation's multiplication table."""
    out = []
    for alg in trace_choices:
        if not alg.same_multiplication(eq.algebra):
            raise DegenerateTrace(f"trace {alg.trace_name} is attached to a different multiplication table")
        view = eq.with_trace(alg)
        entry = {"trace": alg.trace_name, "H1": hamiltonian_H1(view)}
        if eq.inertia.n <= 1:
            entry["H2"] = hamiltonian_H2(view)
        out.append(entry)
    return out


def rhs_is_hamiltonian_J2(eq: EulerEquation) -> VerificationReport:
    """Check ``m_t = J2 dH1/dm`` with ``dH1/dm = u``; valid for every n."""
    report = VerificationReport(f"J2 Hamiltonian form, {eq.kind.value}, inertia={eq.inertia}, zeta={eq.zeta}")
    names = u_names(eq.algebra.dim)
    dH1 = alg_variational_derivative(hamiltonian_H1(eq), eq.algebra, names)
    report.check("dH1/du = Lambda(u)", dH1, eq.m_of_u)
    report.check("J2(m, zeta) u = rhs", poisson_apply_J2(eq.m_of_u, eq.zeta, eq.u), eq.rhs)
    return report


def drop_zeta_term(eq: EulerEquation) -> EulerEquation:
    """Copy of ``eq`` whose rhs lacks the ``zeta u_xxx`` term (negative control)."""
    return replace(eq, rhs=eq.rhs + eq.u.D(3) * eq.zeta)


# -- componentwise printing ---------------------------------------------------


def _time_terms(algebra: FrobeniusAlgebra, coeff: AlgebraElement, names: list[str]) -> list[list]:
    """Components of ``coeff * (sum_j names_j_t e_j)`` as (coefficient, symbol) lists."""
    L = algebra.left_mult_matrix(coeff)
    rows = []
    for k in range(algebra.dim):
        rows.append([(to_fraction(L[k, j]), f"{names[j]}_t") for j in range(algebra.dim) if L[k, j] != 0])
    return rows


def _line(time_terms, poly: DiffPoly) -> str:
    terms = list(time_terms) + [(c, mono_str(mono)) for mono, c in poly.sorted_terms()]
    return f"{format_terms(terms)} = 0"


def componentwise_lines(eq: EulerEquation) -> list[str]:
    """Canonical printed componentwise system.

    Inertia of order 0 prints in u-form (``alpha u_t + ...``), higher orders
    print the moment equations followed by the definitions of the moments.
    """
    alg = eq.algebra
    un, mn = u_names(alg.dim), m_names(alg.dim)
    if eq.inertia.n == 0:
        time = _time_terms(alg, eq.inertia.alpha, un)
        return [_line(time[k], -eq.rhs.components[k]) for k in range(alg.dim)]
    time = _time_terms(alg, alg.unit, mn)
    rhs = eq.rhs_moment_form
    lines = [_line(time[k], -rhs.components[k]) for k in range(alg.dim)]
    lines += [f"{mn[k]} = {eq.m_of_u.components[k]}" for k in range(alg.dim)]
    return lines


def format_componentwise(eq: EulerEquation) -> str:
    return "\n".join(componentwise_lines(eq)) + "\n"
