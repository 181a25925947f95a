"""Explicit componentwise bihamiltonian presentations for the two-dimensional algebras.

Each case lists the componentwise system ``m_t = R`` together with two
presentations ``O_2 dH_2/dm = O_1 dH_1/dm = R``, transcribed operator by
operator and Hamiltonian by Hamiltonian.  Densities may mix the fields
``(v, w)`` and the moments ``(p, q)``; the moments are eliminated through the
scalar inertia operator before differentiating.

``dH/dm`` is ``Lambda^{-1} dH/du``.  For constant-coefficient operators that
factor as ``Q o Lambda`` we apply ``Q`` to ``dH/du`` directly; otherwise we
look for a local preimage of ``dH/du`` under ``Lambda`` and report failure if
none exists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from ..algebra import builtin_Z2
from ..report import VerificationReport
from .core import AlgDiffPoly, DiffPoly, mono_degree
from .operators import DiffOperator, OperatorMatrix, symmetric_mult
from .verify import h2_density

CASES = ("eps!=0-KdV", "eps!=0-CH", "eps!=0-HS", "eps=0-KdV", "eps=0-CH", "eps=0-HS")

U_NAMES = ("v", "w")
M_NAMES = ("p", "q")


def _V(name, order=0):
    return DiffPoly.var(name, order)


v, w, p, q = _V("v"), _V("w"), _V("p"), _V("q")
vx, wx, px, qx = _V("v", 1), _V("w", 1), _V("p", 1), _V("q", 1)
vxx, wxx = _V("v", 2), _V("w", 2)
vxxx, wxxx = _V("v", 3), _V("w", 3)

d = DiffOperator.d
ZERO = DiffOperator()


@dataclass
class Presentation:
    label: str
    operator: OperatorMatrix
    density: DiffPoly


@dataclass
class PairCase:
    name: str
    eps: Fraction
    inertia: DiffOperator  # scalar Lambda acting on each component
    moments: bool  # True when the system is written for (p, q)
    system: list[DiffPoly]  # right-hand side of m_t = R
    presentations: list[Presentation] = field(default_factory=list)

    def moment_map(self) -> dict[str, DiffPoly]:
        if not self.moments:
            return {}
        return {"p": self.inertia.apply(v), "q": self.inertia.apply(w)}


def _j0(a):
    return d(3) + symmetric_mult(a)


def _general_h2(e: Fraction, k: int, alpha, beta, zeta, bump=Fraction(1)) -> DiffPoly:
    """Second Hamiltonian of the general formula under the basic trace k, in (v, w)."""
    alg = builtin_Z2(e, k)
    el = {0: alg.zero, 1: alg.unit}
    u = AlgDiffPoly.field(alg, list(U_NAMES))
    return h2_density(u, el[alpha], el[beta], el[zeta], bump)


def example_case(case: str, eps=None, *, perturb: bool = False, corrected: bool = False) -> PairCase:
    """Build one of the six presentations.

    ``eps`` must be nonzero for the ``eps!=0`` cases and is forced to 0 for
    the ``eps=0`` ones.  ``perturb`` changes the first cubic coefficient of the
    second Hamiltonian (3 -> 4 in the KdV cases) as a negative control.

    With ``corrected`` the CH second Hamiltonians are regenerated from the
    general H2 formula (alpha = beta = 1, zeta = 0) under the matching basic
    trace, and the eps=0 HS tilde operator uses d^3 instead of d^3 - d.
    The printed data fail for exactly those entries.
    """
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; choose from {CASES}")
    if case.startswith("eps=0"):
        e = Fraction(0)
    else:
        e = Fraction(2) if eps is None else Fraction(eps)
        if e == 0:
            raise ValueError("eps must be nonzero for the eps!=0 cases")
    kind = case.split("-")[1]
    inv_e = 1 / e if e else None
    bump = Fraction(4, 3) if perturb else Fraction(1)

    if kind == "KdV":
        J0, J1 = _j0(v), symmetric_mult(w)
        system = [-(vx * v * 3 + vxxx + wx * w * 3 * e), -((v * w).D() * 3 + wxxx)]
        lam = DiffOperator.identity()
        case_obj = PairCase(case, e, lam, False, system)
        if e:
            case_obj.presentations = [
                Presentation("H2", -OperatorMatrix([[ZERO, d()], [d(), ZERO]]),
                             (v * v * w * 3 * bump + w**3 * e + v * wxx * 2) * Fraction(1, 2)),
                Presentation("H1", -OperatorMatrix([[J1.scale(e), J0], [J0, J1]]), v * w),
                Presentation("H2~", -OperatorMatrix([[d(), ZERO], [ZERO, d().scale(inv_e)]]),
                             (v**3 * bump + v * vxx + v * w * w * 3 * e + w * wxx * e) * Fraction(1, 2)),
                Presentation("H1~", -OperatorMatrix([[J0, J1], [J1, J0.scale(inv_e)]]),
                             (v * v + w * w * e) * Fraction(1, 2)),
            ]
        else:
            case_obj.presentations = [
                Presentation("H2", -OperatorMatrix([[ZERO, d()], [d(), ZERO]]),
                             (v * v * w * 3 * bump + v * wxx * 2) * Fraction(1, 2)),
                Presentation("H1", -OperatorMatrix([[ZERO, J0], [J0, J1]]), v * w),
                Presentation("H2~", -OperatorMatrix([[ZERO, d()], [d(), -d()]]),
                             (v**3 * bump + v * vxx + v * v * w * 3 + v * wxx * 2) * Fraction(1, 2)),
                Presentation("H1~", -OperatorMatrix([[ZERO, J0], [J0, J1 - J0]]),
                             (v * v + v * w * 2) * Fraction(1, 2)),
            ]
        return case_obj

    K0, K1 = symmetric_mult(p), symmetric_mult(q)
    system = [
        -(p * vx * 2 + px * v + (q * wx * 2 + qx * w) * e),
        -(q * vx * 2 + qx * v + p * wx * 2 + px * w),
    ]
    if kind == "CH":
        lam = DiffOperator({0: 1, 2: -1})
        J = d(3) - d()
    else:
        lam = DiffOperator({2: -1})
        J = d(3)
    case_obj = PairCase(case, e, lam, True, system)
    H1 = (q * v + p * w) * Fraction(1, 2)

    if kind == "CH":
        if e:
            H2 = (v * wxx * 2 + w * vxx * 2 - w * v * vxx * 2 * bump - v * v * wxx - w * w * wxx * e) * Fraction(1, 4)
            H2t = (v * vxx * 2 - v * v * vxx * bump + (w * wxx - w * w * vxx - v * w * wxx * 2) * e) * Fraction(1, 4)
            H1t = (p * v + q * w * e) * Fraction(1, 2)
        else:
            H2 = (v * wxx * 2 + w * vxx * 2 - w * v * vxx * 2 * bump - v * v * wxx) * Fraction(1, 4)
            H2t = (v * wxx * 2 + w * vxx * 2 - w * v * vxx * 2 * bump - v * v * wxx + v * vxx * 2 - v * v * vxx) * Fraction(1, 4)
            H1t = (p * v + q * v + p * w) * Fraction(1, 2)
    else:
        if e:
            H2 = (w * v * p * 2 * bump + v * v * q + w * w * q * e) * Fraction(1, 4)
            H2t = (p * v * v * bump + p * w * w * e + v * w * q * 2 * e) * Fraction(1, 4)
            H1t = (p * v + q * w * e) * Fraction(1, 2)
        else:
            H2 = (w * v * p * 2 * bump + v * v * q) * Fraction(1, 4)
            H2t = (p * v * v * bump + w * v * p * 2 + v * v * q) * Fraction(1, 4)
            H1t = (p * v + q * v + p * w) * Fraction(1, 2)

    if corrected and kind == "CH":
        H2 = _general_h2(e, 2, 1, 1, 0, bump)
        H2t = _general_h2(e, 1, 1, 1, 0, bump)

    if e:
        second = OperatorMatrix([[ZERO, J], [J, ZERO]])
        first = -OperatorMatrix([[K1.scale(e), K0], [K0, K1]])
        second_t = OperatorMatrix([[J, ZERO], [ZERO, J.scale(inv_e)]])
        first_t = -OperatorMatrix([[K0, K1], [K1, K0.scale(inv_e)]])
    else:
        second = OperatorMatrix([[ZERO, J], [J, ZERO]])
        first = -OperatorMatrix([[ZERO, K0], [K0, K1]])
        # as printed, the eps=0 HS presentation reuses d^3 - d in the tilde operator
        Jt = J if corrected else d(3) - d()
        second_t = OperatorMatrix([[ZERO, Jt], [Jt, -Jt]])
        first_t = -OperatorMatrix([[ZERO, K0], [K0, K1 - K0]])

    case_obj.presentations = [
        Presentation("H2", second, H2),
        Presentation("H1", first, H1),
        Presentation("H2~", second_t, H2t),
        Presentation("H1~", first_t, H1t),
    ]
    return case_obj


# -- inverse of the inertia operator on differential polynomials ------------


def _monomials(fields, degree: int, weight: int):
    """All monomials of the given polynomial degree and total derivative weight."""
    vars_ = [(f, o) for f in fields for o in range(weight + 1)]
    for combo in itertools.combinations_with_replacement(vars_, degree):
        if sum(o for _, o in combo) == weight:
            acc: dict = {}
            for var in combo:
                acc[var] = acc.get(var, 0) + 1
            yield tuple(sorted(acc.items()))


def inertia_preimage(lam: DiffOperator, Y: DiffPoly, fields=U_NAMES) -> DiffPoly | None:
    """Local ``X`` with ``lam(X) == Y`` (lam constant-coefficient), or None if there is none."""
    if Y.is_zero():
        return DiffPoly.zero()
    min_shift = min(lam.coeffs)
    weights = Y.weights()
    by_degree: dict = {}
    for mono, c in Y.terms.items():
        by_degree.setdefault(mono_degree(mono), {})[mono] = c
    result = DiffPoly.zero()
    for deg, terms in by_degree.items():
        max_w = max(weights[m] for m in terms) - min_shift
        if max_w < 0:
            return None
        cols = [m for wt in range(max_w + 1) for m in _monomials(fields, deg, wt)]
        images = [lam.apply(DiffPoly._raw({m: Fraction(1)})) for m in cols]
        rows_index: dict = {}
        for img in images:
            for m in img.terms:
                rows_index.setdefault(m, len(rows_index))
        for m in terms:
            rows_index.setdefault(m, len(rows_index))
        nrows, ncols = len(rows_index), len(cols)
        A = [[QQ(0)] * (ncols + 1) for _ in range(nrows)]
        for j, img in enumerate(images):
            for m, c in img.terms.items():
                A[rows_index[m]][j] = QQ(c.numerator, c.denominator)
        for m, c in terms.items():
            A[rows_index[m]][ncols] = QQ(c.numerator, c.denominator)
        rref, pivots = DomainMatrix(A, (nrows, ncols + 1), QQ).rref()
        if ncols in pivots:
            return None
        R = rref.to_Matrix()
        sol: dict = {}
        for i, col in enumerate(pivots):
            val = R[i, ncols]
            if val != 0:
                sol[cols[col]] = Fraction(int(val.p), int(val.q))
        result = result + DiffPoly(sol)
    return result if lam.apply(result) == Y else None


def _apply_to_gradient(case: PairCase, pres: Presentation) -> tuple[list[DiffPoly] | None, str]:
    """``O dH/dm`` in the u-variables, or (None, reason)."""
    density = pres.density.substitute(case.moment_map())
    grads = [density.euler(n) for n in U_NAMES]
    lam = case.inertia
    rows = pres.operator.rows
    if all(op.is_constant() for row in rows for op in row):
        factored = [[op.right_divide(lam) if op.coeffs else DiffOperator() for op in row] for row in rows]
        if all(f is not None for row in factored for f in row):
            return OperatorMatrix(factored).apply(grads), ""
    preimages = [inertia_preimage(lam, g) for g in grads]
    if any(x is None for x in preimages):
        return None, "dH/dm is not a local differential polynomial and the operator does not factor through the inertia operator"
    out = pres.operator.apply(preimages)
    return [o.substitute(case.moment_map()) for o in out], ""


def verify_example_pairs(
    case: str, eps=None, *, perturb: bool = False, corrected: bool = False
) -> VerificationReport:
    c = example_case(case, eps, perturb=perturb, corrected=corrected)
    tag = " (corrected)" if corrected else ""
    report = VerificationReport(f"example pairs {case} eps={c.eps}{tag}")
    target = [r.substitute(c.moment_map()) for r in c.system]
    for pres in c.presentations:
        got, reason = _apply_to_gradient(c, pres)
        if got is None:
            report.record(f"{pres.label}: operator o dH/dm = system", False, reason)
            continue
        residual = [g - t for g, t in zip(got, target)]
        ok = all(r.is_zero() for r in residual)
        report.record(
            f"{pres.label}: operator o dH/dm = system",
            ok,
            "; ".join(f"{n}_t: {r}" for n, r in zip(M_NAMES if c.moments else U_NAMES, residual)),
        )
    return report
