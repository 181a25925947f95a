"""Exact differential polynomials in jet variables.

A jet variable is a pair ``(name, order)`` standing for the ``order``-th
x-derivative of the scalar field ``name``.  A monomial is a sorted tuple of
``((name, order), power)`` factors and a :class:`DiffPoly` maps monomials to
nonzero :class:`~fractions.Fraction` coefficients.  Because the dict never
holds zeros and monomials are normalized on construction, structural equality
is equality of polynomials.
"""

from __future__ import annotations

import re
from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from ..algebra import AlgebraElement, DimensionMismatch, FrobeniusAlgebra, to_fraction

Var = tuple  # (name, order)
Monomial = tuple  # ((Var, power), ...)

ONE: Monomial = ()


def _normalize(factors: Iterable[tuple[Var, int]]) -> Monomial:
    acc: dict = defaultdict(int)
    for var, power in factors:
        acc[var] += power
    return tuple(sorted((v, p) for v, p in acc.items() if p))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    return _normalize(a + b)


def _name_key(name: str):
    m = re.fullmatch(r"(.*?)(\d*)", name)
    prefix, digits = m.group(1), m.group(2)
    return (prefix, int(digits) if digits else -1)


def var_str(var: Var) -> str:
    name, order = var
    return name if order == 0 else f"{name}_{'x' * order}"


def mono_degree(mono: Monomial) -> int:
    return sum(p for _, p in mono)


def _mono_print_key(mono: Monomial):
    expanded = []
    for (name, order), power in mono:
        expanded.extend([(_name_key(name), order)] * power)
    return (-len(expanded), expanded)


def _coeff_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class DiffPoly:
    """Polynomial with exact rational coefficients in jet variables."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: dict = {}
        if terms:
            for mono, c in terms.items():
                c = to_fraction(c)
                if c:
                    clean[mono] = clean.get(mono, Fraction(0)) + c
            clean = {m: c for m, c in clean.items() if c}
        self.terms: dict = clean
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, terms: dict) -> "DiffPoly":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c) -> "DiffPoly":
        return cls({ONE: c})

    @classmethod
    def var(cls, name: str, order: int = 0) -> "DiffPoly":
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        return cls._raw({(((name, order), 1),): Fraction(1)})

    @classmethod
    def zero(cls) -> "DiffPoly":
        return cls._raw({})

    @staticmethod
    def coerce(x) -> "DiffPoly":
        if isinstance(x, DiffPoly):
            return x
        return DiffPoly.const(x)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "DiffPoly":
        other = DiffPoly.coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return DiffPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "DiffPoly":
        return DiffPoly._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "DiffPoly":
        return self + (-DiffPoly.coerce(other))

    def __rsub__(self, other) -> "DiffPoly":
        return DiffPoly.coerce(other) - self

    def __mul__(self, other) -> "DiffPoly":
        if not isinstance(other, DiffPoly):
            c = to_fraction(other)
            if not c:
                return DiffPoly.zero()
            return DiffPoly._raw({m: v * c for m, v in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return DiffPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "DiffPoly":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = DiffPoly.const(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffPoly):
            try:
                other = DiffPoly.coerce(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- structure ----------------------------------------------------------

    def variables(self) -> set:
        return {v for mono in self.terms for v, _ in mono}

    def fields(self) -> set[str]:
        return {name for name, _ in self.variables()}

    def max_order(self, name: str | None = None) -> int:
        orders = [o for n, o in self.variables() if name is None or n == name]
        return max(orders, default=-1)

    def degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def is_constant(self) -> bool:
        return all(m == ONE for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get(ONE, Fraction(0))

    def weights(self) -> dict:
        """Total derivative order of each monomial."""
        return {m: sum(o * p for (_, o), p in m) for m in self.terms}

    # -- calculus -----------------------------------------------------------

    def partial(self, var: Var) -> "DiffPoly":
        out: dict = {}
        for mono, c in self.terms.items():
            for idx, (v, p) in enumerate(mono):
                if v == var:
                    rest = mono[:idx] + (((v, p - 1),) if p > 1 else ()) + mono[idx + 1:]
                    out[rest] = out.get(rest, 0) + c * p
        return DiffPoly({m: c for m, c in out.items()})

    def total_derivative(self) -> "DiffPoly":
        """d/dx acting by the chain rule on every jet variable."""
        out: dict = {}
        for mono, c in self.terms.items():
            for idx, ((name, order), p) in enumerate(mono):
                rest = mono[:idx] + (((((name, order), p - 1),) if p > 1 else ())) + mono[idx + 1:]
                new = _mono_mul(rest, ((((name, order + 1), 1)),))
                s = out.get(new, 0) + c * p
                if s:
                    out[new] = s
                else:
                    out.pop(new, None)
        return DiffPoly._raw(out)

    def D(self, n: int = 1) -> "DiffPoly":
        result = self
        for _ in range(n):
            result = result.total_derivative()
        return result

    def euler(self, name: str) -> "DiffPoly":
        """Variational derivative sum_n (-D)^n dP/d name^(n)."""
        result = DiffPoly.zero()
        for n in range(self.max_order(name) + 1):
            term = self.partial((name, n))
            if term:
                term = term.D(n)
                result = result + (term if n % 2 == 0 else -term)
        return result

    def is_total_derivative(self) -> bool:
        return all(self.euler(name).is_zero() for name in self.fields())

    def substitute(self, mapping: Mapping[str, "DiffPoly"]) -> "DiffPoly":
        """Replace each field ``f`` by ``mapping[f]`` (and f^(n) by its n-th derivative)."""
        if not mapping:
            return self
        derivs: dict = {}

        def image(var: Var) -> DiffPoly:
            if var not in derivs:
                name, order = var
                if order == 0:
                    derivs[var] = DiffPoly.coerce(mapping[name])
                else:
                    derivs[var] = image((name, order - 1)).total_derivative()
            return derivs[var]

        result = DiffPoly.zero()
        for mono, c in self.terms.items():
            term = DiffPoly.const(c)
            kept = []
            for var, p in mono:
                if var[0] in mapping:
                    term = term * image(var) ** p
                else:
                    kept.append((var, p))
            if kept:
                term = term * DiffPoly._raw({tuple(kept): Fraction(1)})
            result = result + term
        return result

    def rename(self, mapping: Mapping[str, str]) -> "DiffPoly":
        out: dict = {}
        for mono, c in self.terms.items():
            new = _normalize(((mapping.get(n, n), o), p) for (n, o), p in mono)
            out[new] = out.get(new, 0) + c
        return DiffPoly(out)

    def evaluate(self, jets: Mapping[Var, object]):
        """Numeric evaluation; ``jets`` maps each (name, order) to a scalar or array."""
        total = 0.0
        for mono, c in self.terms.items():
            term = float(c)
            for var, p in mono:
                try:
                    value = jets[var]
                except KeyError:
                    raise KeyError(f"no value supplied for jet variable {var_str(var)}") from None
                term = term * value**p
            total = total + term
        return total

    # -- printing -----------------------------------------------------------

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda mc: _mono_print_key(mc[0]))

    def __str__(self) -> str:
        return format_terms(
            [(c, mono_str(m)) for m, c in self.sorted_terms()]
        )

    def __repr__(self) -> str:
        return f"DiffPoly({self})"


def mono_str(mono: Monomial) -> str:
    parts = []
    for var, p in sorted(mono, key=lambda vp: (_name_key(vp[0][0]), vp[0][1])):
        parts.extend([var_str(var)] * p)
    return "*".join(parts)


def format_terms(terms: Sequence[tuple[Fraction, str]]) -> str:
    """Join ``(coefficient, monomial string)`` pairs as ``a*x - b*y``; ``""`` is the unit monomial."""
    if not terms:
        return "0"
    out = []
    for idx, (c, body) in enumerate(terms):
        mag = abs(c)
        if body == "":
            text = _coeff_str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{_coeff_str(mag)}*{body}"
        if idx == 0:
            out.append(f"-{text}" if c < 0 else text)
        else:
            out.append(f" - {text}" if c < 0 else f" + {text}")
    return "".join(out)


def component_names(base: str | Sequence[str], dim: int) -> list[str]:
    if not isinstance(base, str):
        names = list(base)
        if len(names) != dim:
            raise DimensionMismatch(f"expected {dim} component names, got {len(names)}")
        return names
    if dim == 1:
        return [base]
    return [f"{base}{i + 1}" for i in range(dim)]


class AlgDiffPoly:
    """Algebra-valued differential polynomial: one :class:`DiffPoly` per basis coordinate."""

    __slots__ = ("algebra", "components")

    def __init__(self, algebra: FrobeniusAlgebra, components: Sequence):
        if len(components) != algebra.dim:
            raise DimensionMismatch(
                f"{len(components)} components given for algebra of dim {algebra.dim}"
            )
        self.algebra = algebra
        self.components = tuple(DiffPoly.coerce(c) for c in components)

    @classmethod
    def field(cls, algebra: FrobeniusAlgebra, base: str | Sequence[str]) -> "AlgDiffPoly":
        """Generic field ``sum_k base_k e_k`` with independent scalar components."""
        names = component_names(base, algebra.dim)
        return cls(algebra, [DiffPoly.var(n) for n in names])

    @classmethod
    def constant(cls, element: AlgebraElement) -> "AlgDiffPoly":
        return cls(element.algebra, [DiffPoly.const(c) for c in element.coeffs])

    @classmethod
    def zero(cls, algebra: FrobeniusAlgebra) -> "AlgDiffPoly":
        return cls(algebra, [DiffPoly.zero()] * algebra.dim)

    def _same(self, other: "AlgDiffPoly"):
        if not isinstance(other, AlgDiffPoly):
            raise TypeError(f"expected AlgDiffPoly, got {type(other).__name__}")
        if other.algebra.dim != self.algebra.dim:
            raise DimensionMismatch("algebra dimensions differ")

    def __add__(self, other) -> "AlgDiffPoly":
        self._same(other)
        return AlgDiffPoly(self.algebra, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other) -> "AlgDiffPoly":
        self._same(other)
        return AlgDiffPoly(self.algebra, [a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "AlgDiffPoly":
        return AlgDiffPoly(self.algebra, [-a for a in self.components])

    def __mul__(self, other) -> "AlgDiffPoly":
        """Algebra product with another AlgDiffPoly or AlgebraElement; scalar otherwise."""
        if isinstance(other, AlgebraElement):
            other = AlgDiffPoly.constant(other)
        if isinstance(other, AlgDiffPoly):
            self._same(other)
            C = self.algebra.structure_constants
            dim = self.algebra.dim
            out = [DiffPoly.zero() for _ in range(dim)]
            for i, a in enumerate(self.components):
                if not a:
                    continue
                for j, b in enumerate(other.components):
                    if not b:
                        continue
                    ab = None
                    for k in range(dim):
                        c = C[i, j, k]
                        if c:
                            if ab is None:
                                ab = a * b
                            out[k] = out[k] + ab * c
            return AlgDiffPoly(self.algebra, out)
        return AlgDiffPoly(self.algebra, [a * other for a in self.components])

    def __rmul__(self, other) -> "AlgDiffPoly":
        if isinstance(other, AlgebraElement):
            return AlgDiffPoly.constant(other) * self
        return self * other

    def __pow__(self, n: int) -> "AlgDiffPoly":
        result = AlgDiffPoly.constant(self.algebra.unit)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgDiffPoly):
            return NotImplemented
        return self.algebra.dim == other.algebra.dim and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def D(self, n: int = 1) -> "AlgDiffPoly":
        return AlgDiffPoly(self.algebra, [c.D(n) for c in self.components])

    total_derivative = D

    def trace(self) -> DiffPoly:
        result = DiffPoly.zero()
        for t, comp in zip(self.algebra.trace_vector, self.components):
            if t:
                result = result + comp * t
        return result

    def substitute(self, mapping: Mapping[str, DiffPoly]) -> "AlgDiffPoly":
        return AlgDiffPoly(self.algebra, [c.substitute(mapping) for c in self.components])

    def field_map(self, base: str | Sequence[str]) -> dict[str, DiffPoly]:
        """Mapping ``{component name: component}`` for substituting this poly in place of a field."""
        names = component_names(base, self.algebra.dim)
        return dict(zip(names, self.components))

    def fields(self) -> set[str]:
        out: set = set()
        for c in self.components:
            out |= c.fields()
        return out

    def evaluate(self, jets: Mapping[Var, object]) -> list:
        return [c.evaluate(jets) for c in self.components]

    def __str__(self) -> str:
        return "[" + ", ".join(str(c) for c in self.components) + "]"

    def __repr__(self) -> str:
        return f"AlgDiffPoly({self})"


def total_x_derivative(p):
    """d/dx of a DiffPoly or AlgDiffPoly."""
    return p.D()


def euler_operator(p: DiffPoly, name: str) -> DiffPoly:
    return p.euler(name)


def is_total_derivative(p: DiffPoly) -> bool:
    return p.is_total_derivative()


def alg_variational_derivative(
    density: DiffPoly, algebra: FrobeniusAlgebra, base: str | Sequence[str]
) -> AlgDiffPoly:
    """Algebra-valued variational derivative w.r.t. the field with components ``base``.

    Returns ``X`` with ``tr(X * dm) == sum_k (delta f / delta m_k) dm_k``, i.e.
    ``X = gram^{-1} (delta f / delta m_k)_k``.
    """
    names = component_names(base, algebra.dim)
    grads = [density.euler(n) for n in names]
    Ginv = algebra.gram_inverse
    comps = []
    for i in range(algebra.dim):
        acc = DiffPoly.zero()
        for k in range(algebra.dim):
            if Ginv[i, k]:
                acc = acc + grads[k] * Ginv[i, k]
        comps.append(acc)
    return AlgDiffPoly(algebra, comps)


def jets_from_arrays(name: str, derivs: Sequence[np.ndarray]) -> dict:
    """``{(name, n): derivs[n]}`` for numeric evaluation."""
    return {(name, n): d for n, d in enumerate(derivs)}
