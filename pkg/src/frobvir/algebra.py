"""Finite-dimensional commutative associative algebras with a trace functional.

An algebra is stored through its structure constants ``C[i, j, k]`` with
``e_i * e_j = sum_k C[i, j, k] e_k``, a unit vector and a trace covector.
Exact algebras keep :class:`fractions.Fraction` entries (numpy object arrays);
floating algebras keep ``float64``.  The same multiplication table may carry
several traces, one :class:`FrobeniusAlgebra` instance per trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import sympy

FLOAT_TOL = 1e-12
RESIDUAL_TOL = 1e-14


class AlgebraError(ValueError):
    pass


class CommutativityViolation(AlgebraError):
    pass


class AssociativityViolation(AlgebraError):
    pass


class UnitViolation(AlgebraError):
    pass


class DegenerateTrace(AlgebraError):
    pass


class DimensionMismatch(AlgebraError):
    pass


class NotInvertible(AlgebraError):
    pass


def to_fraction(value) -> Fraction:
    """Parse ints, Fractions and rational strings like ``"-3/2"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, (float, np.floating)):
        return Fraction(float(value))
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def _exact_array(values, shape) -> np.ndarray:
    flat = [to_fraction(v) for v in np.asarray(values, dtype=object).ravel()]
    if len(flat) != int(np.prod(shape)):
        raise DimensionMismatch(f"expected {int(np.prod(shape))} entries, got {len(flat)}")
    return np.array(flat, dtype=object).reshape(shape)


def _is_zero(x, exact: bool, tol: float = RESIDUAL_TOL) -> bool:
    return x == 0 if exact else abs(x) < tol


def _det(matrix: np.ndarray, exact: bool):
    if exact:
        det = sympy.Matrix(matrix.tolist()).det()
        return to_fraction(sympy.nsimplify(det))
    return float(np.linalg.det(matrix.astype(float)))


def _inverse(matrix: np.ndarray, exact: bool) -> np.ndarray:
    if exact:
        inv = sympy.Matrix(matrix.tolist()).inv()
        return np.array([[to_fraction(x) for x in row] for row in inv.tolist()], dtype=object)
    return np.linalg.inv(matrix.astype(float))


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Coordinates of an element in the basis of ``algebra``."""

    algebra: "FrobeniusAlgebra"
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.algebra.dim:
            raise DimensionMismatch(
                f"element has {len(self.coeffs)} coordinates, algebra has dim {self.algebra.dim}"
            )

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=object if self.algebra.exact else float)

    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if other.algebra.dim != self.algebra.dim:
            raise DimensionMismatch("elements belong to algebras of different dimension")

    def __add__(self, other):
        self._check(other)
        return self.algebra.element(a + b for a, b in zip(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return self.algebra.element(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return self.algebra.element(-a for a in self.coeffs)

    def scale(self, c) -> "AlgebraElement":
        if self.algebra.exact:
            c = to_fraction(c)
        return self.algebra.element(c * a for a in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra.multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra.dim == other.algebra.dim and all(
            a == b for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return all(_is_zero(a, self.algebra.exact) for a in self.coeffs)

    def allclose(self, other: "AlgebraElement", tol: float = FLOAT_TOL) -> bool:
        self._check(other)
        return all(abs(float(a) - float(b)) <= tol for a, b in zip(self.coeffs, other.coeffs))

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.coeffs) + "]"

    def __repr__(self):
        return f"AlgebraElement({self})"


@dataclass(frozen=True, eq=False)
class FrobeniusAlgebra:
    """A validated commutative associative unital algebra with a nondegenerate trace.

    Use :func:`make_algebra` (or the ``builtin_*`` presets) rather than the
    constructor; the constructor does not validate.
    """

    dim: int
    structure_constants: np.ndarray
    unit_coords: np.ndarray
    trace_vector: np.ndarray
    exact: bool = True
    name: str = "F"
    trace_name: str = "tr"
    gram: np.ndarray = field(default=None, repr=False)
    gram_inverse: np.ndarray = field(default=None, repr=False)

    # -- elements -----------------------------------------------------------

    def element(self, coeffs: Iterable) -> AlgebraElement:
        coeffs = tuple(coeffs)
        if self.exact:
            coeffs = tuple(to_fraction(c) for c in coeffs)
        else:
            coeffs = tuple(float(c) for c in coeffs)
        return AlgebraElement(self, coeffs)

    def basis(self, i: int) -> AlgebraElement:
        """Basis element ``e_{i+1}`` (0-based index)."""
        vec = [0] * self.dim
        vec[i] = 1
        return self.element(vec)

    @property
    def unit(self) -> AlgebraElement:
        return self.element(self.unit_coords)

    @property
    def zero(self) -> AlgebraElement:
        return self.element([0] * self.dim)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, a) -> np.ndarray:
        if isinstance(a, AlgebraElement):
            if a.algebra.dim != self.dim:
                raise DimensionMismatch(f"element of dim {a.algebra.dim} used in algebra of dim {self.dim}")
            return a.vector
        arr = np.asarray(a, dtype=object if self.exact else float)
        if arr.shape != (self.dim,):
            raise DimensionMismatch(f"expected {self.dim} coordinates, got shape {arr.shape}")
        return arr

    def multiply(self, a, b) -> AlgebraElement:
        va, vb = self._coerce(a), self._coerce(b)
        return self.element(np.tensordot(va, np.tensordot(vb, self.structure_constants, axes=([0], [1])), axes=([0], [0])))

    def trace(self, a):
        return np.dot(self.trace_vector, self._coerce(a))

    def pairing_form(self, a, b):
        return self.trace(self.multiply(a, b))

    def left_mult_matrix(self, a) -> np.ndarray:
        """Matrix ``L_a`` with ``L_a @ coeffs(b) == coeffs(a * b)``."""
        va = self._coerce(a)
        # L[k, j] = sum_i a_i C[i, j, k]
        return np.tensordot(va, self.structure_constants, axes=([0], [0])).T

    def invert(self, a) -> AlgebraElement:
        mat = self.left_mult_matrix(a)
        det = _det(mat, self.exact)
        if self.exact:
            if det == 0:
                raise NotInvertible(f"{a!r} is not invertible (det L_a = 0)")
        elif abs(det) < FLOAT_TOL:
            raise NotInvertible(f"{a!r} is not invertible (|det L_a| = {abs(det):.3e})")
        unit = self.unit_coords
        if self.exact:
            sol = sympy.Matrix(mat.tolist()).LUsolve(sympy.Matrix(list(unit)))
            return self.element(to_fraction(x) for x in sol)
        return self.element(np.linalg.solve(mat.astype(float), unit.astype(float)))

    def is_invertible(self, a) -> bool:
        try:
            self.invert(a)
        except NotInvertible:
            return False
        return True

    def power(self, a, n: int) -> AlgebraElement:
        result = self.unit
        for _ in range(n):
            result = self.multiply(result, a)
        return result

    # -- variants -----------------------------------------------------------

    def with_trace(self, trace_vector, trace_name: str | None = None) -> "FrobeniusAlgebra":
        """Same multiplication table, different trace (validated)."""
        return make_algebra(
            self.dim,
            self.structure_constants,
            self.unit_coords,
            trace_vector,
            exact=self.exact,
            name=self.name,
            trace_name=trace_name or self.trace_name,
        )

    def to_float(self) -> "FrobeniusAlgebra":
        if not self.exact:
            return self
        return make_algebra(
            self.dim,
            self.structure_constants.astype(float),
            self.unit_coords.astype(float),
            self.trace_vector.astype(float),
            exact=False,
            name=self.name,
            trace_name=self.trace_name,
        )

    def same_multiplication(self, other: "FrobeniusAlgebra") -> bool:
        if self.dim != other.dim:
            return False
        a = self.structure_constants.astype(float)
        b = other.structure_constants.astype(float)
        return bool(np.array_equal(a, b)) and bool(
            np.array_equal(self.unit_coords.astype(float), other.unit_coords.astype(float))
        )

    @property
    def C(self) -> np.ndarray:
        """Structure constants as float64 (solver use)."""
        return self.structure_constants.astype(float)

    def describe(self) -> dict:
        def fmt(x):
            return str(x)

        return {
            "name": self.name,
            "trace_name": self.trace_name,
            "dim": self.dim,
            "exact": self.exact,
            "unit": [fmt(x) for x in self.unit_coords],
            "trace": [fmt(x) for x in self.trace_vector],
            "gram": [[fmt(x) for x in row] for row in self.gram],
            "gram_inverse": [[fmt(x) for x in row] for row in self.gram_inverse],
            "products": {
                f"e{i + 1}*e{j + 1}": [fmt(x) for x in self.structure_constants[i, j]]
                for i in range(self.dim)
                for j in range(i, self.dim)
            },
        }

    def __repr__(self):
        return f"FrobeniusAlgebra({self.name}, dim={self.dim}, trace={self.trace_name})"


def make_algebra(
    dim: int,
    structure_constants,
    unit_coords,
    trace_vector,
    *,
    exact: bool | None = None,
    name: str = "F",
    trace_name: str = "tr",
) -> FrobeniusAlgebra:
    """Validate the algebra axioms and precompute the Gram matrix of the trace form.

    ``exact`` defaults to True unless any input is a float array.
    """
    if dim < 1:
        raise DimensionMismatch("dim must be >= 1")
    if exact is None:
        exact = not any(
            np.asarray(x).dtype.kind == "f" for x in (structure_constants, unit_coords, trace_vector)
        )
    if exact:
        C = _exact_array(structure_constants, (dim, dim, dim))
        unit = _exact_array(unit_coords, (dim,))
        trace = _exact_array(trace_vector, (dim,))
    else:
        C = np.asarray(structure_constants, dtype=float)
        unit = np.asarray(unit_coords, dtype=float)
        trace = np.asarray(trace_vector, dtype=float)
        if C.shape != (dim, dim, dim) or unit.shape != (dim,) or trace.shape != (dim,):
            raise DimensionMismatch("tensor shapes do not match dim")

    for i in range(dim):
        for j in range(dim):
            diff = C[i, j] - C[j, i]
            if not all(_is_zero(x, exact) for x in diff):
                raise CommutativityViolation(f"e{i + 1}*e{j + 1} != e{j + 1}*e{i + 1}")

    # (e_i e_j) e_k = sum_m C[i,j,m] C[m,k,:] ; e_i (e_j e_k) = sum_m C[j,k,m] C[i,m,:]
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                left = np.tensordot(C[i, j], C[:, k], axes=([0], [0]))
                right = np.tensordot(C[j, k], C[i, :], axes=([0], [0]))
                if not all(_is_zero(x, exact) for x in left - right):
                    raise AssociativityViolation(
                        f"(e{i + 1}*e{j + 1})*e{k + 1} != e{i + 1}*(e{j + 1}*e{k + 1})"
                    )

    for i in range(dim):
        prod = np.tensordot(unit, C[:, i], axes=([0], [0]))
        target = np.zeros(dim, dtype=object if exact else float)
        target[i] = 1
        if not all(_is_zero(x, exact) for x in prod - target):
            raise UnitViolation(f"unit * e{i + 1} != e{i + 1}")

    gram = np.tensordot(C, trace, axes=([2], [0]))
    det = _det(gram, exact)
    if exact:
        degenerate = det == 0
    else:
        scale = float(np.max(np.abs(gram))) if gram.size else 0.0
        degenerate = scale == 0.0 or abs(det) < FLOAT_TOL * scale
    if degenerate:
        raise DegenerateTrace(f"trace form of {name} with trace {trace_name} is degenerate (det gram = {det})")
    gram_inv = _inverse(gram, exact)

    return FrobeniusAlgebra(
        dim=dim,
        structure_constants=C,
        unit_coords=unit,
        trace_vector=trace,
        exact=exact,
        name=name,
        trace_name=trace_name,
        gram=gram,
        gram_inverse=gram_inv,
    )


def z2_constants(eps) -> np.ndarray:
    eps = to_fraction(eps)
    C = np.full((2, 2, 2), Fraction(0), dtype=object)
    C[0, 0] = [Fraction(1), Fraction(0)]
    C[0, 1] = C[1, 0] = [Fraction(0), Fraction(1)]
    C[1, 1] = [eps, Fraction(0)]
    return C


def z2_trace(eps, k: int) -> list[Fraction]:
    """Basic trace ``tr^(k)(a1 e1 + a2 e2) = a_k + a2 (1 - delta_{k,2}) delta_{eps,0}``."""
    if k not in (1, 2):
        raise ValueError("trace index k must be 1 or 2")
    eps = to_fraction(eps)
    vec = [Fraction(0), Fraction(0)]
    vec[k - 1] += 1
    if k == 1 and eps == 0:
        vec[1] += 1
    return vec


def builtin_Z2(eps, k: int) -> FrobeniusAlgebra:
    eps = to_fraction(eps)
    return make_algebra(
        2,
        z2_constants(eps),
        [1, 0],
        z2_trace(eps, k),
        exact=True,
        name=f"Z2({eps})",
        trace_name=f"tr{k}",
    )


def zl_constants(l: int) -> np.ndarray:
    """Truncated polynomial ring R[t]/(t^l) in the basis 1, t, ..., t^(l-1)."""
    C = np.full((l, l, l), Fraction(0), dtype=object)
    for i in range(l):
        for j in range(l):
            if i + j < l:
                C[i, j, i + j] = Fraction(1)
    return C


def builtin_Zl(l: int, trace_vector: Sequence | str = "top") -> FrobeniusAlgebra:
    if l < 1:
        raise DimensionMismatch("l must be >= 1")
    if isinstance(trace_vector, str):
        if trace_vector != "top":
            raise ValueError(f"unknown Zl trace preset {trace_vector!r}")
        vec = [0] * l
        vec[-1] = 1
        trace_name = "top"
    else:
        vec = list(trace_vector)
        trace_name = "tr"
    unit = [0] * l
    unit[0] = 1
    return make_algebra(l, zl_constants(l), unit, vec, exact=True, name=f"Z{l}", trace_name=trace_name)


def builtin_R() -> FrobeniusAlgebra:
    return make_algebra(1, [[[1]]], [1], [1], exact=True, name="R", trace_name="tr")
