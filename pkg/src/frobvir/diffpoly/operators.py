"""Scalar linear differential operators ``sum_k a_k(x) d^k`` with DiffPoly coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .core import DiffPoly


class DiffOperator:
    """Operator in normal form: coefficient ``coeffs[k]`` multiplies ``d^k`` on the left."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | Sequence = ()):
        if not isinstance(coeffs, Mapping):
            coeffs = dict(enumerate(coeffs))
        self.coeffs = {k: DiffPoly.coerce(c) for k, c in coeffs.items() if not DiffPoly.coerce(c).is_zero()}

    @classmethod
    def d(cls, k: int = 1) -> "DiffOperator":
        return cls({k: 1})

    @classmethod
    def mult(cls, f) -> "DiffOperator":
        return cls({0: f})

    @classmethod
    def identity(cls) -> "DiffOperator":
        return cls({0: 1})

    def order(self) -> int:
        return max(self.coeffs, default=-1)

    def is_constant(self) -> bool:
        return all(c.is_constant() for c in self.coeffs.values())

    def apply(self, X) -> DiffPoly:
        X = DiffPoly.coerce(X)
        result = DiffPoly.zero()
        deriv = X
        for k in range(self.order() + 1):
            if k:
                deriv = deriv.total_derivative()
            if k in self.coeffs:
                result = result + self.coeffs[k] * deriv
        return result

    __call__ = apply

    def __add__(self, other: "DiffOperator") -> "DiffOperator":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, DiffPoly.zero()) + c
        return DiffOperator(out)

    def __neg__(self) -> "DiffOperator":
        return DiffOperator({k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "DiffOperator") -> "DiffOperator":
        return self + (-other)

    def scale(self, c) -> "DiffOperator":
        return DiffOperator({k: v * c for k, v in self.coeffs.items()})

    def __rmul__(self, c) -> "DiffOperator":
        return self.scale(c)

    def compose(self, other: "DiffOperator") -> "DiffOperator":
        """``self o other`` in normal form (Leibniz: d^k f = sum C(k,j) f^(j) d^(k-j))."""
        out: dict = {}
        for k, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                deriv = b
                binom = 1
                for i in range(k + 1):
                    if i:
                        deriv = deriv.total_derivative()
                        binom = binom * (k - i + 1) // i
                    if deriv.is_zero():
                        break
                    power = k - i + j
                    out[power] = out.get(power, DiffPoly.zero()) + a * deriv * binom
        return DiffOperator(out)

    def __matmul__(self, other: "DiffOperator") -> "DiffOperator":
        return self.compose(other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def right_divide(self, divisor: "DiffOperator") -> "DiffOperator | None":
        """Constant-coefficient ``Q`` with ``self == Q o divisor``, or None.

        Both operators must have constant coefficients (they then commute and
        division is polynomial division in ``d``).
        """
        if not (self.is_constant() and divisor.is_constant()):
            raise ValueError("right_divide needs constant-coefficient operators")
        num = {k: c.constant_value() for k, c in self.coeffs.items()}
        den = {k: c.constant_value() for k, c in divisor.coeffs.items()}
        if not den:
            return None
        top = max(den)
        quot: dict = {}
        while num and max(num) >= top:
            k = max(num)
            q = num[k] / den[top]
            quot[k - top] = q
            for j, c in den.items():
                idx = j + k - top
                num[idx] = num.get(idx, Fraction(0)) - q * c
                if not num[idx]:
                    del num[idx]
        if num:
            return None
        return DiffOperator(quot)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            d = "" if k == 0 else ("d" if k == 1 else f"d^{k}")
            c = self.coeffs[k]
            if c == DiffPoly.const(1) and d:
                parts.append(d)
            else:
                parts.append(f"({c})" + (f"*{d}" if d else ""))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"DiffOperator({self})"


def symmetric_mult(f) -> DiffOperator:
    """``f d + d f`` (= 2 f d + f_x)."""
    f = DiffPoly.coerce(f)
    return DiffOperator({1: f * 2, 0: f.total_derivative()})


class OperatorMatrix:
    """Square matrix of scalar operators acting on a vector of DiffPolys."""

    def __init__(self, rows: Sequence[Sequence[DiffOperator]]):
        self.rows = [list(r) for r in rows]
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("operator matrix must be square")

    @property
    def size(self) -> int:
        return len(self.rows)

    def apply(self, vector: Sequence[DiffPoly]) -> list[DiffPoly]:
        if len(vector) != self.size:
            raise ValueError("vector length does not match operator matrix")
        out = []
        for row in self.rows:
            acc = DiffPoly.zero()
            for op, x in zip(row, vector):
                acc = acc + op.apply(x)
            out.append(acc)
        return out

    def scale(self, c) -> "OperatorMatrix":
        return OperatorMatrix([[op.scale(c) for op in row] for row in self.rows])

    def __neg__(self) -> "OperatorMatrix":
        return self.scale(-1)

    def __str__(self) -> str:
        return "[" + "; ".join(", ".join(str(op) for op in row) for row in self.rows) + "]"
