"""Exact Laurent polynomials in a formal half-integer-power variable.

Elements are finite sums  sum_n  c_n * X^(n/2)  with rational c_n, where the
exponent n runs over integers (so the variable is really X^(1/2)).  The same
type serves as the coefficient ring over q^(1/2) for the quantum torus and as
the value ring for the motivic invariants over L^(1/2); the two variables are
related by q^(1/2) = -L^(1/2), realised here by :meth:`LaurentPoly.negate_var`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


def _as_fraction(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"coefficients must be exact rationals, got {type(x)!r}")


class LaurentPoly:
    """Immutable Laurent polynomial with Fraction coefficients.

    Exponents are stored in half-units: key ``n`` carries the monomial
    X^(n/2).  Zero coefficients are never stored.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None):
        c = {}
        if coeffs:
            for n, a in coeffs.items():
                a = _as_fraction(a)
                if a != 0:
                    c[int(n)] = a
        self._c = c

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def monomial(cls, half_exp: int, coeff: Scalar = 1) -> "LaurentPoly":
        """coeff * X^(half_exp/2)."""
        return cls({half_exp: coeff})

    @classmethod
    def from_scalar(cls, a: Scalar) -> "LaurentPoly":
        return cls({0: a})

    # -- inspection ----------------------------------------------------

    def items(self):
        return self._c.items()

    def coeff(self, half_exp: int) -> Fraction:
        return self._c.get(half_exp, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def is_one(self) -> bool:
        return self._c == {0: Fraction(1)}

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def min_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return min(self._c)

    def max_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return max(self._c)

    def support(self) -> Iterable[int]:
        return sorted(self._c)

    # -- ring operations ------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        c = dict(self._c)
        for n, a in other._c.items():
            s = c.get(n, Fraction(0)) + a
            if s == 0:
                c.pop(n, None)
            else:
                c[n] = s
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = c
        return out

    def __neg__(self) -> "LaurentPoly":
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {n: -a for n, a in self._c.items()}
        return out

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            a = _as_fraction(other)
            if a == 0:
                return LaurentPoly()
            out = LaurentPoly.__new__(LaurentPoly)
            out._c = {n: b * a for n, b in self._c.items()}
            return out
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        c: dict[int, Fraction] = {}
        for n1, a1 in self._c.items():
            for n2, a2 in other._c.items():
                n = n1 + n2
                s = c.get(n, Fraction(0)) + a1 * a2
                if s == 0:
                    c.pop(n, None)
                else:
                    c[n] = s
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = c
        return out

    __rmul__ = __mul__

    def shift(self, half_exp: int) -> "LaurentPoly":
        """Multiply by X^(half_exp/2)."""
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {n + half_exp: a for n, a in self._c.items()}
        return out

    def truncate(self, max_half_exp: int) -> "LaurentPoly":
        """Drop monomials with exponent above max_half_exp/2."""
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {n: a for n, a in self._c.items() if n <= max_half_exp}
        return out

    def negate_var(self) -> "LaurentPoly":
        """Substitute X^(1/2) -> -X^(1/2)  (the L^(1/2) <-> q^(1/2) flip)."""
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {n: (-a if n % 2 else a) for n, a in self._c.items()}
        return out

    def inverse_monomial(self) -> "LaurentPoly":
        if len(self._c) != 1:
            raise ValueError("only monomials are units in the Laurent ring")
        ((n, a),) = self._c.items()
        return LaurentPoly({-n: Fraction(1) / a})

    def geometric_inverse(self, max_half_exp: int) -> "LaurentPoly":
        """Inverse of ``m*(1 - h)`` truncated at the given exponent.

        Requires the lowest term to be a monomial that strictly divides the
        rest (h has only higher exponents), which is the shape arising from
        1 - q^j factors.
        """
        if self.is_zero():
            raise ZeroDivisionError("cannot invert zero")
        n0 = self.min_exp()
        lead = LaurentPoly.monomial(n0, self._c[n0])
        h = (lead.inverse_monomial() * self) - LaurentPoly.one()
        if not h.is_zero() and h.min_exp() <= 0:
            raise ValueError("leading term does not dominate; not invertible here")
        acc = LaurentPoly.one()
        term = LaurentPoly.one()
        while not term.is_zero():
            term = (term * -h).truncate(max_half_exp)
            acc = acc + term
        return (lead.inverse_monomial() * acc).truncate(max_half_exp)

    # -- evaluation / export ---------------------------------------------

    def evaluate(self, half_var: complex) -> complex:
        """Evaluate with X^(1/2) = half_var."""
        return sum(float(a) * half_var**n for n, a in self._c.items()) if self._c else 0j

    def to_json(self) -> list[list]:
        return [[n, str(a)] for n, a in sorted(self._c.items())]

    # -- dunder plumbing ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.from_scalar(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def __bool__(self):
        return bool(self._c)

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for n, a in sorted(self._c.items()):
            if n == 0:
                parts.append(f"{a}")
            elif n % 2 == 0:
                parts.append(f"{a}*q^{n // 2}")
            else:
                parts.append(f"{a}*q^({n}/2)")
        return " + ".join(parts)
