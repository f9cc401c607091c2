"""Dense univariate polynomials in q with exact integer coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Sequence


def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def padd(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] += x
    return _trim(out)


def psub(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, x in enumerate(b):
        out[i] -= x
    return _trim(out)


def pmul(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def one_minus_q_pow(k: int) -> tuple[int, ...]:
    """Coefficients of (1 - q)^k."""
    return tuple((-1) ** i * comb(k, i) for i in range(k + 1))


class Poly:
    """Immutable polynomial; ``coeffs[i]`` is the coefficient of ``q**i``.

    Trailing zeros are trimmed, so the zero polynomial has ``coeffs == ()``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = _trim(int(x) for x in coeffs)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # construction helpers
    @classmethod
    def one(cls) -> "Poly":
        return cls((1,))

    @classmethod
    def q(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> "Poly":
        return cls((0,) * k + (c,))

    @classmethod
    def one_minus_q(cls, k: int = 1) -> "Poly":
        return cls(one_minus_q_pow(k))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _trim((other,))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "Poly":
        other = _coerce(other)
        return Poly(padd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        other = _coerce(other)
        return Poly(psub(self.coeffs, other.coeffs))

    def __rsub__(self, other) -> "Poly":
        return _coerce(other) - self

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __mul__(self, other) -> "Poly":
        other = _coerce(other)
        return Poly(pmul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, divisor: "Poly") -> tuple["Poly", "Poly"]:
        """Exact long division; the divisor must be monic up to sign."""
        d = divisor.coeffs
        if not d:
            raise ZeroDivisionError("division by the zero polynomial")
        lead = d[-1]
        if lead not in (1, -1):
            raise ValueError("divisor leading coefficient must be +-1")
        rem = list(self.coeffs)
        if len(rem) < len(d):
            return Poly(), Poly(rem)
        quot = [0] * (len(rem) - len(d) + 1)
        for i in range(len(quot) - 1, -1, -1):
            c = rem[i + len(d) - 1] * lead
            quot[i] = c
            if c:
                for j, x in enumerate(d):
                    rem[i + j] -= c * x
        return Poly(quot), Poly(rem)

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def __call__(self, x):
        """Horner evaluation; exact for int / Fraction arguments."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_exact(self, x) -> Fraction:
        """Exact value at a rational point, via homogenised integer Horner."""
        x = Fraction(x)
        p, s = x.numerator, x.denominator
        if not self.coeffs:
            return Fraction(0)
        acc = 0
        scale = 1
        for c in reversed(self.coeffs):
            acc = acc * p + c * scale
            scale *= s
        # acc = s^deg * P(p/s); scale overshot by one factor of s
        return Fraction(acc * s, scale)

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "Poly":
        return cls(int(c) for c in obj["coeffs"])

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                var = "q" if i == 1 else f"q^{i}"
                body = var if mag == 1 else f"{mag}*{var}"
            terms.append(("-" if c < 0 else "+", body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def _coerce(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, int):
        return Poly((x,))
    raise TypeError(f"cannot combine Poly with {type(x).__name__}")
