"""Exact univariate rational functions over Q, used as the field Q(t)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Tuple

Coeffs = Tuple[Fraction, ...]

_ZERO: Coeffs = ()
_ONE: Coeffs = (Fraction(1),)


def _trim(p: Sequence[Fraction]) -> Coeffs:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def padd(a: Coeffs, b: Coeffs) -> Coeffs:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def pneg(a: Coeffs) -> Coeffs:
    return tuple(-c for c in a)


def pmul(a: Coeffs, b: Coeffs) -> Coeffs:
    if not a or not b:
        return _ZERO
    if len(a) == 1:
        return _trim(a[0] * c for c in b)
    if len(b) == 1:
        return _trim(b[0] * c for c in a)
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def pdivmod(a: Coeffs, b: Coeffs) -> Tuple[Coeffs, Coeffs]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return _ZERO, a
    rem = list(a)
    lead = b[-1]
    quo = [Fraction(0)] * (len(a) - len(b) + 1)
    for k in range(len(a) - len(b), -1, -1):
        c = rem[k + len(b) - 1] / lead
        quo[k] = c
        if c:
            for j, y in enumerate(b):
                rem[k + j] -= c * y
    return _trim(quo), _trim(rem[: len(b) - 1])


def pmonic(a: Coeffs) -> Coeffs:
    lead = a[-1]
    if lead == 1:
        return a
    return tuple(c / lead for c in a)


def pgcd(a: Coeffs, b: Coeffs) -> Coeffs:
    while b:
        a, b = b, pdivmod(a, b)[1]
    return pmonic(a) if a else _ZERO


def peval(a: Coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


class RatFunc:
    """An element num(t)/den(t) of Q(t), kept reduced with a monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Sequence = _ZERO, den: Sequence = _ONE, _reduced: bool = False):
        num = _trim(Fraction(c) for c in num)
        den = _trim(Fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            num, den = _ZERO, _ONE
        elif not _reduced:
            if len(den) > 1:
                g = pgcd(num, den)
                if len(g) > 1:
                    num = pdivmod(num, g)[0]
                    den = pdivmod(den, g)[0]
            lead = den[-1]
            if lead != 1:
                num = tuple(c / lead for c in num)
                den = tuple(c / lead for c in den)
        self.num: Coeffs = num
        self.den: Coeffs = den
        self._hash = None

    @classmethod
    def t_power(cls, k: int, coef=1) -> "RatFunc":
        coef = Fraction(coef)
        if k >= 0:
            return cls((Fraction(0),) * k + (coef,), _ONE, _reduced=True)
        return cls((coef,), (Fraction(0),) * (-k) + (Fraction(1),), _reduced=True)

    @staticmethod
    def coerce(x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        return RatFunc((Fraction(x),), _ONE, _reduced=True)

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and len(self.den) == 1

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        try:
            other = Fraction(other)
        except (TypeError, ValueError):
            return NotImplemented
        if other == 0:
            return not self.num
        return self.den == _ONE and self.num == (other,)

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.num[0] if self.num else Fraction(0))
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    def __neg__(self) -> "RatFunc":
        return RatFunc(pneg(self.num), self.den, _reduced=True)

    def __add__(self, other) -> "RatFunc":
        other = RatFunc.coerce(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return RatFunc(padd(self.num, other.num), self.den)
        num = padd(pmul(self.num, other.den), pmul(other.num, self.den))
        return RatFunc(num, pmul(self.den, other.den))

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) + (-self)

    def __mul__(self, other) -> "RatFunc":
        other = RatFunc.coerce(other)
        if not self.num or not other.num:
            return RatFunc()
        if len(self.den) == 1 and len(other.den) == 1:
            return RatFunc(pmul(self.num, other.num), _ONE, _reduced=True)
        return RatFunc(pmul(self.num, other.num), pmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero in Q(t)")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other) -> "RatFunc":
        return self * RatFunc.coerce(other).inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inverse() ** (-k)
        out = RatFunc.coerce(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def evaluate(self, value) -> Fraction:
        value = Fraction(value)
        d = peval(self.den, value)
        if d == 0:
            raise ZeroDivisionError(f"denominator vanishes at t={value}")
        return peval(self.num, value) / d

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        n = _pstr(self.num)
        if self.den == _ONE:
            return n
        return f"({n})/({_pstr(self.den)})"


def _pstr(p: Coeffs) -> str:
    if not p:
        return "0"
    parts = []
    for k, c in enumerate(p):
        if c == 0:
            continue
        mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")
