"""Exact scalars: Gaussian rationals extended by square roots of positive rationals.

A :class:`RadScalar` is a finite sum ``sum (re + im*i) * sqrt(r)`` over
squarefree radicands ``r >= 1``.  Products of radicals are renormalized by
pulling square factors into the coefficient, so equal numbers always have
equal term maps.

>>> s2 = RadScalar.sqrt(2)
>>> s2 * s2
RadScalar(2)
>>> RadScalar.sqrt(6) * RadScalar.sqrt(10)
RadScalar(2*sqrt(15))
>>> RadScalar.sqrt(Fraction(1, 2))
RadScalar(1/2*sqrt(2))
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = [
    "RadScalar",
    "ZERO",
    "ONE",
    "I",
    "as_scalar",
    "sqrt_pos_rational",
    "squarefree_decompose",
    "scalar_from_json",
    "scalar_to_json",
]

_F0 = Fraction(0)


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(a, b)`` with ``n == a*a*b`` and ``b`` squarefree.

    >>> squarefree_decompose(60)
    (2, 15)
    """
    if n <= 0:
        raise ValueError(f"expected a positive integer, got {n}")
    a, b = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            a *= p ** (e // 2)
            if e % 2:
                b *= p
        p += 1 if p == 2 else 2
    return a, b * n


def _primes(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to an exact rational")


class RadScalar:
    """Immutable exact scalar; see the module docstring."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, value=0):
        if isinstance(value, RadScalar):
            self._terms = value._terms
        elif isinstance(value, complex):
            re, im = Fraction(value.real), Fraction(value.imag)
            if re.denominator > 2**20 or im.denominator > 2**20:
                raise ValueError("refusing to build an exact scalar from an inexact complex")
            self._terms = {1: (re, im)} if (re or im) else {}
        elif isinstance(value, float):
            if not value.is_integer():
                raise ValueError("refusing to build an exact scalar from a non-integral float")
            self._terms = {1: (Fraction(int(value)), _F0)} if value else {}
        else:
            q = _fraction(value)
            self._terms = {1: (q, _F0)} if q else {}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "RadScalar":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def from_terms(cls, terms) -> "RadScalar":
        """Build from ``{radicand: (re, im)}``; radicands need not be squarefree."""
        out: dict[int, tuple[Fraction, Fraction]] = {}
        for r, c in dict(terms).items():
            if isinstance(c, tuple):
                re, im = _fraction(c[0]), _fraction(c[1])
            else:
                re, im = _fraction(c), _F0
            a, b = squarefree_decompose(int(r))
            re, im = re * a, im * a
            if b in out:
                re, im = out[b][0] + re, out[b][1] + im
            out[b] = (re, im)
        return cls._raw({r: c for r, c in out.items() if c[0] or c[1]})

    @classmethod
    def gaussian(cls, re, im=0) -> "RadScalar":
        re, im = _fraction(re), _fraction(im)
        return cls._raw({1: (re, im)} if (re or im) else {})

    @classmethod
    def sqrt(cls, q) -> "RadScalar":
        return sqrt_pos_rational(q)

    @property
    def terms(self) -> dict[int, tuple[Fraction, Fraction]]:
        return dict(self._terms)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, RadScalar):
            try:
                other = RadScalar(other)
            except TypeError:
                return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for r, (re, im) in other._terms.items():
            if r in out:
                a, b = out[r]
                a, b = a + re, b + im
                if a or b:
                    out[r] = (a, b)
                else:
                    del out[r]
            else:
                out[r] = (re, im)
        return RadScalar._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return RadScalar._raw({r: (-a, -b) for r, (a, b) in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, RadScalar):
            try:
                other = RadScalar(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RadScalar(other) - self

    def __mul__(self, other):
        if not isinstance(other, RadScalar):
            try:
                other = RadScalar(other)
            except TypeError:
                return NotImplemented
        st, ot = self._terms, other._terms
        if not st or not ot:
            return ZERO
        # rational fast path
        if len(ot) == 1 and 1 in ot and not ot[1][1]:
            c = ot[1][0]
            if c == 1:
                return self
            return RadScalar._raw({r: (a * c, b * c) for r, (a, b) in st.items()})
        if len(st) == 1 and 1 in st and not st[1][1]:
            return other * self
        out: dict[int, tuple[Fraction, Fraction]] = {}
        for r1, (a1, b1) in st.items():
            for r2, (a2, b2) in ot.items():
                if r1 == 1:
                    g, r = 1, r2
                elif r2 == 1:
                    g, r = 1, r1
                else:
                    g = math.gcd(r1, r2)
                    r = (r1 // g) * (r2 // g)
                re = (a1 * a2 - b1 * b2) * g
                im = (a1 * b2 + b1 * a2) * g
                if r in out:
                    x, y = out[r]
                    out[r] = (x + re, y + im)
                else:
                    out[r] = (re, im)
        return RadScalar._raw({r: c for r, c in out.items() if c[0] or c[1]})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, RadScalar):
            other = RadScalar(other)
        if not other._terms:
            raise ZeroDivisionError("division by zero")
        num, den = self, other
        # multiply through by the conjugate under sqrt(p) -> -sqrt(p), one prime at a time
        for p in sorted({q for r in den._terms for q in _primes(r)}):
            flip = den._flip(p)
            num, den = num * flip, den * flip
        ((r, (a, b)),) = den._terms.items()
        n2 = a * a + b * b
        # 1/(c sqrt r) = conj(c) sqrt(r) / (|c|^2 r)
        return num * RadScalar._raw({r: (a / (n2 * r), -b / (n2 * r))})

    def _flip(self, p: int) -> "RadScalar":
        return RadScalar._raw({r: ((-a, -b) if r % p == 0 else (a, b)) for r, (a, b) in self._terms.items()})

    def conj(self) -> "RadScalar":
        return RadScalar._raw({r: (a, -b) for r, (a, b) in self._terms.items()})

    # -- queries ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_rational(self) -> bool:
        t = self._terms
        return not t or (len(t) == 1 and 1 in t and not t[1][1])

    def is_gaussian(self) -> bool:
        t = self._terms
        return not t or (len(t) == 1 and 1 in t)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self._terms[1][0] if self._terms else _F0

    def abs_squared(self) -> "RadScalar":
        return self * self.conj()

    def abs_exact(self) -> Fraction | None:
        """``|self|`` as a Fraction when it is rational, else ``None``."""
        if not self._terms:
            return _F0
        if len(self._terms) != 1:
            return None
        ((r, (a, b)),) = self._terms.items()
        n2 = (a * a + b * b) * r
        num = math.isqrt(n2.numerator)
        den = math.isqrt(n2.denominator)
        if num * num == n2.numerator and den * den == n2.denominator:
            return Fraction(num, den)
        return None

    def to_complex(self) -> complex:
        z = 0j
        for r, (a, b) in self._terms.items():
            z += complex(float(a), float(b)) * (1.0 if r == 1 else math.sqrt(r))
        return z

    def __complex__(self):
        return self.to_complex()

    def __abs__(self) -> float:
        return abs(self.to_complex())

    def __eq__(self, other):
        if isinstance(other, RadScalar):
            return self._terms == other._terms
        try:
            return self._terms == RadScalar(other)._terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"RadScalar({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for r in sorted(self._terms):
            a, b = self._terms[r]
            if b == 0:
                c = str(a)
            elif a == 0:
                c = f"{b}i" if b != 1 else "i"
            else:
                c = f"({a}{'+' if b > 0 else '-'}{abs(b)}i)"
            if r == 1:
                parts.append(c)
            elif c == "1":
                parts.append(f"sqrt({r})")
            else:
                parts.append(f"{c}*sqrt({r})")
        return " + ".join(parts)


ZERO = RadScalar._raw({})
ONE = RadScalar._raw({1: (Fraction(1), _F0)})
I = RadScalar._raw({1: (_F0, Fraction(1))})


def as_scalar(x) -> RadScalar:
    return x if isinstance(x, RadScalar) else RadScalar(x)


def sqrt_pos_rational(q) -> RadScalar:
    """Exact square root of a positive rational in canonical form.

    >>> sqrt_pos_rational(Fraction(4, 9))
    RadScalar(2/3)
    """
    q = _fraction(q)
    if q <= 0:
        raise ValueError(f"square root requires a positive rational, got {q}")
    p, s = q.numerator, q.denominator
    a, b = squarefree_decompose(p * s)
    return RadScalar._raw({b: (Fraction(a, s), _F0)})


def scalar_to_json(x: RadScalar) -> list[dict]:
    return [
        {"rad": r, "re": str(a), "im": str(b)}
        for r, (a, b) in sorted(x._terms.items())
    ]


def scalar_from_json(obj) -> RadScalar:
    """Accepts the term-list form, or a bare number / fraction string."""
    if isinstance(obj, (int, str)):
        return RadScalar(Fraction(obj))
    if not isinstance(obj, list):
        raise ValueError(f"expected a list of radical terms, got {obj!r}")
    terms: dict[int, tuple[Fraction, Fraction]] = {}
    for t in obj:
        if not isinstance(t, dict) or "rad" not in t:
            raise ValueError(f"malformed radical term {t!r}")
        r = int(t["rad"])
        if r < 1:
            raise ValueError(f"radicand must be >= 1, got {r}")
        re = Fraction(str(t.get("re", "0")))
        im = Fraction(str(t.get("im", "0")))
        terms.setdefault(r, (_F0, _F0))
        terms[r] = (terms[r][0] + re, terms[r][1] + im)
    return RadScalar.from_terms(terms)

