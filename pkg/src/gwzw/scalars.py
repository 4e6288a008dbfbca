"""Exact scalar coefficients: rationals, polynomials in t/s, truncated m^2 series.

Every coefficient in the engine is a Scalar.  A Scalar is a polynomial with
Fraction coefficients in three commuting symbols:

* ``t``, ``s`` -- homotopy parameters, eliminated by definite integration,
* ``m2``      -- the deformation parameter (m squared) of the anti-de Sitter
  algebra, optionally truncated: terms of m2-power above ``trunc`` are dropped.

No floating point appears anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

RationalLike = Union[int, Fraction]

# exponent key: (t_power, s_power, m2_power)
_Key = tuple[int, int, int]

_T, _S, _M2 = 0, 1, 2
_PARAM_INDEX = {"t": _T, "s": _S, "m2": _M2}


def _min_trunc(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _norm_coeff(c):
    """Coefficients are int where possible, Fraction otherwise (never float)."""
    if type(c) is int:
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return int(c)
    raise TypeError(f"non-exact coefficient {c!r}")


def mul_terms(t1: dict, t2: dict, trunc: int | None, sign: int = 1) -> dict:
    """Raw polynomial convolution of two term dicts (hot path)."""
    out: dict = {}
    for k1, c1 in t1.items():
        a0, a1, a2 = k1
        c1s = c1 if sign == 1 else -c1
        for k2, c2 in t2.items():
            key = (a0 + k2[0], a1 + k2[1], a2 + k2[2])
            if trunc is not None and key[2] > trunc:
                continue
            c = c1s * c2
            acc = out.get(key)
            if acc is None:
                out[key] = c
            else:
                acc = acc + c
                if acc:
                    out[key] = acc
                else:
                    del out[key]
    return out


def add_terms_into(acc: dict, terms: dict) -> None:
    """In-place accumulation of raw term dicts (hot path)."""
    for key, c in terms.items():
        cur = acc.get(key)
        if cur is None:
            acc[key] = c
        else:
            cur = cur + c
            if cur:
                acc[key] = cur
            else:
                del acc[key]


class Scalar:
    """Immutable exact polynomial in (t, s, m2) over the rationals."""

    __slots__ = ("terms", "trunc")

    def __init__(self, terms: dict[_Key, Fraction] | None = None,
                 trunc: int | None = None):
        clean: dict[_Key, Fraction] = {}
        if terms:
            for key, c in terms.items():
                if c == 0:
                    continue
                if trunc is not None and key[_M2] > trunc:
                    continue
                clean[key] = _norm_coeff(c)
        self.terms = clean
        self.trunc = trunc

    @classmethod
    def _trusted(cls, terms: dict, trunc: int | None) -> "Scalar":
        """Wrap an already-clean term dict without copying (internal)."""
        out = object.__new__(cls)
        out.terms = terms
        out.trunc = trunc
        return out

    # -- constructors ------------------------------------------------------

    @staticmethod
    def of(value: RationalLike | "Scalar") -> "Scalar":
        if isinstance(value, Scalar):
            return value
        return Scalar({(0, 0, 0): value})

    @staticmethod
    def zero() -> "Scalar":
        return Scalar({})

    @staticmethod
    def one() -> "Scalar":
        return Scalar.of(1)

    @staticmethod
    def param(name: str, power: int = 1) -> "Scalar":
        key = [0, 0, 0]
        key[_PARAM_INDEX[name]] = power
        return Scalar({tuple(key): Fraction(1)})

    @staticmethod
    def t() -> "Scalar":
        return Scalar.param("t")

    @staticmethod
    def s() -> "Scalar":
        return Scalar.param("s")

    @staticmethod
    def m2(power: int = 1, trunc: int | None = None) -> "Scalar":
        return Scalar({(0, 0, power): Fraction(1)}, trunc=trunc)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "Scalar":
        other = Scalar.of(other)
        trunc = _min_trunc(self.trunc, other.trunc)
        terms = dict(self.terms)
        add_terms_into(terms, other.terms)
        if trunc is not None:
            terms = {k: c for k, c in terms.items() if k[_M2] <= trunc}
        return Scalar._trusted(terms, trunc)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._trusted({k: -c for k, c in self.terms.items()}, self.trunc)

    def __sub__(self, other) -> "Scalar":
        return self + (-Scalar.of(other))

    def __rsub__(self, other) -> "Scalar":
        return Scalar.of(other) + (-self)

    def __mul__(self, other) -> "Scalar":
        other = Scalar.of(other)
        trunc = _min_trunc(self.trunc, other.trunc)
        return Scalar._trusted(mul_terms(self.terms, other.terms, trunc), trunc)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.of(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_rational(self) -> bool:
        return all(k == (0, 0, 0) for k in self.terms)

    def depends_on(self, name: str) -> bool:
        i = _PARAM_INDEX[name]
        return any(k[i] != 0 for k in self.terms)

    def to_fraction(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError(f"scalar still depends on parameters: {self}")
        return Fraction(self.terms[(0, 0, 0)])

    def m2_order(self) -> int:
        """Highest m2 power present (0 if none)."""
        return max((k[_M2] for k in self.terms), default=0)

    def m2_coefficient(self, power: int) -> "Scalar":
        return Scalar({(k[0], k[1], 0): c for k, c in self.terms.items()
                       if k[_M2] == power})

    # -- parameter elimination ---------------------------------------------

    def truncate(self, order: int) -> "Scalar":
        return Scalar({k: c for k, c in self.terms.items() if k[_M2] <= order},
                      order)

    def subs(self, name: str, value: RationalLike) -> "Scalar":
        i = _PARAM_INDEX[name]
        value = Fraction(value)
        terms: dict[_Key, Fraction] = {}
        for k, c in self.terms.items():
            key = list(k)
            key[i] = 0
            key = tuple(key)
            terms[key] = terms.get(key, Fraction(0)) + c * value ** k[i]
        return Scalar(terms, self.trunc)

    def diff(self, name: str) -> "Scalar":
        """Polynomial derivative in one parameter."""
        i = _PARAM_INDEX[name]
        terms: dict[_Key, Fraction] = {}
        for k, c in self.terms.items():
            if k[i] == 0:
                continue
            key = list(k)
            key[i] -= 1
            terms[tuple(key)] = c * k[i]
        return Scalar(terms, self.trunc)

    def integrate(self, name: str, lower: RationalLike,
                  upper: RationalLike | str) -> "Scalar":
        """Definite integral in one parameter.

        ``upper`` may be the name of another parameter (used for the nested
        inner integral with a parameter-dependent bound); the antiderivative
        power is then transferred onto that parameter.
        """
        i = _PARAM_INDEX[name]
        anti: dict[_Key, Fraction] = {}
        for k, c in self.terms.items():
            key = list(k)
            key[i] += 1
            anti[tuple(key)] = Fraction(c, key[i])
        anti_s = Scalar(anti, self.trunc)
        if isinstance(upper, str):
            if upper == name:
                raise ValueError("upper bound cannot be the integration variable")
            j = _PARAM_INDEX[upper]
            upper_terms: dict[_Key, Fraction] = {}
            for k, c in anti_s.terms.items():
                key = list(k)
                key[j] += key[i]
                key[i] = 0
                upper_terms[tuple(key)] = upper_terms.get(tuple(key), Fraction(0)) + c
            at_upper = Scalar(upper_terms, self.trunc)
        else:
            at_upper = anti_s.subs(name, upper)
        return at_upper - anti_s.subs(name, lower)

    # -- display -----------------------------------------------------------

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key in sorted(self.terms):
            c = self.terms[key]
            syms = "".join(f"*{n}^{key[_PARAM_INDEX[n]]}"
                           for n in ("t", "s", "m2") if key[_PARAM_INDEX[n]])
            parts.append(f"{c}{syms}")
        return " + ".join(parts)


ZERO = Scalar.zero()
ONE = Scalar.one()
HALF = Scalar.of(Fraction(1, 2))
