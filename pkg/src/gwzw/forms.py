"""Graded-commutative algebra of component differential forms.

A FormExpr is a sparse linear combination of canonically ordered wedge
monomials in atomic field symbols and their formal exterior derivatives,
with Scalar coefficients.  Canonical ordering makes equality a dictionary
comparison; all grading signs are produced during canonicalization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, NamedTuple

from .scalars import RationalLike, Scalar


@dataclass(frozen=True)
class SymbolInfo:
    name: str
    degree: int          # 0 or 1 for assignable fields
    arity: int           # number of Lorentz indices
    antisym: bool        # index pair stored ascending, swap flips sign
    rank: int            # position in the canonical atom order


_SYMBOLS: dict[str, SymbolInfo] = {}


def declare_symbol(name: str, degree: int, arity: int,
                   antisym: bool = False) -> SymbolInfo:
    """Register an atomic field symbol; idempotent for identical redeclaration."""
    if name in _SYMBOLS:
        info = _SYMBOLS[name]
        if (info.degree, info.arity, info.antisym) != (degree, arity, antisym):
            raise ValueError(f"symbol {name!r} already declared differently")
        return info
    if antisym and arity != 2:
        raise ValueError("antisymmetric symbols carry exactly two indices")
    if degree not in (0, 1):
        raise ValueError("atomic fields must be 0- or 1-forms")
    info = SymbolInfo(name, degree, arity, antisym, rank=len(_SYMBOLS))
    _SYMBOLS[name] = info
    return info


def symbol_info(name: str) -> SymbolInfo:
    return _SYMBOLS[name]


def known_symbols() -> dict[str, SymbolInfo]:
    return dict(_SYMBOLS)


# Default field content: spin connection, vielbein, coset scalar.
declare_symbol("w", degree=1, arity=2, antisym=True)
declare_symbol("e", degree=1, arity=1)
declare_symbol("phi", degree=0, arity=1)


class Atom(NamedTuple):
    sym: str
    idx: tuple[int, ...]
    d: bool

    @property
    def degree(self) -> int:
        return _SYMBOLS[self.sym].degree + (1 if self.d else 0)

    def sort_key(self):
        # non-differentiated atoms first, then by declaration rank and indices
        return (self.d, _SYMBOLS[self.sym].rank, self.idx)

    def __repr__(self) -> str:
        body = f"{self.sym}[{','.join(map(str, self.idx))}]"
        return f"d({body})" if self.d else body


Monomial = tuple[Atom, ...]


def _sort_atoms(atoms: list[Atom]) -> tuple[int, Monomial] | None:
    """Insertion sort with graded transposition signs.

    Returns (sign, sorted atoms) or None when the word contains a repeated
    odd-degree atom and is identically zero.
    """
    atoms = list(atoms)
    sign = 1
    for i in range(1, len(atoms)):
        a = atoms[i]
        j = i - 1
        while j >= 0 and atoms[j].sort_key() > a.sort_key():
            if (atoms[j].degree * a.degree) % 2 == 1:
                sign = -sign
            atoms[j + 1] = atoms[j]
            j -= 1
        atoms[j + 1] = a
    for i in range(1, len(atoms)):
        if atoms[i] == atoms[i - 1] and atoms[i].degree % 2 == 1:
            return None
    return sign, tuple(atoms)


_MONO_META: dict[Monomial, tuple[tuple, tuple]] = {}


def _mono_meta(m: Monomial) -> tuple[tuple, tuple]:
    """Cached (sort keys, degrees) per canonical monomial (pure cache)."""
    meta = _MONO_META.get(m)
    if meta is None:
        syms = _SYMBOLS
        keys = tuple((a.d, syms[a.sym].rank, a.idx) for a in m)
        degs = tuple(syms[a.sym].degree + a.d for a in m)
        meta = (keys, degs)
        _MONO_META[m] = meta
    return meta


def _merge_monos(m1: Monomial, m2: Monomial) -> tuple[int, Monomial] | None:
    """Merge two canonically ordered monomials with the graded sign (hot path)."""
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    keys1, degs1 = _mono_meta(m1)
    keys2, degs2 = _mono_meta(m2)
    odd_left = sum(1 for d in degs1 if d % 2)
    i = j = 0
    n1, n2 = len(m1), len(m2)
    out = []
    sign = 1
    odd_seen = 0  # odd-degree m1 atoms already emitted
    while i < n1 and j < n2:
        if keys1[i] <= keys2[j]:
            if degs1[i] % 2:
                odd_seen += 1
            out.append(m1[i])
            i += 1
        else:
            if degs2[j] % 2 and (odd_left - odd_seen) % 2:
                sign = -sign
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    for k in range(1, len(out)):
        if out[k] == out[k - 1]:
            a = out[k]
            if (_SYMBOLS[a.sym].degree + a.d) % 2:
                return None
    return sign, tuple(out)


class FormExpr:
    """Sparse Scalar-linear combination of canonical wedge monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Scalar] = {}
        if terms:
            for mono, c in terms.items():
                if not c.is_zero():
                    clean[mono] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "FormExpr":
        return FormExpr({})

    @staticmethod
    def scalar(value: RationalLike | Scalar) -> "FormExpr":
        return FormExpr({(): Scalar.of(value)})

    @staticmethod
    def atom(sym: str, *idx: int, d: bool = False) -> "FormExpr":
        """Single-atom expression; antisymmetric index pairs are resolved here."""
        info = _SYMBOLS[sym]
        if len(idx) != info.arity:
            raise ValueError(f"{sym} takes {info.arity} indices, got {len(idx)}")
        sign = 1
        if info.antisym:
            a, b = idx
            if a == b:
                return FormExpr.zero()
            if a > b:
                idx = (b, a)
                sign = -1
        return FormExpr({(Atom(sym, tuple(idx), d),): Scalar.of(sign)})

    # -- linear structure ----------------------------------------------------

    def __add__(self, other: "FormExpr") -> "FormExpr":
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            acc = terms.get(mono)
            terms[mono] = c if acc is None else acc + c
        return FormExpr(terms)

    def __neg__(self) -> "FormExpr":
        return FormExpr({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "FormExpr") -> "FormExpr":
        return self + (-other)

    def scale(self, c: RationalLike | Scalar) -> "FormExpr":
        c = Scalar.of(c)
        if c.is_zero():
            return FormExpr.zero()
        return FormExpr({m: k * c for m, k in self.terms.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((m, c) for m, c in self.terms.items()))

    # -- graded product and derivative --------------------------------------

    def wedge(self, other: "FormExpr") -> "FormExpr":
        from .scalars import _min_trunc, add_terms_into, mul_terms
        acc: dict[Monomial, list] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                merged = _merge_monos(m1, m2)
                if merged is None:
                    continue
                sign, mono = merged
                trunc = _min_trunc(c1.trunc, c2.trunc)
                raw = mul_terms(c1.terms, c2.terms, trunc, sign)
                slot = acc.get(mono)
                if slot is None:
                    acc[mono] = [raw, trunc]
                else:
                    add_terms_into(slot[0], raw)
                    slot[1] = _min_trunc(slot[1], trunc)
        terms = {}
        for mono, (raw, trunc) in acc.items():
            if trunc is not None:
                raw = {k: c for k, c in raw.items() if k[2] <= trunc}
            if raw:
                terms[mono] = Scalar._trusted(raw, trunc)
        out = FormExpr.__new__(FormExpr)
        out.terms = terms
        return out

    def __xor__(self, other: "FormExpr") -> "FormExpr":
        return self.wedge(other)

    def ext_d(self) -> "FormExpr":
        """Graded Leibniz exterior derivative; d of a d-atom is zero."""
        out: dict[Monomial, Scalar] = {}
        for mono, c in self.terms.items():
            left_degree = 0
            for i, atom in enumerate(mono):
                if not atom.d:
                    datom = Atom(atom.sym, atom.idx, True)
                    word = _sort_atoms(list(mono[:i]) + [datom] + list(mono[i + 1:]))
                    if word is not None:
                        sign, new_mono = word
                        if left_degree % 2 == 1:
                            sign = -sign
                        cc = c * sign
                        acc = out.get(new_mono)
                        out[new_mono] = cc if acc is None else acc + cc
                left_degree += atom.degree
        return FormExpr(out)

    # -- parameter handling --------------------------------------------------

    def map_scalars(self, fn) -> "FormExpr":
        return FormExpr({m: fn(c) for m, c in self.terms.items()})

    def integrate_param(self, name: str, lower: RationalLike,
                        upper: RationalLike | str) -> "FormExpr":
        return self.map_scalars(lambda c: c.integrate(name, lower, upper))

    def subs_param(self, name: str, value: RationalLike) -> "FormExpr":
        return self.map_scalars(lambda c: c.subs(name, value))

    def diff_param(self, name: str) -> "FormExpr":
        return self.map_scalars(lambda c: c.diff(name))

    def truncate_m2(self, order: int) -> "FormExpr":
        return self.map_scalars(lambda c: c.truncate(order))

    def m2_coefficient(self, power: int) -> "FormExpr":
        return self.map_scalars(lambda c: c.m2_coefficient(power))

    def depends_on(self, name: str) -> bool:
        return any(c.depends_on(name) for c in self.terms.values())

    # -- queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {sum(a.degree for a in m) for m in self.terms}

    @property
    def degree(self) -> int | None:
        """Common degree of all monomials, or None for mixed/zero expressions."""
        degs = self.degrees()
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def max_degree(self) -> int:
        return max((sum(a.degree for a in m) for m in self.terms), default=0)

    def atoms(self) -> set[Atom]:
        return {a for m in self.terms for a in m}

    def sorted_terms(self) -> list[tuple[Monomial, Scalar]]:
        return sorted(self.terms.items(),
                      key=lambda kv: (len(kv[0]), [a.sort_key() for a in kv[0]]))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            word = "^".join(map(repr, mono)) if mono else "1"
            parts.append(f"({c})*{word}")
        return " + ".join(parts)


def wedge(*factors: FormExpr) -> FormExpr:
    """Wedge product of any number of expressions."""
    out = FormExpr.scalar(1)
    for f in factors:
        out = out.wedge(f)
    return out


def form_sum(exprs) -> FormExpr:
    """Sum many expressions without quadratic dictionary copying."""
    acc: dict[Monomial, Scalar] = {}
    for e in exprs:
        for m, c in e.terms.items():
            cur = acc.get(m)
            if cur is None:
                acc[m] = c
            else:
                cur = cur + c
                if cur.is_zero():
                    del acc[m]
                else:
                    acc[m] = cur
    out = FormExpr.__new__(FormExpr)
    out.terms = acc
    return out


def wedge_power(x: FormExpr, k: int) -> FormExpr:
    out = FormExpr.scalar(1)
    for _ in range(k):
        out = out.wedge(x)
    return out


def ext_d(x: FormExpr) -> FormExpr:
    return x.ext_d()


def integrate_param(x: FormExpr, name: str, lower: RationalLike,
                    upper: RationalLike | str) -> FormExpr:
    return x.integrate_param(name, lower, upper)


# -- Taylor data for the deformation series ----------------------------------
#
# The coset dressing over the deformed algebra is compared against series in
# x^2 = m2 * phi2 where phi2 is the contracted scalar square of the coset
# field.  Each entry maps to the coefficient of x^(2k) in the named function.

_SERIES_COEFF = {
    "cosh": lambda k: Fraction(1, factorial(2 * k)),
    "cosh_minus_1_over_x2": lambda k: Fraction(1, factorial(2 * k + 2)),
    "sinh_over_x": lambda k: Fraction(1, factorial(2 * k + 1)),
    "sinh_over_x_minus_1_over_x2": lambda k: Fraction(1, factorial(2 * k + 3)),
}


def series_coefficients(kind: str, order: int) -> list[Fraction]:
    """Coefficients of x^0, x^2, ..., x^(2*order) for the named function."""
    fn = _SERIES_COEFF[kind]
    return [fn(k) for k in range(order + 1)]


def series_in_m2(kind: str, order: int, phi_sq: FormExpr) -> FormExpr:
    """Truncated series of the named function of x, with x^2 = m2 * phi_sq.

    The result is a FormExpr whose scalars are polynomials in m2 tagged with
    truncation order ``order``.
    """
    out = FormExpr.zero()
    for k, c in enumerate(series_coefficients(kind, order)):
        out = out + wedge_power(phi_sq, k).scale(Scalar.m2(k, trunc=order) * c)
    return out
