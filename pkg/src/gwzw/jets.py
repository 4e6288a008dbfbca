"""Numeric oracle: exact-rational first-order jets over an N-dimensional base.

Every atomic field gets a random rational value and first derivatives; a
symbolic identity then becomes an equality of finite exterior-algebra
elements, checked exactly (no tolerances).  The exterior multiplication here
is an independent implementation from the symbolic kernel: values live on
sorted dx index tuples and signs come from a shuffle count.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .forms import Atom, FormExpr, symbol_info

# an exterior value: sorted dx-index tuple -> rational coordinate
ExteriorValue = dict[tuple[int, ...], Fraction]


def ext_zero() -> ExteriorValue:
    return {}


def ext_add(a: ExteriorValue, b: ExteriorValue) -> ExteriorValue:
    out = dict(a)
    for key, c in b.items():
        cur = out.get(key)
        new = c if cur is None else cur + c
        if new:
            out[key] = new
        else:
            out.pop(key, None)
    return out


def _shuffle_sign(left: tuple[int, ...], right: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """Merge two sorted index tuples; None on a repeated index."""
    i = j = 0
    sign = 1
    out = []
    while i < len(left) and j < len(right):
        if left[i] == right[j]:
            return None
        if left[i] < right[j]:
            out.append(left[i])
            i += 1
        else:
            if (len(left) - i) % 2:
                sign = -sign
            out.append(right[j])
            j += 1
    out.extend(left[i:])
    out.extend(right[j:])
    return sign, tuple(out)


def ext_wedge(a: ExteriorValue, b: ExteriorValue) -> ExteriorValue:
    out: ExteriorValue = {}
    for ka, ca in a.items():
        for kb, cb in b.items():
            merged = _shuffle_sign(ka, kb)
            if merged is None:
                continue
            sign, key = merged
            c = ca * cb * sign
            cur = out.get(key)
            new = c if cur is None else cur + c
            if new:
                out[key] = new
            else:
                out.pop(key, None)
    return out


@dataclass
class JetAssignment:
    base_dim: int
    seed: int
    scalars: dict[tuple[str, tuple[int, ...]], tuple[Fraction, tuple[Fraction, ...]]] = field(default_factory=dict)
    one_forms: dict[tuple[str, tuple[int, ...]], tuple[tuple[Fraction, ...], tuple[tuple[Fraction, ...], ...]]] = field(default_factory=dict)

    def value_of(self, atom: Atom) -> ExteriorValue:
        key = (atom.sym, atom.idx)
        info = symbol_info(atom.sym)
        if info.degree == 0:
            if key not in self.scalars:
                raise KeyError(f"no jet assigned for {atom}")
            value, grad = self.scalars[key]
            if not atom.d:
                return {(): value} if value else {}
            return {(mu,): g for mu, g in enumerate(grad) if g}
        if info.degree == 1:
            if key not in self.one_forms:
                raise KeyError(f"no jet assigned for {atom}")
            comps, jac = self.one_forms[key]
            if not atom.d:
                return {(mu,): c for mu, c in enumerate(comps) if c}
            out: ExteriorValue = {}
            for nu in range(self.base_dim):
                for mu in range(nu + 1, self.base_dim):
                    c = jac[nu][mu] - jac[mu][nu]
                    if c:
                        out[(nu, mu)] = c
            return out
        raise ValueError(f"jets support degree 0 and 1 atoms, got {atom}")


def _rand_fraction(rng: random.Random) -> Fraction:
    num = rng.randint(-9, 9)
    den = rng.randint(1, 7)
    return Fraction(num, den)


def assign_jets(atoms: set[Atom], base_dim: int, seed: int) -> JetAssignment:
    """Deterministic rational jets for every base field among ``atoms``.

    Differentiated atoms are never assigned directly; they evaluate through
    the stored first derivatives.
    """
    if base_dim < 1:
        raise ValueError("base dimension must be positive")
    jets = JetAssignment(base_dim=base_dim, seed=seed)
    base_keys = sorted({(a.sym, a.idx) for a in atoms})
    rng = random.Random(seed)
    for sym, idx in base_keys:
        info = symbol_info(sym)
        if info.degree == 0:
            value = _rand_fraction(rng)
            grad = tuple(_rand_fraction(rng) for _ in range(base_dim))
            jets.scalars[(sym, idx)] = (value, grad)
        elif info.degree == 1:
            comps = tuple(_rand_fraction(rng) for _ in range(base_dim))
            jac = tuple(tuple(_rand_fraction(rng) for _ in range(base_dim))
                        for _ in range(base_dim))
            jets.one_forms[(sym, idx)] = (comps, jac)
        else:
            raise ValueError(f"cannot assign first-order jets to {sym}")
    return jets


def evaluate(expr: FormExpr, jets: JetAssignment) -> ExteriorValue:
    """Exact evaluation of a parameter-free expression under a jet assignment."""
    out: ExteriorValue = {}
    for mono, coeff in expr.terms.items():
        c = coeff.to_fraction()
        value: ExteriorValue = {(): Fraction(1)}
        for atom in mono:
            value = ext_wedge(value, jets.value_of(atom))
            if not value:
                break
        for key, v in value.items():
            cv = v * c
            cur = out.get(key)
            new = cv if cur is None else cur + cv
            if new:
                out[key] = new
            else:
                out.pop(key, None)
    return out


@dataclass
class OracleFailure:
    seed: int
    coordinate: tuple[int, ...]
    lhs: Fraction
    rhs: Fraction


@dataclass
class OracleReport:
    title: str
    trials: int
    base_dim: int
    failures: list[OracleFailure]

    @property
    def ok(self) -> bool:
        return not self.failures

    def __repr__(self):
        state = "pass" if self.ok else f"{len(self.failures)} failure(s)"
        return f"<oracle {self.title}: {state} ({self.trials} trials, N={self.base_dim})>"


def check_identity(lhs: FormExpr, rhs: FormExpr, trials: int = 5,
                   base_dim: int | None = None, seed: int = 0,
                   title: str = "identity") -> OracleReport:
    """Exact jet-evaluation of both sides over several seeds.

    The base dimension must accommodate the identity degree, otherwise both
    sides would vanish vacuously and the check would be empty.
    """
    degree = max(lhs.max_degree(), rhs.max_degree())
    if base_dim is None:
        base_dim = degree + 1
    if base_dim < degree:
        raise ValueError(f"base dimension {base_dim} is below the identity "
                         f"degree {degree}; the check would be vacuous")
    atoms = {Atom(a.sym, a.idx, False) for a in lhs.atoms() | rhs.atoms()}
    failures: list[OracleFailure] = []
    for i in range(trials):
        jets = assign_jets(atoms, base_dim, seed + i)
        lv = evaluate(lhs, jets)
        rv = evaluate(rhs, jets)
        for key in sorted(set(lv) | set(rv)):
            a = lv.get(key, Fraction(0))
            b = rv.get(key, Fraction(0))
            if a != b:
                failures.append(OracleFailure(seed + i, key, a, b))
                break
    return OracleReport(title, trials, base_dim, failures)
