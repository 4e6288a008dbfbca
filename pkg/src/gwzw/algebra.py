"""Lie algebra registry: Poincare/AdS builders, invariant tensors, axiom checks.

Generators are labelled J (Lorentz rotations, index pair stored ascending)
and P (translations).  Structure constants are exact Scalars so the AdS
deformation [P_a, P_b] = m2 J_ab stays symbolic in m2.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import Scalar


@dataclass(frozen=True, order=True)
class GeneratorId:
    kind: str
    idx: tuple[int, ...]

    def __repr__(self) -> str:
        return f"{self.kind}[{','.join(map(str, self.idx))}]"


def P(a: int) -> GeneratorId:
    return GeneratorId("P", (a,))


def J(a: int, b: int) -> GeneratorId:
    if a >= b:
        raise ValueError("J indices must be strictly ascending")
    return GeneratorId("J", (a, b))


def j_resolved(a: int, b: int) -> tuple[int, GeneratorId | None]:
    """Canonicalize a J index pair: returns (sign, generator or None if a == b)."""
    if a == b:
        return 0, None
    return (1, J(a, b)) if a < b else (-1, J(b, a))


def eps_sign(indices: tuple[int, ...]) -> int:
    """Sign of the permutation sorting ``indices``; 0 on repeats."""
    if len(set(indices)) != len(indices):
        return 0
    sign = 1
    seq = list(indices)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


Combo = dict[GeneratorId, Scalar]


def _combo_add(acc: Combo, gen: GeneratorId, c: Scalar) -> None:
    cur = acc.get(gen)
    new = c if cur is None else cur + c
    if new.is_zero():
        acc.pop(gen, None)
    else:
        acc[gen] = new


@dataclass(frozen=True)
class InvariantTensor:
    """Totally symmetric invariant tensor, stored on sorted generator tuples."""
    rank: int
    entries: dict[tuple[GeneratorId, ...], Scalar]

    def value(self, gens: tuple[GeneratorId, ...]) -> Scalar:
        if len(gens) != self.rank:
            raise ValueError(f"tensor has rank {self.rank}, got {len(gens)} slots")
        return self.entries.get(tuple(sorted(gens)), Scalar.zero())

    def support(self) -> list[tuple[GeneratorId, ...]]:
        return sorted(self.entries)

    def uniform_magnitude(self) -> Fraction | None:
        """Common |value| over all entries when the values are plain rationals
        of one magnitude (true for the epsilon tensors); None otherwise."""
        mag = None
        for v in self.entries.values():
            if not v.is_rational():
                return None
            f = v.to_fraction()
            if mag is None:
                mag = abs(f)
            elif abs(f) != mag:
                return None
        return mag


@dataclass(frozen=True)
class CosetSplit:
    subalgebra: frozenset[GeneratorId]
    coset: frozenset[GeneratorId]


@dataclass
class LieAlgebra:
    name: str
    n: int
    generators: tuple[GeneratorId, ...]
    structure: dict[tuple[GeneratorId, GeneratorId], tuple[tuple[GeneratorId, Scalar], ...]]
    metric: tuple[Fraction, ...]
    deformation_tag: str | None = None
    tensors: dict[int, InvariantTensor] = field(default_factory=dict)

    @property
    def dim_index(self) -> int:
        """Number of Lorentz index values D = 2n + 1."""
        return 2 * self.n + 1

    def eta(self, a: int) -> Fraction:
        return self.metric[a]

    def bracket_gens(self, g1: GeneratorId, g2: GeneratorId) -> tuple[tuple[GeneratorId, Scalar], ...]:
        return self.structure.get((g1, g2), ())

    def bracket_combo(self, g1: GeneratorId, combo: Combo) -> Combo:
        out: Combo = {}
        for g2, c in combo.items():
            for g3, k in self.bracket_gens(g1, g2):
                _combo_add(out, g3, c * k)
        return out

    def tensor(self, rank: int) -> InvariantTensor:
        try:
            return self.tensors[rank]
        except KeyError:
            raise KeyError(f"algebra {self.name} has no rank-{rank} invariant tensor")

    def structural_key(self):
        struct = {}
        for pair, combo in self.structure.items():
            entries = tuple(sorted(((g, tuple(sorted(c.terms.items())))
                                    for g, c in combo if not c.is_zero())))
            if entries:
                struct[pair] = entries
        return (self.n, self.generators, self.metric,
                tuple(sorted(struct.items())))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.structural_key() == other.structural_key()


def _lorentz_metric(D: int) -> tuple[Fraction, ...]:
    return (Fraction(-1),) + (Fraction(1),) * (D - 1)


def _build_iso_like(n: int, name: str, pp_to_j: Scalar | None) -> LieAlgebra:
    """Common constructor for Poincare (pp_to_j None) and AdS (pp_to_j = m2)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    D = 2 * n + 1
    eta = _lorentz_metric(D)
    js = [J(a, b) for a in range(D) for b in range(a + 1, D)]
    ps = [P(a) for a in range(D)]
    gens = tuple(js + ps)

    structure: dict[tuple[GeneratorId, GeneratorId], tuple[tuple[GeneratorId, Scalar], ...]] = {}

    def put(g1: GeneratorId, g2: GeneratorId, combo: Combo) -> None:
        entries = tuple(sorted(combo.items(), key=lambda kv: kv[0]))
        if entries:
            structure[(g1, g2)] = entries
            structure[(g2, g1)] = tuple((g, -c) for g, c in entries)

    # [J_ab, J_cd] = eta_bc J_ad + eta_ad J_bc - eta_ac J_bd - eta_bd J_ac
    for i, jab in enumerate(js):
        a, b = jab.idx
        for jcd in js[i + 1:]:
            c, d = jcd.idx
            combo: Combo = {}
            for (x, y, sgn) in ((a, d, eta[b] if b == c else None),
                                (b, c, eta[a] if a == d else None),
                                (b, d, -eta[a] if a == c else None),
                                (a, c, -eta[b] if b == d else None)):
                if sgn is None:
                    continue
                s, gen = j_resolved(x, y)
                if gen is not None:
                    _combo_add(combo, gen, Scalar.of(sgn * s))
            put(jab, jcd, combo)

    # [J_ab, P_c] = eta_bc P_a - eta_ac P_b
    for jab in js:
        a, b = jab.idx
        for pc in ps:
            (c,) = pc.idx
            combo = {}
            if b == c:
                _combo_add(combo, P(a), Scalar.of(eta[b]))
            if a == c:
                _combo_add(combo, P(b), Scalar.of(-eta[a]))
            put(jab, pc, combo)

    # [P_a, P_b] = m2 J_ab (AdS) or 0 (Poincare)
    for i, pa in enumerate(ps):
        a = pa.idx[0]
        for pb in ps[i + 1:]:
            b = pb.idx[0]
            combo = {}
            if pp_to_j is not None:
                _combo_add(combo, J(a, b), pp_to_j)
            put(pa, pb, combo)

    alg = LieAlgebra(name=name, n=n, generators=gens, structure=structure,
                     metric=eta,
                     deformation_tag=None if pp_to_j is None else "m2")
    alg.tensors[n + 1] = invariant_tensor(n)
    return alg


def build_poincare(n: int) -> LieAlgebra:
    """iso(2n, 1): Lorentz rotations plus commuting translations."""
    return _build_iso_like(n, f"iso({2 * n},1)", None)


def build_ads(n: int) -> LieAlgebra:
    """so(2n, 2)-type deformation with [P_a, P_b] = m2 J_ab, m2 symbolic."""
    return _build_iso_like(n, f"ads(n={n})", Scalar.m2())


def contract(algebra: LieAlgebra) -> LieAlgebra:
    """Flat limit m2 -> 0; requires a deformation tag, which is preserved."""
    if algebra.deformation_tag is None:
        raise ValueError("algebra carries no deformation parameter to contract")
    structure = {}
    for pair, combo in algebra.structure.items():
        entries = tuple((g, c.subs("m2", 0)) for g, c in combo)
        entries = tuple((g, c) for g, c in entries if not c.is_zero())
        if entries:
            structure[pair] = entries
    out = LieAlgebra(name=f"contract({algebra.name})", n=algebra.n,
                     generators=algebra.generators, structure=structure,
                     metric=algebra.metric,
                     deformation_tag=algebra.deformation_tag)
    out.tensors.update(algebra.tensors)
    return out


def _pair_partitions(indices: tuple[int, ...]):
    """Unordered partitions of an even index set into ascending pairs."""
    if not indices:
        yield ()
        return
    first = indices[0]
    rest = indices[1:]
    for i, second in enumerate(rest):
        pair = (first, second)
        remaining = rest[:i] + rest[i + 1:]
        for tail in _pair_partitions(remaining):
            yield (pair,) + tail


def invariant_tensor(n: int) -> InvariantTensor:
    """Rank n+1 tensor with <J...J P> = 2^n/(n+1) eps on all index assignments."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    D = 2 * n + 1
    coeff = Fraction(2 ** n, n + 1)
    entries: dict[tuple[GeneratorId, ...], Scalar] = {}
    for q in range(D):
        others = tuple(i for i in range(D) if i != q)
        for pairs in _pair_partitions(others):
            flat = tuple(i for pair in pairs for i in pair) + (q,)
            value = coeff * eps_sign(flat)
            gens = tuple(sorted([J(a, b) for a, b in pairs] + [P(q)]))
            entries[gens] = Scalar.of(value)
    return InvariantTensor(rank=n + 1, entries=entries)


@dataclass
class CheckReport:
    title: str
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def __repr__(self) -> str:
        state = "pass" if self.ok else f"{len(self.violations)} violation(s)"
        return f"<{self.title}: {state}>"


def check_jacobi(algebra: LieAlgebra) -> CheckReport:
    """Exhaustive Jacobi check over unordered generator triples."""
    violations = []
    gens = algebra.generators
    for x, y, z in itertools.combinations(gens, 3):
        total: Combo = {}
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            inner: Combo = dict(algebra.bracket_gens(b, c))
            for g, coeff in algebra.bracket_combo(a, inner).items():
                _combo_add(total, g, coeff)
        if total:
            violations.append(((x, y, z), total))
    return CheckReport(f"jacobi[{algebra.name}]", violations)


def check_invariance(tensor: InvariantTensor, algebra: LieAlgebra) -> CheckReport:
    """Ad-invariance: the slot-wise bracket insertion sums to zero.

    For every adjoint generator T and slot tuple (i_1 .. i_r) the sum over
    slots of <i_1 .. [T, i_j] .. i_r> must vanish.
    """
    if tensor.rank < 2:
        raise ValueError("invariance needs rank >= 2")
    violations = []
    gens = algebra.generators
    for adj in gens:
        for tup in itertools.combinations_with_replacement(gens, tensor.rank):
            total = Scalar.zero()
            for j in range(tensor.rank):
                for g, c in algebra.bracket_gens(adj, tup[j]):
                    slots = tup[:j] + (g,) + tup[j + 1:]
                    total = total + c * tensor.value(slots)
            if not total.is_zero():
                violations.append((adj, tup, total))
    return CheckReport(f"invariance[{algebra.name}]", violations)


def lorentz_split(algebra: LieAlgebra) -> CosetSplit:
    """Reductive split into the Lorentz subalgebra and the translations."""
    sub = frozenset(g for g in algebra.generators if g.kind == "J")
    coset = frozenset(g for g in algebra.generators if g.kind == "P")
    split = CosetSplit(sub, coset)
    check_reductive(split, algebra)
    return split


def check_reductive(split: CosetSplit, algebra: LieAlgebra) -> None:
    if split.subalgebra | split.coset != set(algebra.generators) or \
            split.subalgebra & split.coset:
        raise ValueError("split is not a disjoint cover of the generators")
    for x in split.subalgebra:
        for y in split.coset:
            for g, _ in algebra.bracket_gens(x, y):
                if g not in split.coset:
                    raise ValueError(f"split not reductive: [{x},{y}] hits {g}")
