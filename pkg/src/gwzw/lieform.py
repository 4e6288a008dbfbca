"""Lie-algebra-valued differential forms.

A LieForm keeps one FormExpr per generator, all of a common form degree.
Lorentz-valued fields resolve the conventional 1/2 factor at the storage
boundary: the component attached to J_ab (a < b) is the full w^{ab}, so the
sum over stored components equals (1/2) w^{ab} J_ab summed over all a, b.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .algebra import GeneratorId, InvariantTensor, J, LieAlgebra, P, j_resolved
from .forms import FormExpr, declare_symbol
from .scalars import RationalLike, Scalar


@dataclass
class LieForm:
    algebra: LieAlgebra
    degree: int
    comps: dict[GeneratorId, FormExpr]

    def __post_init__(self):
        self.comps = {g: f for g, f in self.comps.items() if not f.is_zero()}
        for g, f in self.comps.items():
            degs = f.degrees()
            if degs and degs != {self.degree}:
                raise ValueError(f"component {g} has degree {degs}, "
                                 f"declared {self.degree}")

    # -- access --------------------------------------------------------------

    def component(self, gen: GeneratorId) -> FormExpr:
        return self.comps.get(gen, FormExpr.zero())

    def lorentz_component(self, a: int, b: int) -> FormExpr:
        """x^{ab} with antisymmetry resolved for a > b."""
        sign, gen = j_resolved(a, b)
        if gen is None:
            return FormExpr.zero()
        return self.component(gen).scale(sign)

    def translation_component(self, a: int) -> FormExpr:
        return self.component(P(a))

    def restricted(self, kind: str) -> "LieForm":
        return LieForm(self.algebra, self.degree,
                       {g: f for g, f in self.comps.items() if g.kind == kind})

    def is_zero(self) -> bool:
        return not self.comps

    def support_kinds(self) -> set[str]:
        return {g.kind for g in self.comps}

    # -- linear structure ------------------------------------------------------

    def __add__(self, other: "LieForm") -> "LieForm":
        _require_same_algebra(self, other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        comps = dict(self.comps)
        for g, f in other.comps.items():
            comps[g] = comps.get(g, FormExpr.zero()) + f
        return LieForm(self.algebra, self.degree, comps)

    def __neg__(self) -> "LieForm":
        return self.scale(-1)

    def __sub__(self, other: "LieForm") -> "LieForm":
        return self + (-other)

    def scale(self, c: RationalLike | Scalar) -> "LieForm":
        return LieForm(self.algebra, self.degree,
                       {g: f.scale(c) for g, f in self.comps.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def map_components(self, fn) -> "LieForm":
        return LieForm(self.algebra, self.degree,
                       {g: fn(f) for g, f in self.comps.items()})

    def subs_param(self, name: str, value) -> "LieForm":
        return self.map_components(lambda f: f.subs_param(name, value))

    def truncate_m2(self, order: int) -> "LieForm":
        return self.map_components(lambda f: f.truncate_m2(order))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieForm):
            return NotImplemented
        return self.degree == other.degree and self.comps == other.comps

    def __repr__(self) -> str:
        if not self.comps:
            return "<LieForm 0>"
        parts = [f"{g}: {f}" for g, f in sorted(self.comps.items())]
        return "<LieForm deg %d  %s>" % (self.degree, " | ".join(parts))


def _require_same_algebra(x: LieForm, y: LieForm) -> None:
    if x.algebra.structural_key() != y.algebra.structural_key():
        raise ValueError("operands live in different algebras")


def lie_zero(algebra: LieAlgebra, degree: int) -> LieForm:
    return LieForm(algebra, degree, {})


# -- graded bracket, curvature, covariant derivative -----------------------


def bracket(x: LieForm, y: LieForm) -> LieForm:
    """Graded bracket: wedge of components contracted with structure constants."""
    _require_same_algebra(x, y)
    comps: dict[GeneratorId, FormExpr] = {}
    for g1, f1 in x.comps.items():
        for g2, f2 in y.comps.items():
            pairs = x.algebra.bracket_gens(g1, g2)
            if not pairs:
                continue
            prod = f1.wedge(f2)
            if prod.is_zero():
                continue
            for g3, c in pairs:
                comps[g3] = comps.get(g3, FormExpr.zero()) + prod.scale(c)
    return LieForm(x.algebra, x.degree + y.degree, comps)


def ext_d_lie(x: LieForm) -> LieForm:
    return LieForm(x.algebra, x.degree + 1,
                   {g: f.ext_d() for g, f in x.comps.items()})


def curvature(a: LieForm) -> LieForm:
    """F = dA + (1/2)[A, A] for a degree-1 connection."""
    if a.degree != 1:
        raise ValueError("curvature needs a degree-1 connection")
    return ext_d_lie(a) + half_square(a)


def half_square(a: LieForm) -> LieForm:
    """(1/2)[a, a]: the bracket reduction of the square of an odd form.

    For odd degree the generator-diagonal terms vanish, so the half cancels
    against the double counting and the sum over ordered generator pairs is
    used directly (keeping coefficients integral).
    """
    if a.degree % 2 == 0:
        return bracket(a, a).scale(Fraction(1, 2))
    comps: dict[GeneratorId, FormExpr] = {}
    items = sorted(a.comps.items(), key=lambda kv: kv[0])
    alg = a.algebra
    for i, (g1, f1) in enumerate(items):
        for g2, f2 in items[i + 1:]:
            pairs = alg.bracket_gens(g1, g2)
            if not pairs:
                continue
            prod = f1.wedge(f2)
            if prod.is_zero():
                continue
            for g3, c in pairs:
                comps[g3] = comps.get(g3, FormExpr.zero()) + prod.scale(c)
    return LieForm(alg, 2 * a.degree, comps)


def cov_d(x: LieForm, omega: LieForm) -> LieForm:
    """Lorentz covariant derivative Dx = dx + [omega, x]."""
    return ext_d_lie(x) + bracket(omega, x)


# -- invariant trace ---------------------------------------------------------


def trace(args: list[LieForm], tensor: InvariantTensor) -> FormExpr:
    """Contract an ordered list of Lie forms with a symmetric invariant tensor.

    The tensor value depends only on the generator multiset; all grading
    signs come from the wedge product of the components.  Factors are wedged
    smallest-first (with the graded reordering sign) to keep intermediates
    small, and the tensor value is folded in last.
    """
    from .forms import form_sum
    if len(args) != tensor.rank:
        raise ValueError(f"trace needs {tensor.rank} slots, got {len(args)}")
    for x in args[1:]:
        _require_same_algebra(args[0], x)
    degrees = [x.degree for x in args]
    # a uniform entry magnitude can be folded in once after summation
    common = tensor.uniform_magnitude()
    pieces: list[FormExpr] = []
    for gens, value in tensor.entries.items():
        if common is not None:
            value = Scalar.of(1 if value.to_fraction() > 0 else -1)
        for perm in set(itertools.permutations(gens)):
            factors = []
            for x, g in zip(args, perm):
                f = x.comps.get(g)
                if f is None:
                    factors = None
                    break
                factors.append(f)
            if factors is None:
                continue
            # stable insertion sort by term count, tracking odd-odd swaps
            order = list(range(len(factors)))
            sign = 1
            for i in range(1, len(order)):
                k = order[i]
                j = i - 1
                while j >= 0 and len(factors[order[j]].terms) > len(factors[k].terms):
                    if degrees[order[j]] % 2 and degrees[k] % 2:
                        sign = -sign
                    order[j + 1] = order[j]
                    j -= 1
                order[j + 1] = k
            word = factors[order[0]]
            for idx in order[1:]:
                word = word.wedge(factors[idx])
                if word.is_zero():
                    break
            if not word.is_zero():
                pieces.append(word.scale(value * sign))
    out = form_sum(pieces)
    return out.scale(common) if common is not None else out


# -- adjoint dressing --------------------------------------------------------


def dress_adjoint(x: LieForm, phi: LieForm,
                  m2_order: int | None = None) -> LieForm:
    """Conjugation z^{-1} x z for z = exp(+phi.P), as the terminating or
    m2-truncated series sum_k (-1)^k ad_phi^k(x) / k!.

    phi must be a 0-form valued in translation generators only.  Each pair of
    adjoint actions produces one power of m2, so on deformed algebras the
    series terminates once the truncation order is exhausted.
    """
    if phi.degree != 0 or phi.support_kinds() - {"P"}:
        raise ValueError("dressing field must be a translation-valued 0-form")
    term = x
    if m2_order is not None:
        term = term.truncate_m2(m2_order)
    out = term
    k = 0
    max_steps = 2 * (m2_order if m2_order is not None else 0) + 4
    while not term.is_zero():
        k += 1
        if k > max_steps:
            raise RuntimeError("adjoint series did not terminate; "
                               "set m2_order for deformed algebras")
        term = bracket(phi, term).scale(Fraction(-1, k))
        if m2_order is not None:
            term = term.truncate_m2(m2_order)
        out = out + term
    return out


def exp_conjugation_series(phi: LieForm, signs: int,
                           m2_order: int | None = None) -> LieForm:
    """Maurer-Cartan series for z = exp(+phi.P).

    signs=+1 gives dz z^{-1} = sum_k ad_phi^k(d phi)/(k+1)!;
    signs=-1 gives z^{-1} dz = sum_k (-ad_phi)^k(d phi)/(k+1)!.
    """
    term = ext_d_lie(phi)
    if m2_order is not None:
        term = term.truncate_m2(m2_order)
    out = term
    k = 0
    max_steps = 2 * (m2_order if m2_order is not None else 0) + 4
    while not term.is_zero():
        k += 1
        if k > max_steps:
            raise RuntimeError("Maurer-Cartan series did not terminate; "
                               "set m2_order for deformed algebras")
        term = bracket(phi, term).scale(Fraction(signs, k + 1))
        if m2_order is not None:
            term = term.truncate_m2(m2_order)
        out = out + term
    return out


# -- standard field builders -------------------------------------------------


def spin_connection(algebra: LieAlgebra, sym: str = "w") -> LieForm:
    declare_symbol(sym, degree=1, arity=2, antisym=True)
    D = algebra.dim_index
    return LieForm(algebra, 1, {J(a, b): FormExpr.atom(sym, a, b)
                                for a in range(D) for b in range(a + 1, D)})


def vielbein(algebra: LieAlgebra, sym: str = "e") -> LieForm:
    declare_symbol(sym, degree=1, arity=1)
    return LieForm(algebra, 1, {P(a): FormExpr.atom(sym, a)
                                for a in range(algebra.dim_index)})


def coset_scalar(algebra: LieAlgebra, sym: str = "phi") -> LieForm:
    declare_symbol(sym, degree=0, arity=1)
    return LieForm(algebra, 0, {P(a): FormExpr.atom(sym, a)
                                for a in range(algebra.dim_index)})
