"""Homotopy calculus on trace words.

A trace word is an ordered list of slots inside an invariant-tensor bracket,
with an overall Scalar coefficient.  Slots refer to a one-parameter family of
connections: the family connection (SLOT_A), its curvature (SLOT_F), a fixed
Lie form, or a bracket of slots.  The homotopy derivation acts structurally
on the slots *before* expansion -- once a word is expanded to components the
identity of a curvature factor is lost -- and the homotopy integral expands
and then integrates the parameter exactly.

Conventions, applied throughout:
* squares of odd forms reduce to half the self-bracket before entering a
  trace, so a rank-r tensor always receives exactly r Lie-valued slots;
* the derivation replaces one curvature slot by dt (d/dt A_t); the dt factor
  is pulled to the front of the word, contributing (-1)^(degree to its left),
  and is consumed by the parameter integration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .algebra import InvariantTensor, LieAlgebra
from .forms import FormExpr
from .lieform import (LieForm, bracket, curvature, ext_d_lie, half_square,
                      lie_zero, trace)
from .scalars import Scalar


# -- connection families -----------------------------------------------------


@dataclass
class Family:
    """Straight-line homotopy A_t = A0 + t (A1 - A0) with its curvature."""
    a0: LieForm
    a1: LieForm
    at: LieForm
    ft: LieForm
    vel: LieForm    # d/dt A_t, constant for an affine family

    def __post_init__(self):
        self._expand_cache: dict = {}

    def endpoint(self, expr: FormExpr, t_value) -> FormExpr:
        return expr.subs_param("t", t_value)


def line_family(a0: LieForm, a1: LieForm) -> Family:
    vel = a1 - a0
    at = a0 + vel.scale(Scalar.t())
    return Family(a0=a0, a1=a1, at=at, ft=curvature(at), vel=vel)


def scaling_family(a: LieForm) -> Family:
    return line_family(lie_zero(a.algebra, 1), a)


# -- slots ---------------------------------------------------------------------


class _Marker:
    __slots__ = ("name", "degree")

    def __init__(self, name: str, degree: int):
        self.name = name
        self.degree = degree

    def __repr__(self):
        return self.name


SLOT_A = _Marker("A_t", 1)
SLOT_F = _Marker("F_t", 2)


@dataclass
class SlotLie:
    """A fixed Lie form: annihilated by the homotopy derivation."""
    form: LieForm

    @property
    def degree(self) -> int:
        return self.form.degree

    def __repr__(self):
        return "<fixed>"


@dataclass
class SlotBr:
    a: object
    b: object

    @property
    def degree(self) -> int:
        return self.a.degree + self.b.degree

    def __repr__(self):
        return f"[{self.a!r},{self.b!r}]"


def _slot_lt(slot, family: Family) -> list[tuple[int, object]]:
    """Derivation on one slot: list of (sign, replacement), dt pulled out."""
    if slot is SLOT_A or isinstance(slot, SlotLie):
        return []
    if slot is SLOT_F:
        return [(1, SlotLie(family.vel))]
    if isinstance(slot, SlotBr):
        out = [(s, SlotBr(a2, slot.b)) for s, a2 in _slot_lt(slot.a, family)]
        sign_a = -1 if slot.a.degree % 2 else 1
        out += [(sign_a * s, SlotBr(slot.a, b2))
                for s, b2 in _slot_lt(slot.b, family)]
        return out
    raise TypeError(f"unknown slot {slot!r}")


def _slot_d(slot) -> list[tuple[Scalar, object]]:
    """Structural exterior derivative of one slot.

    dA_t = F_t - (1/2)[A_t, A_t];  dF_t = [F_t, A_t]  (Bianchi identity).
    """
    if slot is SLOT_A:
        return [(Scalar.one(), SLOT_F),
                (Scalar.of(Fraction(-1, 2)), SlotBr(SLOT_A, SLOT_A))]
    if slot is SLOT_F:
        return [(Scalar.one(), SlotBr(SLOT_F, SLOT_A))]
    if isinstance(slot, SlotLie):
        dx = ext_d_lie(slot.form)
        return [] if dx.is_zero() else [(Scalar.one(), SlotLie(dx))]
    if isinstance(slot, SlotBr):
        out = [(c, SlotBr(a2, slot.b)) for c, a2 in _slot_d(slot.a)]
        sign_a = Scalar.of(-1 if slot.a.degree % 2 else 1)
        out += [(sign_a * c, SlotBr(slot.a, b2)) for c, b2 in _slot_d(slot.b)]
        return out
    raise TypeError(f"unknown slot {slot!r}")


def _slot_key(slot):
    if slot is SLOT_A:
        return "A"
    if slot is SLOT_F:
        return "F"
    if isinstance(slot, SlotLie):
        return ("L", id(slot.form))
    if isinstance(slot, SlotBr):
        return ("B", _slot_key(slot.a), _slot_key(slot.b))
    raise TypeError(f"unknown slot {slot!r}")


def _slot_expand(slot, family: Family) -> LieForm:
    if slot is SLOT_A:
        return family.at
    if slot is SLOT_F:
        return family.ft
    if isinstance(slot, SlotLie):
        return slot.form
    if isinstance(slot, SlotBr):
        key = _slot_key(slot)
        hit = family._expand_cache.get(key)
        if hit is None:
            expanded = bracket(_slot_expand(slot.a, family),
                               _slot_expand(slot.b, family))
            # the slot is retained so the ids in the key stay unique
            family._expand_cache[key] = (slot, expanded)
            return expanded
        return hit[1]
    raise TypeError(f"unknown slot {slot!r}")


# -- words ---------------------------------------------------------------------


@dataclass
class Word:
    coeff: Scalar
    slots: tuple


def lt_words(words: list[Word], family: Family) -> list[Word]:
    """Homotopy derivation on a word sum; the dt marker is consumed.

    Each curvature slot is replaced in turn, with the sign from commuting dt
    across the slot degrees to its left.  Words without a curvature slot are
    annihilated.
    """
    out = []
    for w in words:
        left = 0
        for j, slot in enumerate(w.slots):
            for sign, repl in _slot_lt(slot, family):
                total = sign * (-1 if left % 2 else 1)
                out.append(Word(w.coeff * total,
                                w.slots[:j] + (repl,) + w.slots[j + 1:]))
            left += slot.degree
    return out


def d_words(words: list[Word]) -> list[Word]:
    """Structural exterior derivative of a word sum (graded Leibniz)."""
    out = []
    for w in words:
        left = 0
        for j, slot in enumerate(w.slots):
            for c, repl in _slot_d(slot):
                sign = Scalar.of(-1 if left % 2 else 1)
                out.append(Word(w.coeff * c * sign,
                                w.slots[:j] + (repl,) + w.slots[j + 1:]))
            left += slot.degree
    return out


def expand_words(words: list[Word], family: Family,
                 tensor: InvariantTensor) -> FormExpr:
    from .forms import form_sum
    pieces = []
    for w in words:
        if w.coeff.is_zero():
            continue
        args = [_slot_expand(slot, family) for slot in w.slots]
        pieces.append(trace(args, tensor).scale(w.coeff))
    return form_sum(pieces)


def homotopy_derivation(words: list[Word], family: Family) -> list[Word]:
    return lt_words(words, family)


def homotopy_integral(words: list[Word], family: Family,
                      tensor: InvariantTensor, s_upper=None) -> FormExpr:
    """k: apply the derivation, expand, and integrate t (and s) exactly."""
    expr = expand_words(lt_words(words, family), family, tensor)
    if s_upper is not None:
        expr = expr.integrate_param("s", 0, s_upper)
    return expr.integrate_param("t", 0, 1)


# -- named form builders -------------------------------------------------------


def invariant_power_word(n: int) -> list[Word]:
    """The closed word <F_t^(n+1)>."""
    return [Word(Scalar.one(), (SLOT_F,) * (n + 1))]


def chern_simons(a: LieForm, n: int) -> FormExpr:
    """Chern-Simons form of a degree-1 connection: (n+1) Int_0^1 dt <A F_t^n>
    over the scaling family A_t = tA."""
    if a.degree != 1:
        raise ValueError("connection must be a 1-form")
    tensor = a.algebra.tensor(n + 1)
    fam = scaling_family(a)
    words = [Word(Scalar.of(n + 1), (SlotLie(a),) + (SLOT_F,) * n)]
    return expand_words(words, fam, tensor).integrate_param("t", 0, 1)


def transgression(a1: LieForm, a0: LieForm, n: int) -> FormExpr:
    """(n+1) Int_0^1 dt <(A1-A0) F_t^n> over the straight-line family."""
    tensor = a1.algebra.tensor(n + 1)
    fam = line_family(a0, a1)
    words = [Word(Scalar.of(n + 1), (SlotLie(fam.vel),) + (SLOT_F,) * n)]
    return expand_words(words, fam, tensor).integrate_param("t", 0, 1)


def triangle_form(a1: LieForm, a0: LieForm, n: int) -> FormExpr:
    """Two-parameter simplex form whose differential closes the triangle
    identity: n(n+1) Int_0^1 dt Int_0^t ds <(A1-A0) A0 F_st^(n-1)> with
    A_st = t A0 + s (A1 - A0)."""
    tensor = a1.algebra.tensor(n + 1)
    theta = a1 - a0
    a_st = a0.scale(Scalar.t()) + theta.scale(Scalar.s())
    f_st = curvature(a_st)
    args = [theta, a0] + [f_st] * (n - 1)
    expr = trace(args, tensor).scale(n * (n + 1))
    return expr.integrate_param("s", 0, "t").integrate_param("t", 0, 1)


def triangle_split(a: LieForm, abar: LieForm, n: int):
    """Pieces of the subspace-separation identity for the pair (A, Abar).

    Returns (Q(A, Abar), Q(Abar), simplex form); their recombination
    Q(A, Abar) + Q(Abar) + d(simplex) must equal the Chern-Simons form of A.
    """
    return (transgression(a, abar, n), chern_simons(abar, n),
            triangle_form(a, abar, n))


# -- gauge-dressed Chern-Simons words -------------------------------------------


def gauge_cs_words(a: LieForm, mc: LieForm, n: int) -> list[Word]:
    """The dressed Chern-Simons integrand as a two-parameter word sum:

        (n+1) <(A_t + V) G^n>,   G = s F_t + (s^2 - s)(A_t + V)^2

    over the scaling family of ``a``; ``mc`` is the Maurer-Cartan form V of
    the dressing.  The square reduces to bracket slots, so the derivation
    still sees every curvature factor.
    """
    s = Scalar.s()
    s2s = s * s - s
    half = Scalar.of(Fraction(1, 2))
    first_options = [(Scalar.one(), SLOT_A), (Scalar.one(), SlotLie(mc))]
    g_options = [
        (s, SLOT_F),
        (s2s * half, SlotBr(SLOT_A, SLOT_A)),
        (s2s, SlotBr(SLOT_A, SlotLie(mc))),
        (s2s * half, SlotBr(SlotLie(mc), SlotLie(mc))),
    ]
    words = []
    for c0, first in first_options:
        for combo in itertools.product(g_options, repeat=n):
            coeff = Scalar.of(n + 1) * c0
            for c, _ in combo:
                coeff = coeff * c
            words.append(Word(coeff, (first,) + tuple(s for _, s in combo)))
    return words


def gauge_homotopy_form(a: LieForm, mc: LieForm, n: int) -> FormExpr:
    """Homotopy integral of the dressed Chern-Simons word (a 2n-form).

    Its exterior derivative measures the change of the Chern-Simons form
    under the dressing, up to the Wess-Zumino term of ``mc``.
    """
    tensor = a.algebra.tensor(n + 1)
    fam = scaling_family(a)
    return homotopy_integral(gauge_cs_words(a, mc, n), fam, tensor, s_upper=1)


# -- Wess-Zumino term ------------------------------------------------------------


def wz_coefficient(n: int) -> Fraction:
    """Closed-form coefficient (-1)^n n!(n+1)!/(2n+1)! of the WZ term."""
    return Fraction((-1) ** n * factorial(n) * factorial(n + 1),
                    factorial(2 * n + 1))


def wz_coefficient_beta(n: int) -> Fraction:
    """Same coefficient through the Beta integral (n+1)(-1)^n Int t^n(1-t)^n."""
    t = Scalar.t()
    poly = Scalar.one()
    for _ in range(n):
        poly = poly * t * (1 - t)
    return ((n + 1) * poly.integrate("t", 0, 1) * (-1) ** n).to_fraction()


def wz_term(mc: LieForm, n: int) -> FormExpr:
    """Closed-form WZ term: coefficient times <V^(2n+1)> with the odd square
    reduced to half-brackets."""
    tensor = mc.algebra.tensor(n + 1)
    sq = half_square(mc)
    return trace([mc] + [sq] * n, tensor).scale(wz_coefficient(n))


def wz_term_via_homotopy(mc: LieForm, n: int) -> FormExpr:
    """Independent route: (n+1) Int dt <V ((t^2-t) V^2)^n>, the Chern-Simons
    expression of a flat dressing evaluated on the scaling family."""
    tensor = mc.algebra.tensor(n + 1)
    t = Scalar.t()
    g_t = half_square(mc).scale(t * t - t)
    expr = trace([mc] + [g_t] * n, tensor).scale(n + 1)
    return expr.integrate_param("t", 0, 1)


# -- Cartan homotopy checks -------------------------------------------------------


@dataclass
class HomotopyReport:
    title: str
    lhs: FormExpr
    rhs: FormExpr

    @property
    def residual(self) -> FormExpr:
        return self.lhs - self.rhs

    @property
    def ok(self) -> bool:
        return self.residual.is_zero()

    def __repr__(self):
        return f"<{self.title}: {'pass' if self.ok else 'FAIL'}>"


def derivation_commutator_check(words: list[Word], family: Family,
                                tensor: InvariantTensor) -> HomotopyReport:
    """(l_t d + d l_t) S = dt d/dt S, checked on expanded components.

    Both sides are compared as coefficient forms with the dt factor stripped:
    lt(dS) + d(lt(S)) must equal the t-derivative of the expanded word.
    """
    lt_of_d = expand_words(lt_words(d_words(words), family), family, tensor)
    d_of_lt = expand_words(lt_words(words, family), family, tensor).ext_d()
    rhs = expand_words(words, family, tensor).diff_param("t")
    return HomotopyReport("derivation commutator", lt_of_d + d_of_lt, rhs)


def cartan_check(words: list[Word], family: Family,
                 tensor: InvariantTensor, s_upper=None) -> HomotopyReport:
    """S(A1,F1) - S(A0,F0) = (k d + d k) S, exactly at component level."""
    expanded = expand_words(words, family, tensor)
    if s_upper is not None:
        expanded = expanded.integrate_param("s", 0, s_upper)
    lhs = expanded.subs_param("t", 1) - expanded.subs_param("t", 0)
    k_of_d = homotopy_integral(d_words(words), family, tensor, s_upper)
    d_of_k = homotopy_integral(words, family, tensor, s_upper).ext_d()
    return HomotopyReport("Cartan homotopy formula", lhs, k_of_d + d_of_k)
