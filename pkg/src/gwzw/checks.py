"""Named verification checks: every identity the engine asserts, runnable as
one suite and re-checkable numerically through the jet oracle."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (build_ads, build_poincare, check_invariance,
                      check_jacobi, contract, invariant_tensor)
from .coset import CosetElement, compare_ads_series, dress, dressed_curvature, maurer_cartan
from .forms import FormExpr
from .gravity import derive_cs_gravity, gwzw_reduce, gwzw_reduce_3d, DerivationReport
from .homotopy import (cartan_check, derivation_commutator_check,
                       gauge_cs_words, invariant_power_word, line_family,
                       scaling_family, transgression, wz_coefficient,
                       wz_coefficient_beta, wz_term, wz_term_via_homotopy)
from .jets import check_identity
from .lieform import (coset_scalar, cov_d, curvature, ext_d_lie,
                      spin_connection, trace, vielbein)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        extra = f"  [{self.detail}]" if self.detail else ""
        return f"[{mark}] {self.name} ({self.seconds:.2f}s){extra}"


def _timed(name: str, fn, detail: str = "") -> CheckResult:
    start = time.perf_counter()
    ok = bool(fn())
    return CheckResult(name, ok, detail, time.perf_counter() - start)


def registry_checks(n: int) -> list[CheckResult]:
    poincare = build_poincare(n)
    ads = build_ads(n)
    tensor = invariant_tensor(n)
    out = [
        _timed(f"jacobi poincare n={n}", lambda: check_jacobi(poincare).ok),
        _timed(f"jacobi ads n={n}", lambda: check_jacobi(ads).ok),
        _timed(f"contraction recovers poincare n={n}",
               lambda: contract(ads) == poincare),
        _timed(f"tensor invariance poincare n={n}",
               lambda: check_invariance(tensor, poincare).ok),
        _timed(f"tensor invariance ads n={n}",
               lambda: check_invariance(tensor, ads).ok,
               detail="deformation terms cancel pairwise; exactly invariant"),
    ]
    return out


def coset_checks(n: int, order: int = 4) -> list[CheckResult]:
    algebra = build_poincare(n)
    omega, e, phi = spin_connection(algebra), vielbein(algebra), coset_scalar(algebra)
    a = e + omega
    z = CosetElement(phi)
    az = dress(a, z)
    out = [
        _timed(f"nonlinear connection W = omega n={n}",
               lambda: az.restricted("J") == omega),
        _timed(f"nonlinear vielbein V = e + Dphi n={n}",
               lambda: az.restricted("P") == e + cov_d(phi, omega)),
        _timed(f"maurer-cartan terminates n={n}",
               lambda: maurer_cartan(z) == ext_d_lie(phi)),
        _timed(f"dressing roundtrip n={n}",
               lambda: dress(az, z.inverse()) == a),
        _timed(f"dressed curvature routes agree n={n}",
               lambda: dressed_curvature(a, z).ok),
    ]
    if n == 1:
        rep = compare_ads_series(n, order)
        out.append(CheckResult(
            f"ads dressing matches hyperbolic series to m^{2 * order}",
            rep.ok,
            detail=("both d/D contraction variants match"
                    if rep.variants_identical else "single variant match")))
    return out


def homotopy_checks(n: int) -> list[CheckResult]:
    algebra = build_poincare(n)
    omega, e, phi = spin_connection(algebra), vielbein(algebra), coset_scalar(algebra)
    a = e + omega
    tensor = algebra.tensor(n + 1)
    mc = ext_d_lie(phi)
    if n == 1:
        other = spin_connection(algebra, "v") + vielbein(algebra, "b")
    else:
        other = dress(a, CosetElement(phi))
    fam = line_family(other, a)
    words = invariant_power_word(n)
    gauge = gauge_cs_words(a, mc, n)
    gauge_fam = scaling_family(a)

    out = [
        _timed(f"cartan formula <F_t^{n + 1}> n={n}",
               lambda: cartan_check(words, fam, tensor).ok),
        _timed(f"derivation commutator <F_t^{n + 1}> n={n}",
               lambda: derivation_commutator_check(words, fam, tensor).ok),
        _timed(f"cartan formula gauge word n={n}",
               lambda: cartan_check(gauge, gauge_fam, tensor, s_upper=1).ok),
        _timed(f"chern-weil n={n}",
               lambda: (trace([curvature(a)] * (n + 1), tensor)
                        - trace([curvature(other)] * (n + 1), tensor))
               == transgression(a, other, n).ext_d()),
        _timed(f"wz coefficient routes n=1..4",
               lambda: all(wz_coefficient(k) == wz_coefficient_beta(k)
                           for k in (1, 2, 3, 4))),
        _timed(f"coset wz term vanishes n={n}",
               lambda: wz_term(mc, n).is_zero()
               and wz_term_via_homotopy(mc, n).is_zero()),
    ]
    return out


def pipeline_checks(n: int) -> tuple[list[CheckResult], list[DerivationReport]]:
    start = time.perf_counter()
    cs = derive_cs_gravity(n)
    cs_time = time.perf_counter() - start
    start = time.perf_counter()
    gw = gwzw_reduce_3d() if n == 1 else gwzw_reduce(n)
    gw_time = time.perf_counter() - start
    results = [CheckResult(f"cs gravity routes n={n}", cs.ok, seconds=cs_time),
               CheckResult(f"gwzw reduction routes n={n}", gw.ok,
                           detail=f"factor vs action {gw.factor_vs_action}",
                           seconds=gw_time)]
    return results, [cs, gw]


def collect_identities(n: int) -> list[tuple[str, FormExpr, FormExpr]]:
    """Every symbolic identity of the derivation chain, as (label, lhs, rhs)."""
    algebra = build_poincare(n)
    omega, e, phi = spin_connection(algebra), vielbein(algebra), coset_scalar(algebra)
    a = e + omega
    tensor = algebra.tensor(n + 1)
    mc = ext_d_lie(phi)
    if n == 1:
        other = spin_connection(algebra, "v") + vielbein(algebra, "b")
    else:
        other = dress(a, CosetElement(phi))
    fam = line_family(other, a)

    identities: list[tuple[str, FormExpr, FormExpr]] = []
    _, reports = pipeline_checks(n)
    for rep in reports:
        for label, lhs, rhs in rep.identities:
            identities.append((f"{rep.target}: {label}", lhs, rhs))
    cartan = cartan_check(invariant_power_word(n), fam, tensor)
    identities.append((f"cartan <F^{n + 1}> n={n}", cartan.lhs, cartan.rhs))
    gauge = cartan_check(gauge_cs_words(a, mc, n), scaling_family(a), tensor,
                         s_upper=1)
    identities.append((f"cartan gauge word n={n}", gauge.lhs, gauge.rhs))
    identities.append((
        f"chern-weil n={n}",
        trace([curvature(a)] * (n + 1), tensor)
        - trace([curvature(other)] * (n + 1), tensor),
        transgression(a, other, n).ext_d()))
    return identities


def oracle_checks(n: int, trials: int = 5, seed: int = 0,
                  base_dim: int | None = None) -> list[CheckResult]:
    if base_dim is None:
        base_dim = 2 * n + 2
    out = []
    identities = collect_identities(n)
    for label, lhs, rhs in identities:
        start = time.perf_counter()
        rep = check_identity(lhs, rhs, trials=trials, base_dim=base_dim,
                             seed=seed, title=label)
        out.append(CheckResult(f"oracle {label}", rep.ok,
                               detail=f"N={base_dim}, {trials} trials",
                               seconds=time.perf_counter() - start))
    # negative control: a sign-flipped identity must fail with a witness
    label, lhs, rhs = next((i for i in identities if not i[1].is_zero()),
                           identities[0])
    start = time.perf_counter()
    bad = check_identity(lhs, lhs.scale(-1), trials=1, base_dim=base_dim,
                         seed=seed, title="corrupted")
    out.append(CheckResult(
        "oracle rejects corrupted identity", not bad.ok,
        detail=(f"witness at {bad.failures[0].coordinate}" if bad.failures
                else "no witness found"),
        seconds=time.perf_counter() - start))
    return out


def _random_expr(rng: random.Random, n: int = 1) -> FormExpr:
    D = 2 * n + 1
    out = FormExpr.zero()
    for _ in range(rng.randint(1, 4)):
        coeff = Fraction(rng.randint(-8, 8), rng.randint(1, 6))
        word = FormExpr.scalar(coeff)
        for _ in range(rng.randint(1, 3)):
            sym = rng.choice(["w", "e", "phi"])
            d = rng.random() < 0.4
            if sym == "w":
                a = rng.randrange(D)
                b = rng.randrange(D)
                if a == b:
                    continue
                word = word.wedge(FormExpr.atom("w", a, b, d=d))
            else:
                word = word.wedge(FormExpr.atom(sym, rng.randrange(D), d=d))
        out = out + word
    return out


def roundtrip_checks(count: int = 100, seed: int = 0) -> list[CheckResult]:
    from .expr_io import ParserContext, from_json, parse_expr, to_json, to_text
    rng = random.Random(seed)
    ctx = ParserContext.for_n(1)
    exprs = [_random_expr(rng) for _ in range(count)]

    def json_ok():
        return all(from_json(to_json(x)) == x for x in exprs)

    def text_ok():
        return all(parse_expr(to_text(x), ctx) == x for x in exprs)

    def deterministic():
        return all(to_json(from_json(to_json(x))) == to_json(x) for x in exprs)

    return [_timed(f"json roundtrip x{count}", json_ok),
            _timed(f"text roundtrip x{count}", text_ok),
            _timed("deterministic emission", deterministic)]


def run_suite(ns: list[int], trials: int = 5, seed: int = 0,
              base_dim: int | None = None, series_order: int = 4) -> list[CheckResult]:
    results: list[CheckResult] = []
    for n in ns:
        results += registry_checks(n)
        results += coset_checks(n, series_order)
        results += homotopy_checks(n)
        pipe, _ = pipeline_checks(n)
        results += pipe
        results += oracle_checks(n, trials=trials, seed=seed, base_dim=base_dim)
    results += roundtrip_checks(seed=seed)
    return results
