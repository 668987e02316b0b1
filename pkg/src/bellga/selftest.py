"""Randomised invariant checks, runnable from the command line (``bellga selftest``)."""
from __future__ import annotations

from typing import Callable

import numpy as np

from . import chsh, correlators, extraction, ga
from .ga import Direction, Multivector

Check = tuple[str, bool, str]


def _random_mv(rng: np.random.Generator) -> Multivector:
    return Multivector(rng.uniform(-1.0, 1.0, 8))


def _random_dir(rng: np.random.Generator) -> Direction:
    return Direction.normalized(rng.normal(size=3))


def check_associativity(rng, cases):
    worst = 0.0
    for _ in range(cases):
        x, y, z = (_random_mv(rng) for _ in range(3))
        worst = max(worst, float(np.max(np.abs(((x * y) * z - x * (y * z)).coefficients))))
    return worst <= ga.CHAIN_TOL, f"max deviation {worst:.3g}"


def check_decomposition(rng, cases):
    worst = 0.0
    for _ in range(cases):
        a, b = _random_dir(rng), _random_dir(rng)
        lhs = Multivector.vector(a) * Multivector.vector(b)
        rhs = ga.dot(a, b) + ga.wedge(a, b)
        worst = max(worst, float(np.max(np.abs((lhs - rhs).coefficients))))
    return worst <= ga.EXACT_TOL, f"max deviation {worst:.3g}"


def check_duality(rng, cases):
    worst = 0.0
    for _ in range(cases):
        a, b = _random_dir(rng), _random_dir(rng)
        d = ga.wedge(a, b) - ga.I * Multivector.vector(ga.cross(a, b))
        worst = max(worst, float(np.max(np.abs(d.coefficients))))
    return worst <= ga.EXACT_TOL, f"max deviation {worst:.3g}"


def check_pseudoscalar(rng, cases):
    ok = (ga.I * ga.I).isclose(-1.0, 0.0)
    worst = 0.0
    for _ in range(cases):
        x = _random_mv(rng)
        worst = max(worst, float(np.max(np.abs((ga.I * x - x * ga.I).coefficients))))
    return ok and worst <= ga.EXACT_TOL, f"I*I exact: {ok}, centrality deviation {worst:.3g}"


def check_dual_products(rng, cases):
    worst = 0.0
    for _ in range(cases):
        a = Multivector.vector(_random_dir(rng))
        b = Multivector.vector(_random_dir(rng))
        worst = max(worst, float(np.max(np.abs(((ga.I * a) * (ga.I * b) + a * b).coefficients))))
    return worst <= ga.EXACT_TOL, f"max deviation {worst:.3g}"


def check_oriented_average(rng, cases):
    worst = 0.0
    for _ in range(cases):
        a, b = _random_dir(rng), _random_dir(rng)
        o = correlators.algebraic_correlation(a, b, "oriented")
        s = correlators.algebraic_correlation(a, b, "standard")
        worst = max(worst, o.residual_bivector_norm, abs(o.scalar_part + ga.dot(a, b)),
                    abs(s.scalar_part + ga.dot(a, b)),
                    abs(s.residual_bivector_norm - float(np.linalg.norm(ga.cross(a, b)))))
    return worst <= ga.EXACT_TOL, f"max deviation {worst:.3g}"


def check_tsirelson(rng, cases):
    corr = correlators.formula_correlator("vector")
    worst = max(abs(chsh.chsh_value(corr, s).S) for s in chsh.random_planar_settings(rng, cases))
    at_opt = abs(chsh.chsh_value(corr, chsh.optimal_planar_settings()).S)
    ok = worst <= chsh.TSIRELSON + 1e-9 and abs(at_opt - chsh.TSIRELSON) <= 1e-12
    return ok, f"max |S| {worst:.15g}, optimum {at_opt:.15g}"


def check_deterministic_bound(rng, cases):
    settings = chsh.random_planar_settings(rng, 1)[0]
    hi, _ = chsh.max_deterministic_S(settings)
    lo, _ = chsh.min_deterministic_S(settings)
    return hi == 2 and lo == -2, f"max {hi}, min {lo}"


def check_extraction_audit(rng, cases):
    grid = chsh.random_planar_settings(rng, 20)
    dirs = [d for s in grid for d in (s.a, s.a_prime, s.b, s.b_prime)]
    maps = [extraction.orientation_sign(), *(extraction.component_parity(k) for k in range(3))]
    maps += [extraction.axis_reference(_random_dir(rng)) for _ in range(5)]
    maps += [extraction.random_table_map(rng, dirs) for _ in range(50)]
    rep = extraction.audit_bell_bound(maps, grid)
    return rep.global_max <= 2.0, f"global max |S| {rep.global_max}"


CHECKS: dict[str, Callable] = {
    "associativity": check_associativity,
    "ab = a.b + a^b": check_decomposition,
    "a^b = I(a x b)": check_duality,
    "I*I = -1, I central": check_pseudoscalar,
    "(Ia)(Ib) = -ab": check_dual_products,
    "bivector averages": check_oriented_average,
    "Tsirelson bound for -a.b": check_tsirelson,
    "deterministic |S| <= 2": check_deterministic_bound,
    "extraction audit |S| <= 2": check_extraction_audit,
}


def run_selftest(cases: int = 1000, seed: int = 20240101) -> list[Check]:
    rng = np.random.default_rng(seed)
    out = []
    for name, fn in CHECKS.items():
        ok, detail = fn(rng, cases)
        out.append((name, bool(ok), detail))
    return out
