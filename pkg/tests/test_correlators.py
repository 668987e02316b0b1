import math

import numpy as np
import pytest

from bellga import ga, kernels
from bellga.correlators import (MonteCarlo, algebraic_correlation, correlator,
                                exact_correlation_formula, mc, mc_moments,
                                scalar_product_correlation, sign_correlation,
                                standard_error_ratio)
from bellga.errors import ContractViolation, InvalidInputError
from bellga.ga import Direction
from bellga.models import sign_source

X, Y = ga.X_AXIS, ga.Y_AXIS
D45 = Direction(math.sqrt(2) / 2, math.sqrt(2) / 2, 0.0)


def _rand_dirs(rng, n):
    return [Direction.normalized(v) for v in rng.normal(size=(n, 3))]


def test_sign_correlation_examples():
    assert sign_correlation(sign_source, X, Y).mean == -1.0
    est = sign_correlation(sign_source, X, Y, mc(10**6, seed=7))
    assert est.mean == -1.0 and est.stderr == 0.0 and est.n == 10**6 and not est.exact
    const = lambda eps, a, b: (np.ones_like(eps), np.ones_like(eps))
    assert sign_correlation(const, X, Y).mean == 1.0
    assert sign_correlation(const, X, Y, mc(1000, 1)).mean == 1.0


def test_sign_correlation_rejects_non_sign_source():
    bad = lambda eps, a, b: (0.5 * eps, eps)
    with pytest.raises(ContractViolation):
        sign_correlation(bad, X, Y)
    with pytest.raises(ContractViolation):
        sign_correlation(bad, X, Y, mc(10, 0))


def test_mc_mode_requires_samples():
    with pytest.raises(InvalidInputError):
        MonteCarlo(0)
    with pytest.raises(InvalidInputError):
        mc(-5)
    with pytest.raises(InvalidInputError):
        scalar_product_correlation(X, Y, "exact")


def test_scalar_product_examples():
    assert scalar_product_correlation(X, X).mean == -1.0
    assert scalar_product_correlation(X, Y).mean == 0.0
    assert abs(scalar_product_correlation(X, D45).mean + math.sqrt(2) / 2) <= 1e-15


def test_scalar_product_modes_agree():
    rng = np.random.default_rng(4)
    for a, b in zip(_rand_dirs(rng, 50), _rand_dirs(rng, 50)):
        ex = scalar_product_correlation(a, b)
        est = scalar_product_correlation(a, b, mc(5000, 11))
        assert abs(ex.mean + ga.dot(a, b)) <= 1e-12
        assert abs(est.mean - ex.mean) <= 1e-12
        assert est.stderr == 0.0


def test_algebraic_examples():
    r = algebraic_correlation(X, Y, "oriented")
    assert (r.scalar_part, r.residual_bivector_norm) == (0.0, 0.0)
    r = algebraic_correlation(X, Y, "standard")
    # symbolic product gives -e12 for both orientations
    assert r.average == -ga.E12
    assert (r.scalar_part, r.residual_bivector_norm) == (0.0, 1.0)
    for conv in ("standard", "oriented"):
        r = algebraic_correlation(X, X, conv)
        assert (r.scalar_part, r.residual_bivector_norm) == (-1.0, 0.0)


def test_algebraic_properties_exact():
    rng = np.random.default_rng(5)
    for a, b in zip(_rand_dirs(rng, 300), _rand_dirs(rng, 300)):
        o = algebraic_correlation(a, b, "oriented")
        s = algebraic_correlation(a, b, "standard")
        assert abs(o.scalar_part + ga.dot(a, b)) <= 1e-12
        assert abs(s.scalar_part + ga.dot(a, b)) <= 1e-12
        assert o.residual_bivector_norm <= 1e-12
        assert abs(s.residual_bivector_norm - np.linalg.norm(ga.cross(a, b))) <= 1e-12
        assert o.scalar_part == o.average.coefficients[0]


def test_algebraic_rejects_unknown_convention():
    with pytest.raises(InvalidInputError):
        algebraic_correlation(X, Y, "handed")


def test_algebraic_mc_within_four_sigma():
    a, b = X, Y
    exact = algebraic_correlation(a, b, "oriented").average.coefficients
    hits = 0
    for seed in range(100):
        r = algebraic_correlation(a, b, "oriented", mc(2000, seed))
        # 1e-12 floor covers zero-variance components
        ok = np.all(np.abs(r.average.coefficients - exact) <= 4 * r.stderr + 1e-12)
        hits += bool(ok)
        assert r.stderr[6] > 0
    assert hits >= 99


def test_exact_correlation_formula():
    assert exact_correlation_formula("vector", X, X) == -1.0
    assert exact_correlation_formula("sign", X, Y) == -1.0
    assert exact_correlation_formula("bivector_scalar_part", X, Y) == 0.0
    with pytest.raises(InvalidInputError):
        exact_correlation_formula("qubit", X, Y)


def test_stderr_scaling():
    for seed in (0, 1, 2):
        assert 2 * 0.8 <= standard_error_ratio(20_000, seed) <= 2 * 1.2


def test_stderr_definition():
    # observable: raw sign; compare with numpy sample std / sqrt(n)
    n = 5000
    mean, se = mc_moments(lambda s: s.astype(float), n, 3, block=128)
    draws = kernels.counter_signs(3, 0, n).astype(float)
    assert abs(mean[0] - draws.mean()) <= 1e-15
    assert abs(se[0] - draws.std(ddof=1) / math.sqrt(n)) <= 1e-15


def test_single_sample_has_zero_stderr():
    est = scalar_product_correlation(X, Y, mc(1, 0))
    assert est.n == 1 and est.stderr == 0.0


@pytest.mark.parametrize("model", ["sign", "vector", "bivector"])
def test_results_independent_of_worker_count(model):
    corr = correlator(model, "oriented")
    a, b = X, D45
    ref = corr(a, b, MonteCarlo(50_000, 9, workers=1))
    for w in (2, 3, 8):
        assert corr(a, b, MonteCarlo(50_000, 9, workers=w)) == ref


def test_worker_independence_nondegenerate_observable():
    obs = lambda h: np.stack([h * 0.1, h * h * 0.3 + h], axis=1)
    ref = mc_moments(obs, 100_003, 4, workers=1, block=1000)
    for w in (2, 5):
        got = mc_moments(obs, 100_003, 4, workers=w, block=1000)
        assert np.array_equal(got[0], ref[0]) and np.array_equal(got[1], ref[1])


def test_correlator_factory_rejects_unknown():
    with pytest.raises(InvalidInputError):
        correlator("spin")
    with pytest.raises(InvalidInputError):
        correlator("bivector", "odd")
