import os
import subprocess
import sys

import numpy as np
import pytest

from bellga import ga, kernels

needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba backend disabled")


def test_splitmix_reference_vector():
    # published SplitMix64 outputs for state 1234567
    outs = [kernels.splitmix64(1234567 + (i + 1) * kernels.GAMMA) for i in range(3)]
    assert outs == [6457827717110365317, 3203168211198807973, 9817491932198370423]


@pytest.mark.parametrize("seed", [0, 1, 7, 2**63, 2**64 - 1])
def test_numpy_signs_match_scalar_reference(seed):
    got = kernels.counter_signs_numpy(seed, 5, 40)
    ref = [kernels.sign_from_counter(seed, i) for i in range(5, 45)]
    assert got.tolist() == ref
    assert got.dtype == np.int8


@needs_numba
@pytest.mark.parametrize("seed", [0, 3, 2**64 - 1])
def test_numba_signs_match_numpy(seed):
    np.testing.assert_array_equal(kernels.counter_signs_numba(seed, 123, 10_000),
                                  kernels.counter_signs_numpy(seed, 123, 10_000))


def test_signs_are_counter_based():
    whole = kernels.counter_signs(9, 0, 1000)
    parts = np.concatenate([kernels.counter_signs(9, s, 100) for s in range(0, 1000, 100)])
    np.testing.assert_array_equal(whole, parts)


@needs_numba
def test_block_moments_backends_agree():
    rng = np.random.default_rng(0)
    vals = rng.normal(size=(5000, 3))
    shift = vals[0]
    np.testing.assert_allclose(kernels.block_moments_numba(vals, shift),
                               kernels.block_moments_numpy(vals, shift), rtol=1e-12, atol=1e-9)


def test_block_moments_of_constant_column_are_zero():
    vals = np.full((777, 2), -0.3)
    out = kernels.block_moments(vals, vals[0])
    assert np.all(out == 0.0)


@pytest.mark.parametrize("impl", ["numpy", pytest.param("numba", marks=needs_numba)])
def test_batch_product_matches_single_product(impl):
    fn = getattr(kernels, f"batch_geometric_product_{impl}")
    rng = np.random.default_rng(1)
    X, Y = rng.uniform(-1, 1, (50, 8)), rng.uniform(-1, 1, (50, 8))
    out = fn(X, Y, ga.PRODUCT_INDEX, ga.PRODUCT_SIGN)
    for r in range(50):
        ref = ga.geometric_product(ga.Multivector(X[r]), ga.Multivector(Y[r])).coefficients
        np.testing.assert_allclose(out[r], ref, atol=1e-14)


def test_env_flag_selects_numpy_backend():
    code = ("import bellga.kernels as k; "
            "print(k.BACKEND, k.counter_signs is k.counter_signs_numpy, "
            "k.counter_signs(0, 0, 10).tolist())")
    env = dict(os.environ, BELLGA_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split(" ", 2)
    assert out[0] == "numpy"
    assert out[1] == "True"
    assert out[2].strip() == str(kernels.counter_signs(0, 0, 10).tolist())
