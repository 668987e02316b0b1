"""Correlation functionals of the three models, exact and Monte Carlo.

Exact mode sums the two atoms of the hidden measure with weight 1/2.
Monte Carlo mode draws hidden signs from the counter-based stream and
reduces them block by block: each fixed-size block is summed on its own
(compensated on the numba backend), then the block partials are combined
along a fixed pairwise tree.  Block boundaries never depend on ``workers``,
so a run is bit-reproducible for any worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from . import kernels
from .errors import ContractViolation, InvalidInputError
from .ga import (CONVENTIONS, PRODUCT_INDEX, PRODUCT_SIGN, Convention, Direction, Multivector,
                 Orientation, bivector_outcome, dot, outcome_product)
from .models import check_seed, draw_signs, sign_source

BLOCK = 8192
ATOMS = (1, -1)


@dataclass(frozen=True)
class Exact:
    def describe(self) -> dict:
        return {"mode": "exact"}


@dataclass(frozen=True)
class MonteCarlo:
    n: int
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise InvalidInputError(f"Monte Carlo mode needs n >= 1, got {self.n!r}")
        if self.workers < 1:
            raise InvalidInputError("workers must be >= 1")
        object.__setattr__(self, "seed", check_seed(self.seed))

    def describe(self) -> dict:
        return {"mode": "mc", "samples": int(self.n), "seed": int(self.seed)}


Mode = Exact | MonteCarlo
EXACT = Exact()


def mc(n: int, seed: int = 0, workers: int = 1) -> MonteCarlo:
    return MonteCarlo(n, seed, workers)


@dataclass(frozen=True)
class CorrelationEstimate:
    mean: float
    stderr: float = 0.0
    n: int = 0
    exact: bool = True

    def to_dict(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "n": self.n, "exact": self.exact}


@dataclass(frozen=True)
class AlgebraicCorrelation:
    """Hidden-variable average of the outcome product, kept as a multivector.

    ``scalar_part`` is the headline correlation; ``residual_bivector_norm``
    is what is left in grade 2 after averaging.
    """

    average: Multivector
    scalar_part: float
    residual_bivector_norm: float
    stderr: np.ndarray = field(default_factory=lambda: np.zeros(8))
    n: int = 0
    exact: bool = True

    @property
    def estimate(self) -> CorrelationEstimate:
        return CorrelationEstimate(self.scalar_part, float(self.stderr[0]), self.n, self.exact)


# ------------------------------------------------------------ MC reduction

def _tree_sum(parts: np.ndarray) -> np.ndarray:
    """Pairwise sum over axis 0 in a fixed order."""
    while parts.shape[0] > 1:
        if parts.shape[0] % 2:
            parts = np.concatenate([parts, np.zeros_like(parts[:1])])
        parts = parts[0::2] + parts[1::2]
    return parts[0]


def mc_moments(observable: Callable[[np.ndarray], np.ndarray], n: int, seed: int,
               workers: int = 1, block: int = BLOCK) -> tuple[np.ndarray, np.ndarray]:
    """Mean and standard error of ``observable`` over ``n`` hidden draws.

    ``observable`` maps an int8 array of hidden signs to per-sample values of
    shape ``(m,)`` or ``(m, k)``.  Returns arrays of shape ``(k,)``.
    """
    if n < 1:
        raise InvalidInputError("Monte Carlo needs at least one sample")
    first = np.asarray(observable(draw_signs(seed, 0, 1)), dtype=np.float64)
    shift = first.reshape(1, -1)[0]
    k = shift.size
    nblocks = -(-n // block)
    partials = np.empty((nblocks, 2, k))

    def work(bi: int) -> None:
        start = bi * block
        count = min(block, n - start)
        vals = np.asarray(observable(kernels.counter_signs(seed, start, count)), dtype=np.float64)
        partials[bi] = kernels.block_moments(vals.reshape(count, k), shift)

    if workers > 1 and nblocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(work, range(nblocks)))
    else:
        for bi in range(nblocks):
            work(bi)

    s1, s2 = _tree_sum(partials)
    mean = shift + s1 / n
    if n > 1:
        var = np.maximum(s2 - s1 * s1 / n, 0.0) / (n - 1)
        stderr = np.sqrt(var / n)
    else:
        # a single draw carries no spread information
        stderr = np.zeros(k)
    return mean, stderr


def _check_mode(mode) -> None:
    if not isinstance(mode, (Exact, MonteCarlo)):
        raise InvalidInputError(f"mode must be Exact or MonteCarlo, got {mode!r}")


def _check_signs(*arrays: np.ndarray) -> None:
    for arr in arrays:
        if not np.all(np.abs(np.asarray(arr)) == 1):
            raise ContractViolation("sign source produced a value other than +1/-1")


# ------------------------------------------------------------ correlators

SignSource = Callable[[np.ndarray, Direction, Direction], tuple[np.ndarray, np.ndarray]]


def sign_correlation(source: SignSource, a: Direction, b: Direction,
                     mode: Mode = EXACT) -> CorrelationEstimate:
    """E(a, b) for a source of +/-1 outcome pairs.

    ``source(eps, a, b)`` receives an array of hidden signs and returns the
    two arrays of outcomes.
    """
    _check_mode(mode)
    if isinstance(mode, Exact):
        A, B = source(np.array(ATOMS, dtype=np.int8), a, b)
        _check_signs(A, B)
        return CorrelationEstimate(0.5 * float(A[0] * B[0]) + 0.5 * float(A[1] * B[1]))

    def observable(h):
        A, B = source(h, a, b)
        _check_signs(A, B)
        return np.asarray(A, dtype=np.float64) * np.asarray(B, dtype=np.float64)

    mean, se = mc_moments(observable, mode.n, mode.seed, mode.workers)
    return CorrelationEstimate(float(mean[0]), float(se[0]), mode.n, False)


def _scalar_products(eps: np.ndarray, a: Direction, b: Direction) -> np.ndarray:
    e = np.asarray(eps, dtype=np.float64)
    s1 = e[:, None] * a.as_array()
    s2 = -e[:, None] * b.as_array()
    return s1[:, 0] * s2[:, 0] + s1[:, 1] * s2[:, 1] + s1[:, 2] * s2[:, 2]


def scalar_product_correlation(a: Direction, b: Direction, mode: Mode = EXACT) -> CorrelationEstimate:
    """Average of the scalar product (eps1 a).(eps2 b) with eps2 = -eps1."""
    _check_mode(mode)
    if isinstance(mode, Exact):
        v = _scalar_products(np.array(ATOMS), a, b)
        return CorrelationEstimate(0.5 * float(v[0]) + 0.5 * float(v[1]))
    mean, se = mc_moments(lambda h: _scalar_products(h, a, b), mode.n, mode.seed, mode.workers)
    return CorrelationEstimate(float(mean[0]), float(se[0]), mode.n, False)


def _outcome_products(lam: np.ndarray, a: Direction, b: Direction, convention: str) -> np.ndarray:
    lam = np.asarray(lam, dtype=np.float64)[:, None]
    A = lam * bivector_outcome(Orientation(1), a).value.coefficients
    B = lam * bivector_outcome(Orientation(1), b).value.coefficients
    P = kernels.batch_geometric_product(A, B, PRODUCT_INDEX, PRODUCT_SIGN)
    if convention == "oriented":
        P[:, 4:7] *= lam
    return P


def _algebraic(avg: np.ndarray, stderr: np.ndarray, n: int, exact: bool) -> AlgebraicCorrelation:
    return AlgebraicCorrelation(Multivector(avg), float(avg[0]),
                                float(np.linalg.norm(avg[4:7])), stderr, n, exact)


def algebraic_correlation(a: Direction, b: Direction, convention: Convention = "oriented",
                          mode: Mode = EXACT) -> AlgebraicCorrelation:
    """Hidden-variable average of the bivector model's outcome product."""
    _check_mode(mode)
    if convention not in CONVENTIONS:
        raise InvalidInputError(f"unknown product convention {convention!r}")
    if isinstance(mode, Exact):
        total = np.zeros(8)
        for lam in ATOMS:
            mu = Orientation(lam)
            P = outcome_product(bivector_outcome(mu, a), bivector_outcome(mu, b), a, b, mu, convention)
            total += 0.5 * P.coefficients
        return _algebraic(total, np.zeros(8), 0, True)
    mean, se = mc_moments(lambda h: _outcome_products(h, a, b, convention),
                          mode.n, mode.seed, mode.workers)
    return _algebraic(mean, se, mode.n, False)


MODEL_KINDS = ("sign", "vector", "bivector_scalar_part")


def exact_correlation_formula(model_kind: str, a: Direction, b: Direction) -> float:
    """Closed-form E(a, b): -1 for the sign model, -a.b otherwise."""
    if model_kind == "sign":
        return -1.0
    if model_kind in ("vector", "bivector_scalar_part"):
        return -dot(a, b)
    raise InvalidInputError(f"unknown model kind {model_kind!r}; use one of {MODEL_KINDS}")


Correlator = Callable[[Direction, Direction, Mode], CorrelationEstimate]
MODELS = ("sign", "vector", "bivector")


def correlator(model: Literal["sign", "vector", "bivector"],
               convention: Convention = "oriented") -> Correlator:
    """Correlator callable ``(a, b, mode) -> CorrelationEstimate`` for a model."""
    if model == "sign":
        return lambda a, b, mode=EXACT: sign_correlation(sign_source, a, b, mode)
    if model == "vector":
        return scalar_product_correlation
    if model == "bivector":
        if convention not in CONVENTIONS:
            raise InvalidInputError(f"unknown product convention {convention!r}")
        return lambda a, b, mode=EXACT: algebraic_correlation(a, b, convention, mode).estimate
    raise InvalidInputError(f"unknown model {model!r}; use one of {MODELS}")


def formula_correlator(model_kind: str) -> Correlator:
    def corr(a, b, mode=EXACT):
        return CorrelationEstimate(exact_correlation_formula(model_kind, a, b))
    return corr


def standard_error_ratio(n: int, seed: int = 0) -> float:
    """stderr(n) / stderr(4n) for the raw hidden sign, a zero-mean observable."""
    se = [mc_moments(lambda h: h.astype(np.float64), m, seed)[1][0] for m in (n, 4 * n)]
    return float(se[0] / se[1]) if se[1] > 0 else math.inf
