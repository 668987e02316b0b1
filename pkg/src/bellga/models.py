"""Hidden-variable models and deterministic local strategies.

Three models share one kind of hidden draw, a fair sign:

* sign model: outcomes ``(eps, -eps)`` whatever the settings;
* vector model: outcomes ``eps * a`` and ``-eps * b``;
* bivector model: outcomes ``(lambda I) a`` and ``(lambda I) b``.

Draws come from a counter-based generator, so sample ``i`` of stream
``seed`` is the same no matter how the samples are scheduled.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Union

import numpy as np

from . import kernels
from .errors import InvalidInputError, ResourceLimitError
from .ga import BivectorOutcome, Direction, Orientation, bivector_outcome

ENUMERATION_CAP = 1 << 20
SEED_MAX = (1 << 64) - 1


@dataclass(frozen=True)
class SignHidden:
    epsilon: int

    def __post_init__(self):
        if self.epsilon not in (1, -1) or isinstance(self.epsilon, bool):
            raise InvalidInputError(f"epsilon must be +1 or -1, got {self.epsilon!r}")
        object.__setattr__(self, "epsilon", int(self.epsilon))


HiddenSample = Union[SignHidden, Orientation]


@dataclass(frozen=True)
class VectorOutcomePair:
    side1: Direction
    side2: Direction


@dataclass(frozen=True)
class ResponseTable:
    """Deterministic local strategy: one fixed sign per setting per side."""

    side1_responses: tuple[int, ...]
    side2_responses: tuple[int, ...]

    def __post_init__(self):
        for side in (self.side1_responses, self.side2_responses):
            if not side or any(s not in (1, -1) for s in side):
                raise InvalidInputError("response tables hold non-empty lists of +1/-1")
        object.__setattr__(self, "side1_responses", tuple(int(s) for s in self.side1_responses))
        object.__setattr__(self, "side2_responses", tuple(int(s) for s in self.side2_responses))


def check_seed(seed: int) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise InvalidInputError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed <= SEED_MAX:
        raise InvalidInputError("seed must be a 64-bit unsigned integer")
    return seed


def draw_sign(seed: int, index: int) -> SignHidden:
    """Fair sign for sample ``index`` of stream ``seed``."""
    seed = check_seed(seed)
    if index < 0:
        raise InvalidInputError("sample index must be non-negative")
    return SignHidden(kernels.sign_from_counter(seed, int(index)))


def draw_signs(seed: int, start: int, count: int) -> np.ndarray:
    """Vectorised ``draw_sign`` for indices ``start .. start+count-1`` (int8)."""
    seed = check_seed(seed)
    if start < 0 or count < 0:
        raise InvalidInputError("start and count must be non-negative")
    return kernels.counter_signs(seed, int(start), int(count))


def sign_model_outcomes(h: SignHidden, a: Direction, b: Direction) -> tuple[int, int]:
    return h.epsilon, -h.epsilon


def sign_source(eps: np.ndarray, a: Direction, b: Direction) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised sign model: arrays of hidden signs to arrays of outcome pairs."""
    eps = np.asarray(eps, dtype=np.int64)
    return eps, -eps


def vector_model_outcomes(h: SignHidden, a: Direction, b: Direction) -> VectorOutcomePair:
    return VectorOutcomePair(a.scaled(h.epsilon), b.scaled(-h.epsilon))


def bivector_model_outcomes(h: Orientation, a: Direction,
                            b: Direction) -> tuple[BivectorOutcome, BivectorOutcome]:
    return bivector_outcome(h, a), bivector_outcome(h, b)


def enumerate_strategies(nA: int, nB: int, cap: int = ENUMERATION_CAP) -> Iterator[ResponseTable]:
    """Yield every deterministic response table for ``nA`` x ``nB`` settings."""
    if nA < 1 or nB < 1:
        raise InvalidInputError("each side needs at least one setting")
    if 2 ** (nA + nB) > cap:
        raise ResourceLimitError(f"2^{nA + nB} strategies exceed the enumeration cap {cap}")
    # validation above runs eagerly; only the walk is lazy
    return (ResponseTable(s[:nA], s[nA:]) for s in itertools.product((1, -1), repeat=nA + nB))
