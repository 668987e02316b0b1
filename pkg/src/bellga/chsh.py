"""CHSH combination, optimal planar settings, and the deterministic bound.

The combination is fixed as

    S = E(a, b) - E(a, b') + E(a', b) + E(a', b')

and every bound compares against ``|S|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .correlators import EXACT, CorrelationEstimate, Correlator, Exact, Mode
from .errors import InvalidInputError
from .ga import Direction, X_AXIS, Y_AXIS, dot
from .models import ResponseTable, enumerate_strategies

CLASSICAL_BOUND = 2.0
TSIRELSON = 2.0 * math.sqrt(2.0)
EXACT_SLACK = 1e-9
SIGMA_MARGIN = 4.0
PAIR_SIGNS = (1, -1, 1, 1)
PAIR_NAMES = ("E_ab", "E_ab'", "E_a'b", "E_a'b'")


@dataclass(frozen=True)
class ChshSettings:
    a: Direction
    a_prime: Direction
    b: Direction
    b_prime: Direction

    def __post_init__(self):
        for d in (self.a, self.a_prime, self.b, self.b_prime):
            if not isinstance(d, Direction):
                raise InvalidInputError("CHSH settings are four Directions")

    @classmethod
    def from_angles(cls, angles: Sequence[float], u: Direction = X_AXIS,
                    v: Direction = Y_AXIS) -> "ChshSettings":
        """Settings from four in-plane angles in degrees: a, a', b, b'."""
        if len(angles) != 4:
            raise InvalidInputError("need exactly four angles a, a', b, b'")
        return cls(*(Direction.from_angle(t, u, v) for t in angles))

    def pairs(self) -> tuple[tuple[Direction, Direction], ...]:
        return ((self.a, self.b), (self.a, self.b_prime),
                (self.a_prime, self.b), (self.a_prime, self.b_prime))

    def to_dict(self) -> dict:
        return {"a": list(self.a.as_tuple()), "a_prime": list(self.a_prime.as_tuple()),
                "b": list(self.b.as_tuple()), "b_prime": list(self.b_prime.as_tuple())}


@dataclass(frozen=True)
class ChshResult:
    E_ab: CorrelationEstimate
    E_abp: CorrelationEstimate
    E_apb: CorrelationEstimate
    E_apbp: CorrelationEstimate
    S: float
    S_stderr: float
    violates_bell: bool
    classical_bound: float = CLASSICAL_BOUND
    tsirelson: float = TSIRELSON

    @property
    def correlations(self) -> tuple[CorrelationEstimate, ...]:
        return (self.E_ab, self.E_abp, self.E_apb, self.E_apbp)

    def to_dict(self) -> dict:
        return {
            "correlations": {name: e.to_dict() for name, e in zip(PAIR_NAMES, self.correlations)},
            "S": self.S,
            "S_stderr": self.S_stderr,
            "classical_bound": self.classical_bound,
            "tsirelson": self.tsirelson,
            "violates_bell": self.violates_bell,
        }


def _as_estimate(value) -> CorrelationEstimate:
    if isinstance(value, CorrelationEstimate):
        return value
    return CorrelationEstimate(float(value))


def combine(E: Sequence[float]) -> float:
    return E[0] - E[1] + E[2] + E[3]


def chsh_value(correlator: Correlator, settings: ChshSettings, mode: Mode = EXACT) -> ChshResult:
    """Evaluate the four pair correlations and combine them.

    ``correlator(a, b, mode)`` may return a ``CorrelationEstimate`` or a
    plain number (treated as exact).
    """
    est = [_as_estimate(correlator(x, y, mode)) for x, y in settings.pairs()]
    S = combine([e.mean for e in est])
    S_stderr = math.sqrt(sum(e.stderr ** 2 for e in est))
    if isinstance(mode, Exact) or all(e.exact for e in est):
        margin = EXACT_SLACK
    else:
        margin = SIGMA_MARGIN * S_stderr
    violates = abs(S) > CLASSICAL_BOUND + margin
    return ChshResult(*est, S=S, S_stderr=S_stderr, violates_bell=violates)


def optimal_planar_settings(u: Direction = X_AXIS, v: Direction = Y_AXIS) -> ChshSettings:
    """Settings at 0, 90, 45, 135 degrees, where E = -a.b reaches |S| = 2 sqrt 2."""
    return ChshSettings.from_angles((0.0, 90.0, 45.0, 135.0), u, v)


def deterministic_S(table: ResponseTable) -> int:
    """S of a deterministic 2x2 table; E for a pair is the product of the two signs."""
    A, B = table.side1_responses, table.side2_responses
    if len(A) != 2 or len(B) != 2:
        raise InvalidInputError("CHSH needs a 2x2 response table")
    return A[0] * B[0] - A[0] * B[1] + A[1] * B[0] + A[1] * B[1]


def brute_force_table(settings: ChshSettings) -> list[tuple[ResponseTable, int]]:
    """All 16 deterministic strategies with their S values.

    A deterministic strategy fixes the outcome per setting, so its S does not
    depend on the directions in ``settings``.
    """
    return [(t, deterministic_S(t)) for t in enumerate_strategies(2, 2)]


def max_deterministic_S(settings: ChshSettings) -> tuple[int, ResponseTable]:
    best = max(brute_force_table(settings), key=lambda row: row[1])
    return best[1], best[0]


def min_deterministic_S(settings: ChshSettings) -> tuple[int, ResponseTable]:
    worst = min(brute_force_table(settings), key=lambda row: row[1])
    return worst[1], worst[0]


@dataclass(frozen=True)
class ScanPoint:
    theta_deg: float
    estimate: CorrelationEstimate


def correlation_scan(correlator: Correlator, plane: tuple[Direction, Direction], resolution: int,
                     mode: Mode = EXACT) -> list[ScanPoint]:
    """E(u, b(theta)) at ``resolution`` evenly spaced angles in [0, 180] degrees.

    ``b(theta) = cos(theta) u + sin(theta) v`` for the orthonormal pair
    ``plane = (u, v)``.
    """
    if isinstance(resolution, bool) or int(resolution) != resolution or resolution < 2:
        raise InvalidInputError("scan resolution must be an integer >= 2")
    u, v = plane
    if abs(dot(u, v)) > 1e-12:
        raise InvalidInputError("scan plane vectors must be orthonormal")
    out = []
    for theta in np.linspace(0.0, 180.0, int(resolution)):
        b = Direction.from_angle(float(theta), u, v)
        out.append(ScanPoint(float(theta), _as_estimate(correlator(u, b, mode))))
    return out


def random_planar_settings(rng: np.random.Generator, count: int,
                           u: Direction = X_AXIS, v: Direction = Y_AXIS) -> list[ChshSettings]:
    angles = rng.uniform(0.0, 360.0, size=(count, 4))
    return [ChshSettings.from_angles(row, u, v) for row in angles]
