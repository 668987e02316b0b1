"""Local +/-1 readouts of the bivector model, and an audit of their CHSH values.

A readout ``f(lambda, setting)`` sees only the shared orientation and its own
setting.  Side 1 reports ``f``; side 2 reports ``-f`` (the singlet
anti-correlation, as in the sign model).  With a two-atom hidden measure each
orientation fixes a deterministic strategy, so every readout's correlator is
a mixture of two deterministic strategies and ``|S| <= 2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .chsh import CLASSICAL_BOUND, SIGMA_MARGIN, ChshSettings
from .correlators import EXACT, Exact, Mode, MonteCarlo, algebraic_correlation, scalar_product_correlation
from .errors import InvalidInputError
from .ga import Direction, Orientation, dot
from .models import draw_signs

MapKind = Literal["orientation_sign", "axis_reference", "component_parity", "table"]
MATCH_TOL = 1e-12
COMPONENT_NAMES = ("e23", "e31", "e12")


def _sign(x: np.ndarray) -> np.ndarray:
    # zero maps to +1
    return np.where(x >= 0.0, 1, -1)


@dataclass(frozen=True, eq=False)
class ExtractionMap:
    kind: MapKind
    reference: Direction | None = None
    coefficient: int | None = None
    table_settings: tuple[Direction, ...] | None = None
    table_signs: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def __post_init__(self):
        if self.kind == "axis_reference":
            if not isinstance(self.reference, Direction):
                raise InvalidInputError("axis_reference needs a reference Direction")
        elif self.kind == "component_parity":
            if self.coefficient not in (0, 1, 2):
                raise InvalidInputError("component_parity coefficient is 0 (e23), 1 (e31) or 2 (e12)")
        elif self.kind == "table":
            if not self.table_settings or self.table_signs is None:
                raise InvalidInputError("table map needs settings and signs")
            signs = np.asarray(self.table_signs)
            if signs.shape != (2, len(self.table_settings)) or not np.all(np.abs(signs) == 1):
                raise InvalidInputError("table signs must be +/-1 with shape (2, n_settings)")
            decl = np.array([d.as_array() for d in self.table_settings])
            object.__setattr__(self, "_decl", decl)
            object.__setattr__(self, "_signs", signs.astype(np.int64))
            object.__setattr__(self, "_index", {d.as_tuple(): k for k, d in
                                                reversed(list(enumerate(self.table_settings)))})
        elif self.kind != "orientation_sign":
            raise InvalidInputError(f"unknown extraction map kind {self.kind!r}")

    def _table_index(self, dirs: np.ndarray) -> np.ndarray:
        idx = np.array([self._index.get(tuple(row), -1) for row in dirs.tolist()], dtype=np.int64)
        for r in np.flatnonzero(idx < 0):
            diff = np.max(np.abs(self._decl - dirs[r]), axis=1)
            k = int(np.argmin(diff))
            if diff[k] > MATCH_TOL:
                raise InvalidInputError("setting is outside the table map's declared grid")
            idx[r] = k
        return idx

    def sign_matrix(self, directions: np.ndarray) -> np.ndarray:
        """Side-1 readouts, row 0 for lambda = +1 and row 1 for lambda = -1."""
        dirs = np.asarray(directions, dtype=np.float64).reshape(-1, 3)
        if self.kind == "table":
            return self._signs[:, self._table_index(dirs)]
        return np.stack([self.values(1, dirs), self.values(-1, dirs)])

    def values(self, lam: int, directions: np.ndarray) -> np.ndarray:
        """Side-1 readouts for orientation ``lam`` at each row of ``directions``."""
        dirs = np.asarray(directions, dtype=np.float64).reshape(-1, 3)
        if self.kind == "orientation_sign":
            return np.full(dirs.shape[0], lam, dtype=np.int64)
        if self.kind == "axis_reference":
            return lam * _sign(dirs @ self.reference.as_array())
        if self.kind == "component_parity":
            # (lambda I) a has coefficient lambda * a_k on the k-th bivector slot
            return _sign(lam * dirs[:, self.coefficient])
        return self._signs[0 if lam == 1 else 1, self._table_index(dirs)]

    def describe(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind == "axis_reference":
            d["reference"] = list(self.reference.as_tuple())
        elif self.kind == "component_parity":
            d["coefficient"] = COMPONENT_NAMES[self.coefficient]
        elif self.kind == "table":
            d["n_settings"] = len(self.table_settings)
        return d


def orientation_sign() -> ExtractionMap:
    return ExtractionMap("orientation_sign")


def axis_reference(r: Direction) -> ExtractionMap:
    return ExtractionMap("axis_reference", reference=r)


def component_parity(coefficient: int) -> ExtractionMap:
    return ExtractionMap("component_parity", coefficient=coefficient)


def table_map(settings: Sequence[Direction], signs) -> ExtractionMap:
    signs = np.asarray(signs, dtype=np.int64)
    if signs.ndim != 2 or signs.shape[0] != 2:
        raise InvalidInputError("table signs need one row per orientation")
    return ExtractionMap("table", table_settings=tuple(settings),
                         table_signs=(tuple(int(s) for s in signs[0]), tuple(int(s) for s in signs[1])))


def random_table_map(rng: np.random.Generator, settings: Sequence[Direction]) -> ExtractionMap:
    return table_map(settings, rng.choice((-1, 1), size=(2, len(settings))))


def extract_sign(m: ExtractionMap, hidden: Orientation, setting: Direction, side: int) -> int:
    if side not in (1, 2):
        raise InvalidInputError("side must be 1 or 2")
    v = int(m.values(hidden.lam, setting.as_array())[0])
    return v if side == 1 else -v


@dataclass(frozen=True)
class MapAudit:
    map: ExtractionMap
    max_abs_S: float
    argmax: int
    stderr_at_max: float = 0.0

    def to_dict(self) -> dict:
        return {"map": self.map.describe(), "max_abs_S": self.max_abs_S,
                "argmax_grid_index": self.argmax, "stderr_at_max": self.stderr_at_max}


@dataclass(frozen=True)
class AuditReport:
    per_map: tuple[MapAudit, ...]
    global_max: float
    grid_size: int
    grid_description: str
    mode: dict
    bound_holds: bool

    def to_dict(self) -> dict:
        return {"global_max_abs_S": self.global_max, "classical_bound": CLASSICAL_BOUND,
                "bound_holds": self.bound_holds, "grid_size": self.grid_size,
                "grid": self.grid_description, "mode": self.mode,
                "maps": [m.to_dict() for m in self.per_map]}


# pair (side-1 column, side-2 column) in a, a', b, b' order; CHSH signs
_PAIRS = ((0, 2), (0, 3), (1, 2), (1, 3))
_SIGNS = np.array([1, -1, 1, 1])


def _orientation_S(m: ExtractionMap, G: np.ndarray, g: int) -> np.ndarray:
    """Integer pair products per orientation atom, grid point and CHSH pair: (2, g, 4)."""
    F = m.sign_matrix(G).reshape(2, g, 4)
    prods = np.empty((2, g, 4), dtype=np.int64)
    for p, (i, j) in enumerate(_PAIRS):
        prods[:, :, p] = F[:, :, i] * -F[:, :, j]
    return prods


def audit_bell_bound(maps: Sequence[ExtractionMap], settings_grid: Sequence[ChshSettings],
                     mode: Mode = EXACT, grid_description: str = "") -> AuditReport:
    """Largest |S| each readout reaches over ``settings_grid``."""
    if not maps or not settings_grid:
        raise InvalidInputError("audit needs at least one map and one grid point")
    g = len(settings_grid)
    G = np.array([[d.as_array() for d in (s.a, s.a_prime, s.b, s.b_prime)]
                  for s in settings_grid]).reshape(-1, 3)
    if isinstance(mode, MonteCarlo):
        h = draw_signs(mode.seed, 0, mode.n)
        n_plus = int(np.count_nonzero(h == 1))
        weights = np.array([n_plus, mode.n - n_plus], dtype=np.float64) / mode.n
    elif isinstance(mode, Exact):
        weights = None
    else:
        raise InvalidInputError(f"mode must be Exact or MonteCarlo, got {mode!r}")

    results = []
    margin = 0.0
    for m in maps:
        prods = _orientation_S(m, G, g)
        if weights is None:
            # integer arithmetic: S = (S_plus + S_minus) / 2
            S2 = (prods.sum(axis=0) * _SIGNS).sum(axis=1)
            absS = np.abs(S2) / 2.0
            k = int(np.argmax(absS))
            results.append(MapAudit(m, float(absS[k]), k))
        else:
            E = weights[0] * prods[0] + weights[1] * prods[1]
            absS = np.abs((E * _SIGNS).sum(axis=1))
            # per-pair values are +/-1: squared stderr = (1 - E^2) / (n - 1)
            var = np.maximum(1.0 - E * E, 0.0) / max(mode.n - 1, 1)
            se = np.sqrt(var.sum(axis=1))
            k = int(np.argmax(absS))
            results.append(MapAudit(m, float(absS[k]), k, float(se[k])))
            margin = max(margin, SIGMA_MARGIN * float(se[k]))
    global_max = max(r.max_abs_S for r in results)
    return AuditReport(tuple(results), global_max, g, grid_description, mode.describe(),
                       bool(global_max <= CLASSICAL_BOUND + margin))


@dataclass(frozen=True)
class CorrelatorComparison:
    vector: float
    bivector_scalar: float
    quantum: float

    @property
    def differences(self) -> dict:
        return {"vector-bivector": abs(self.vector - self.bivector_scalar),
                "vector-quantum": abs(self.vector - self.quantum),
                "bivector-quantum": abs(self.bivector_scalar - self.quantum)}

    @property
    def max_difference(self) -> float:
        return max(self.differences.values())


def compare_correlators(a: Direction, b: Direction) -> CorrelatorComparison:
    """Scalar-product correlator, bivector scalar part and -a.b side by side."""
    return CorrelatorComparison(scalar_product_correlation(a, b).mean,
                                algebraic_correlation(a, b, "oriented").scalar_part,
                                -dot(a, b))
