import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellga import ga
from bellga.chsh import ChshSettings, chsh_value, max_deterministic_S, random_planar_settings
from bellga.correlators import correlator, mc
from bellga.errors import InvalidInputError
from bellga.extraction import (ExtractionMap, audit_bell_bound, axis_reference,
                               compare_correlators, component_parity, extract_sign,
                               orientation_sign, random_table_map, table_map)
from bellga.ga import Direction, Orientation, bivector_outcome
from bellga.models import ResponseTable

X, Y, Z = ga.X_AXIS, ga.Y_AXIS, ga.Z_AXIS
PLUS, MINUS = Orientation(1), Orientation(-1)


def _grid_dirs(grid):
    return [d for s in grid for d in (s.a, s.a_prime, s.b, s.b_prime)]


def test_orientation_sign_reduces_to_sign_model():
    m = orientation_sign()
    assert extract_sign(m, PLUS, X, 1) == 1
    assert extract_sign(m, PLUS, X, 2) == -1
    assert extract_sign(m, MINUS, Y, 1) == -1
    assert extract_sign(m, MINUS, Y, 2) == 1


def test_axis_reference_example():
    m = axis_reference(X)
    assert extract_sign(m, PLUS, X, 1) == 1
    assert extract_sign(m, MINUS, X, 1) == -1
    # zero projection: tie rule gives +1
    assert extract_sign(m, PLUS, Y, 1) == 1


def test_component_parity_matches_outcome_coefficients():
    m = component_parity(0)
    assert bivector_outcome(PLUS, X).value.coefficients[4] == 1.0
    assert extract_sign(m, PLUS, X, 1) == 1
    assert extract_sign(m, MINUS, X, 1) == -1
    rng = np.random.default_rng(0)
    for v in rng.normal(size=(50, 3)):
        a = Direction.normalized(v)
        for k in range(3):
            for mu in (PLUS, MINUS):
                c = bivector_outcome(mu, a).value.coefficients[4 + k]
                assert extract_sign(component_parity(k), mu, a, 1) == (1 if c >= 0 else -1)


def test_component_parity_tie_rule():
    assert extract_sign(component_parity(2), MINUS, X, 1) == 1


def test_table_map_lookup_and_errors():
    m = table_map([X, Y], [[1, -1], [-1, -1]])
    assert extract_sign(m, PLUS, Y, 1) == -1
    assert extract_sign(m, MINUS, X, 2) == 1
    # tolerant match within 1e-12
    assert extract_sign(m, PLUS, Direction(1.0, 1e-13, 0.0), 1) == 1
    with pytest.raises(InvalidInputError):
        extract_sign(m, PLUS, Z, 1)
    with pytest.raises(InvalidInputError):
        table_map([X, Y], [[1, 0], [1, 1]])
    with pytest.raises(InvalidInputError):
        table_map([X, Y], [[1, 1]])


def test_map_validation():
    with pytest.raises(InvalidInputError):
        ExtractionMap("psychic")
    with pytest.raises(InvalidInputError):
        ExtractionMap("axis_reference")
    with pytest.raises(InvalidInputError):
        component_parity(3)
    with pytest.raises(InvalidInputError):
        extract_sign(orientation_sign(), PLUS, X, 3)


def test_audit_orientation_sign_gives_two():
    rng = np.random.default_rng(1)
    rep = audit_bell_bound([orientation_sign()], random_planar_settings(rng, 30))
    assert rep.global_max == 2.0 and rep.bound_holds


def test_orientation_sign_audit_reproduces_sign_model():
    rng = np.random.default_rng(2)
    for s in random_planar_settings(rng, 10):
        rep = audit_bell_bound([orientation_sign()], [s])
        assert rep.global_max == abs(chsh_value(correlator("sign"), s).S)


def test_audit_axis_reference_bounded_by_deterministic_max():
    rng = np.random.default_rng(3)
    grid = random_planar_settings(rng, 100)
    rep = audit_bell_bound([axis_reference(X)], grid)
    hi = max(max_deterministic_S(s)[0] for s in grid)
    assert rep.global_max <= hi == 2


def test_audit_random_tables_reach_but_never_exceed_two():
    rng = np.random.default_rng(4)
    grid = random_planar_settings(rng, 1)
    dirs = _grid_dirs(grid)
    maps = [random_table_map(rng, dirs) for _ in range(1000)]
    rep = audit_bell_bound(maps, grid)
    assert rep.global_max == 2.0
    assert all(m.max_abs_S <= 2.0 for m in rep.per_map)
    assert rep.global_max == max(m.max_abs_S for m in rep.per_map)


def test_table_maps_realise_every_deterministic_strategy():
    """Each orientation atom of a table map is one of the 16 deterministic strategies."""
    s = ChshSettings.from_angles((0, 90, 45, 135))
    dirs = [s.a, s.a_prime, s.b, s.b_prime]
    seen = set()
    for signs in np.array(np.meshgrid(*[[1, -1]] * 4)).T.reshape(-1, 4):
        m = table_map(dirs, [signs, signs])
        t = ResponseTable((extract_sign(m, PLUS, s.a, 1), extract_sign(m, PLUS, s.a_prime, 1)),
                          (extract_sign(m, PLUS, s.b, 2), extract_sign(m, PLUS, s.b_prime, 2)))
        seen.add(t)
    assert len(seen) == 16


def test_audit_mc_mode_stays_bounded():
    rng = np.random.default_rng(5)
    grid = random_planar_settings(rng, 10)
    maps = [orientation_sign(), axis_reference(Y)] + [random_table_map(rng, _grid_dirs(grid))
                                                      for _ in range(20)]
    rep = audit_bell_bound(maps, grid, mc(10_000, 3))
    assert rep.global_max <= 2.0 and rep.bound_holds
    assert rep.mode == {"mode": "mc", "samples": 10_000, "seed": 3}


def test_audit_requires_inputs():
    with pytest.raises(InvalidInputError):
        audit_bell_bound([], [ChshSettings.from_angles((0, 1, 2, 3))])
    with pytest.raises(InvalidInputError):
        audit_bell_bound([orientation_sign()], [])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 360), min_size=4, max_size=4), st.integers(0, 2**32 - 1))
def test_any_map_obeys_bound(angles, seed):
    rng = np.random.default_rng(seed)
    s = ChshSettings.from_angles(angles)
    maps = [orientation_sign(), axis_reference(Direction.normalized(rng.normal(size=3))),
            component_parity(seed % 3), random_table_map(rng, _grid_dirs([s]))]
    assert audit_bell_bound(maps, [s]).global_max <= 2.0


def test_compare_correlators_examples():
    c = compare_correlators(X, Y)
    assert (c.vector, c.bivector_scalar, c.quantum) == (0.0, 0.0, -0.0)
    assert c.max_difference == 0.0
    c = compare_correlators(X, X)
    assert (c.vector, c.bivector_scalar, c.quantum) == (-1.0, -1.0, -1.0)
    c = compare_correlators(X, Direction.from_angle(60.0))
    for v in (c.vector, c.bivector_scalar, c.quantum):
        assert abs(v + 0.5) <= 1e-12
    assert c.max_difference <= 1e-12
    assert math.isclose(c.quantum, -math.cos(math.radians(60)), abs_tol=1e-15)
