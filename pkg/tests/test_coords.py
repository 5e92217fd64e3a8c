"""Coordinate model: validation, coercion, conversion, grids."""

import numpy as np
import pytest

from dirkit import (
    Continuity,
    CoordinateSet,
    Direction,
    coerce,
    expand_grid,
    great_circle_angle,
    interaural_to_spherical,
    spherical_to_interaural,
)

SEED = 20240811


# --------------------------------------------------------------------------
# Direction
# --------------------------------------------------------------------------

def test_azimuth_wraps_into_range():
    assert Direction(360.0, 0.0).azimuth == 0.0
    assert Direction(-90.0, 0.0).azimuth == 270.0
    assert Direction(725.0, 0.0).azimuth == 5.0


@pytest.mark.parametrize("elevation", [-90.0001, 90.0001, 180.0])
def test_elevation_out_of_range_rejected(elevation):
    with pytest.raises(ValueError):
        Direction(0.0, elevation)


@pytest.mark.parametrize("bad", [float("nan"), float("inf")])
def test_non_finite_direction_rejected(bad):
    with pytest.raises(ValueError):
        Direction(bad, 0.0)
    with pytest.raises(ValueError):
        Direction(0.0, bad)


# --------------------------------------------------------------------------
# CoordinateSet construction
# --------------------------------------------------------------------------

def test_empty_distances_default_to_one_meter():
    cs = CoordinateSet(directions=[(0, 0)], frequencies=(1000.0,), distances=())
    assert cs.distances == (1.0,)
    assert not cs.continuity.distance


def test_continuous_dimension_stores_two_limits():
    cs = CoordinateSet(
        directions=[(0, 0)],
        frequencies=(20.0, 20000.0),
        continuity=Continuity(frequency=True),
    )
    assert cs.frequencies == (20.0, 20000.0)
    with pytest.raises(ValueError):
        CoordinateSet(
            directions=[(0, 0)],
            frequencies=(20.0, 200.0, 20000.0),
            continuity=Continuity(frequency=True),
        )


def test_direction_continuity_stores_elevation_limits():
    cs = CoordinateSet(
        directions=(-40.0, 90.0),
        frequencies=(100.0,),
        continuity=Continuity(direction=True),
    )
    assert cs.elevation_limits == (-40.0, 90.0)
    with pytest.raises(ValueError):
        CoordinateSet(
            directions=(-100.0, 90.0),
            frequencies=(100.0,),
            continuity=Continuity(direction=True),
        )


@pytest.mark.parametrize(
    "freqs", [(100.0, 100.0), (200.0, 100.0), (-1.0, 100.0)]
)
def test_bad_discrete_frequency_vectors_rejected(freqs):
    with pytest.raises(ValueError):
        CoordinateSet(directions=[(0, 0)], frequencies=freqs)


def test_duplicate_directions_rejected():
    with pytest.raises(ValueError):
        CoordinateSet(directions=[(10, 0), (370, 0)], frequencies=(100.0,))


def test_non_positive_distances_rejected():
    with pytest.raises(ValueError):
        CoordinateSet(directions=[(0, 0)], frequencies=(100.0,), distances=(0.0,))


# --------------------------------------------------------------------------
# coercion
# --------------------------------------------------------------------------

def _freq_request(values):
    return CoordinateSet(directions=[(0, 0)], frequencies=values)


def test_nearest_frequency_snap():
    base = _freq_request((900.0, 1013.0, 1100.0))
    result = coerce(base, _freq_request((1000.0,)))
    assert result.coords.frequencies == (1013.0,)
    assert result.changed


def test_value_already_in_base_is_unchanged():
    base = _freq_request((900.0, 1013.0, 1100.0))
    result = coerce(base, _freq_request((1013.0,)))
    assert result.coords.frequencies == (1013.0,)
    assert not result.changed


def test_clamp_into_continuous_elevation_limits():
    base = CoordinateSet(
        directions=(-40.0, 90.0),
        frequencies=(100.0,),
        continuity=Continuity(direction=True),
    )
    requested = CoordinateSet(directions=[(10.0, -60.0)], frequencies=(100.0,))
    result = coerce(base, requested)
    assert result.coords.directions == (Direction(10.0, -40.0),)
    assert result.changed
    assert result.coords.continuity == requested.continuity


def test_direction_snap_by_great_circle():
    base = CoordinateSet(directions=[(0, 0), (90, 0)], frequencies=(100.0,))
    snapped = coerce(
        base, CoordinateSet(directions=[(50.0, 0.0), (40.0, 0.0)], frequencies=(100.0,))
    ).coords
    assert snapped.directions == (Direction(90, 0), Direction(0, 0))


def test_direction_snap_matches_exhaustive_search():
    rng = np.random.default_rng(SEED)
    base_dirs = [
        (az, el)
        for az, el in zip(rng.uniform(0, 360, 40), rng.uniform(-90, 90, 40))
    ]
    base = CoordinateSet(directions=base_dirs, frequencies=(100.0,))
    req_dirs = [
        (az, el)
        for az, el in zip(rng.uniform(0, 360, 60), rng.uniform(-90, 90, 60))
    ]
    requested = CoordinateSet(directions=req_dirs, frequencies=(100.0,))
    snapped = coerce(base, requested).coords

    for req, got in zip(requested.directions, snapped.directions):
        angles = [
            great_circle_angle(req.azimuth, req.elevation, b.azimuth, b.elevation)
            for b in base.directions
        ]
        best = base.directions[int(np.argmin(angles))]
        assert got == best


def test_coercion_idempotent_and_member_of_base():
    rng = np.random.default_rng(SEED + 1)
    base = CoordinateSet(
        directions=[(float(a), float(e)) for a, e in zip(rng.uniform(0, 360, 8), rng.uniform(-90, 90, 8))],
        frequencies=tuple(np.sort(rng.uniform(0, 20000, 12))),
        distances=tuple(np.sort(rng.uniform(0.2, 3.0, 3))),
    )
    requested = CoordinateSet(
        directions=[(float(a), float(e)) for a, e in zip(rng.uniform(0, 360, 5), rng.uniform(-90, 90, 5))],
        frequencies=tuple(np.sort(rng.uniform(0, 30000, 7))),
        distances=(0.01, 5.0),
    )
    once = coerce(base, requested).coords
    twice = coerce(base, once).coords
    assert once.directions == twice.directions
    assert once.frequencies == twice.frequencies
    assert once.distances == twice.distances
    assert set(once.frequencies) <= set(base.frequencies)
    assert set(once.distances) <= set(base.distances)
    assert set(once.directions) <= set(base.directions)


def test_coercion_keeps_requested_flags_and_may_duplicate():
    base = _freq_request((1000.0, 2000.0))
    requested = CoordinateSet(
        directions=[(0, 0)],
        frequencies=(950.0, 1050.0),
        continuity=Continuity(frequency=True),
    )
    result = coerce(base, requested)
    assert result.coords.continuity.frequency
    assert result.coords.frequencies == (1000.0, 1000.0)


# --------------------------------------------------------------------------
# grid expansion
# --------------------------------------------------------------------------

def test_expand_grid_shapes_and_content():
    cs = CoordinateSet(
        directions=[(0, 0), (90, 10)],
        frequencies=(100.0, 200.0, 300.0),
        distances=(1.0,),
    )
    dgrid, fgrid, rgrid = expand_grid(cs)
    assert dgrid.shape == fgrid.shape == rgrid.shape == (2, 3, 1)
    assert dgrid["azimuth"][1, 2, 0] == 90.0
    assert dgrid["elevation"][1, 2, 0] == 10.0
    assert fgrid[0, 1, 0] == 200.0
    assert np.all(rgrid == 1.0)
    # frequency constant along direction and distance axes
    assert np.all(fgrid == fgrid[0:1, :, 0:1])


def test_expand_grid_single_point():
    cs = CoordinateSet(directions=[(10, 20)], frequencies=(500.0,), distances=(2.0,))
    dgrid, fgrid, rgrid = expand_grid(cs)
    assert dgrid.shape == (1, 1, 1)
    assert fgrid[0, 0, 0] == 500.0 and rgrid[0, 0, 0] == 2.0


def test_expand_grid_rejects_continuous():
    cs = CoordinateSet(
        directions=[(0, 0)],
        frequencies=(20.0, 20000.0),
        continuity=Continuity(frequency=True),
    )
    with pytest.raises(ValueError):
        expand_grid(cs)


# --------------------------------------------------------------------------
# vertical-polar <-> interaural-polar, oracle = explicit rotation matrices
# --------------------------------------------------------------------------

ROT_FORWARD = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]])


def _unit(azimuth, elevation):
    az, el = np.radians(azimuth), np.radians(elevation)
    return np.array([np.cos(el) * np.cos(az), np.cos(el) * np.sin(az), np.sin(el)])


def _oracle_forward(azimuth, elevation):
    w = ROT_FORWARD @ _unit(azimuth, elevation)
    assert abs(np.linalg.norm(w) - 1.0) < 1e-12
    lateral = np.degrees(np.arcsin(np.clip(w[2], -1, 1)))
    if w[0] ** 2 + w[1] ** 2 < 1e-24:
        return 0.0, lateral
    return np.degrees(np.arctan2(w[1], w[0])) % 360.0, lateral


def _oracle_inverse(polar, lateral):
    w = ROT_FORWARD.T @ _unit(polar, lateral)
    assert abs(np.linalg.norm(w) - 1.0) < 1e-12
    elevation = np.degrees(np.arcsin(np.clip(w[2], -1, 1)))
    if w[0] ** 2 + w[1] ** 2 < 1e-24:
        return 0.0, elevation
    return np.degrees(np.arctan2(w[1], w[0])) % 360.0, elevation


@pytest.mark.parametrize(
    "azimuth,elevation,expected",
    [
        (0.0, 0.0, (0.0, 0.0)),
        (0.0, 90.0, (90.0, 0.0)),
        (90.0, 0.0, (0.0, -90.0)),
        (270.0, 0.0, (0.0, 90.0)),
        (180.0, 0.0, (180.0, 0.0)),
    ],
)
def test_forward_conversion_fixed_points(azimuth, elevation, expected):
    polar, lateral = spherical_to_interaural(azimuth, elevation)
    assert polar == pytest.approx(expected[0], abs=1e-12)
    assert lateral == pytest.approx(expected[1], abs=1e-12)


@pytest.mark.parametrize(
    "polar,lateral,expected",
    [
        (0.0, 0.0, (0.0, 0.0)),
        (90.0, 0.0, (0.0, 90.0)),
    ],
)
def test_inverse_conversion_fixed_points(polar, lateral, expected):
    azimuth, elevation = interaural_to_spherical(polar, lateral)
    assert azimuth == pytest.approx(expected[0], abs=1e-12)
    assert elevation == pytest.approx(expected[1], abs=1e-12)


def test_conversions_match_matrix_oracle():
    rng = np.random.default_rng(SEED + 2)
    azimuths = rng.uniform(0, 360, 300)
    elevations = np.degrees(np.arcsin(rng.uniform(-1, 1, 300)))
    for az, el in zip(azimuths, elevations):
        polar, lateral = spherical_to_interaural(az, el)
        o_polar, o_lateral = _oracle_forward(az, el)
        assert polar == pytest.approx(o_polar, abs=1e-9)
        assert lateral == pytest.approx(o_lateral, abs=1e-9)
        back_az, back_el = interaural_to_spherical(polar, lateral)
        ob_az, ob_el = _oracle_inverse(polar, lateral)
        assert back_az == pytest.approx(ob_az, abs=1e-9)
        assert back_el == pytest.approx(ob_el, abs=1e-9)


def test_round_trip_identity_away_from_ear_axis():
    polar, lateral = spherical_to_interaural(123.4, -37.2)
    azimuth, elevation = interaural_to_spherical(polar, lateral)
    assert azimuth == pytest.approx(123.4, abs=1e-9)
    assert elevation == pytest.approx(-37.2, abs=1e-9)


def test_ear_axis_pole_returns_polar_zero():
    for azimuth in (90.0, 270.0):
        polar, lateral = spherical_to_interaural(azimuth, 0.0)
        assert polar == 0.0
        assert abs(lateral) == pytest.approx(90.0, abs=1e-12)


def test_vectorized_conversion_matches_scalar():
    azimuths = np.array([0.0, 30.0, 250.0])
    elevations = np.array([0.0, -45.0, 80.0])
    polar, lateral = spherical_to_interaural(azimuths, elevations)
    for i in range(3):
        p, l = spherical_to_interaural(float(azimuths[i]), float(elevations[i]))
        assert polar[i] == pytest.approx(p, abs=1e-12)
        assert lateral[i] == pytest.approx(l, abs=1e-12)


# --------------------------------------------------------------------------
# great-circle angle
# --------------------------------------------------------------------------

@pytest.mark.parametrize(
    "a,b,expected",
    [
        (((40, 10)), ((40, 10)), 0.0),
        (((0, 0)), ((180, 0)), 180.0),
        (((0, 0)), ((0, 90)), 90.0),
    ],
)
def test_great_circle_fixed_values(a, b, expected):
    assert great_circle_angle(a[0], a[1], b[0], b[1]) == pytest.approx(
        expected, abs=1e-12
    )


def test_great_circle_symmetric_and_triangle_inequality():
    rng = np.random.default_rng(SEED + 3)
    for _ in range(200):
        az = rng.uniform(0, 360, 3)
        el = np.degrees(np.arcsin(rng.uniform(-1, 1, 3)))
        ab = great_circle_angle(az[0], el[0], az[1], el[1])
        ba = great_circle_angle(az[1], el[1], az[0], el[0])
        bc = great_circle_angle(az[1], el[1], az[2], el[2])
        ac = great_circle_angle(az[0], el[0], az[2], el[2])
        assert ab == pytest.approx(ba, abs=1e-12)
        assert ac <= ab + bc + 1e-9
