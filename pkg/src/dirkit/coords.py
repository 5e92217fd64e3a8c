"""Coordinate model: directions, coordinate sets, coercion, conversions.

Conventions used across the whole package:

  - azimuth in degrees, [0, 360), 0 = front, counterclockwise (90 = left)
  - elevation in degrees, [-90, +90], -90 = below, +90 = zenith
  - frequency in Hz, >= 0; distance in meters, > 0
  - interaural-polar system: lateral in [-90, +90], positive toward the
    right ear; polar in [0, 360), 0 toward the front, +90 toward zenith
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels


class Continuity(NamedTuple):
    """Per-dimension continuity flags of a CoordinateSet."""

    direction: bool = False
    frequency: bool = False
    distance: bool = False


DISCRETE = Continuity(False, False, False)


@dataclass(frozen=True)
class Direction:
    """One direction duplet in the vertical-polar convention."""

    azimuth: float
    elevation: float

    def __post_init__(self):
        az = float(self.azimuth)
        el = float(self.elevation)
        if not (math.isfinite(az) and math.isfinite(el)):
            raise ValueError(f"direction ({az}, {el}) has non-finite components")
        if not -90.0 <= el <= 90.0:
            raise ValueError(f"elevation {el} outside [-90, +90]")
        object.__setattr__(self, "azimuth", az % 360.0)
        object.__setattr__(self, "elevation", el)

    def angle_to(self, other):
        """Great-circle angle to another direction, degrees in [0, 180]."""
        return float(
            great_circle_angle(
                self.azimuth, self.elevation, other.azimuth, other.elevation
            )
        )


def _as_direction(value):
    if isinstance(value, Direction):
        return value
    az, el = value
    return Direction(float(az), float(el))


def _float_pair(values, what):
    vals = [float(v) for v in values]
    if len(vals) != 2:
        raise ValueError(
            f"continuous {what} stores exactly two limits, got {len(vals)} values"
        )
    lo, hi = vals
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError(f"{what} limits ({lo}, {hi}) are not finite")
    if lo > hi:
        raise ValueError(f"{what} limits ({lo}, {hi}) are not ascending")
    return (lo, hi)


def _ascending(values, what, minimum, strict_min):
    vals = tuple(float(v) for v in values)
    for v in vals:
        if not math.isfinite(v):
            raise ValueError(f"{what} value {v} is not finite")
        if v < minimum or (strict_min and v == minimum):
            bound = f"> {minimum}" if strict_min else f">= {minimum}"
            raise ValueError(f"{what} value {v} violates {bound}")
    for a, b in zip(vals, vals[1:]):
        if a >= b:
            raise ValueError(f"{what} vector not strictly ascending at {a}, {b}")
    return vals


@dataclass(frozen=True)
class CoordinateSet:
    """Direction x frequency x distance coordinates, discrete or continuous.

    A dimension flagged continuous stores exactly two limit values instead
    of an explicit list; for the direction dimension those are elevation
    limits (azimuth is unrestricted). An empty distance input defaults to
    a single distance of 1 m.
    """

    directions: tuple = ()
    frequencies: tuple = ()
    distances: tuple = ()
    continuity: Continuity = DISCRETE

    def __post_init__(self):
        cont = Continuity(*(bool(flag) for flag in self.continuity))
        object.__setattr__(self, "continuity", cont)

        if cont.direction:
            dirs = _float_pair(self.directions, "direction (elevation)")
            if not (-90.0 <= dirs[0] and dirs[1] <= 90.0):
                raise ValueError(f"elevation limits {dirs} outside [-90, +90]")
        else:
            dirs = tuple(_as_direction(d) for d in self.directions)
            seen = set()
            for d in dirs:
                key = (d.azimuth, d.elevation)
                if key in seen:
                    raise ValueError(f"duplicate direction {key}")
                seen.add(key)
        object.__setattr__(self, "directions", dirs)

        if cont.frequency:
            freqs = _float_pair(self.frequencies, "frequency")
            if freqs[0] < 0:
                raise ValueError(f"frequency limit {freqs[0]} is negative")
        else:
            freqs = _ascending(self.frequencies, "frequency", 0.0, strict_min=False)
        object.__setattr__(self, "frequencies", freqs)

        dists = tuple(self.distances)
        if len(dists) == 0:
            if cont.distance:
                raise ValueError(
                    "continuous distance requires two limits, got an empty vector"
                )
            dists = (1.0,)
        elif cont.distance:
            dists = _float_pair(dists, "distance")
            if dists[0] <= 0:
                raise ValueError(f"distance limit {dists[0]} is not positive")
        else:
            dists = _ascending(dists, "distance", 0.0, strict_min=True)
        object.__setattr__(self, "distances", dists)

    @classmethod
    def _unchecked(cls, directions, frequencies, distances, continuity):
        """Build without validation. Coercion output may hold duplicates."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "directions", tuple(directions))
        object.__setattr__(obj, "frequencies", tuple(frequencies))
        object.__setattr__(obj, "distances", tuple(distances))
        object.__setattr__(obj, "continuity", Continuity(*continuity))
        return obj

    @property
    def is_discrete(self):
        return not any(self.continuity)

    @property
    def shape(self):
        """(D, F, R) cardinalities; defined for fully discrete sets only."""
        if not self.is_discrete:
            raise ValueError("shape is undefined for continuous coordinate sets")
        return (len(self.directions), len(self.frequencies), len(self.distances))

    @property
    def elevation_limits(self):
        if not self.continuity.direction:
            raise ValueError("elevation limits exist only on continuous direction sets")
        return self.directions

    @property
    def azimuth_array(self):
        if self.continuity.direction:
            raise ValueError("continuous direction set has no azimuth list")
        return np.array([d.azimuth for d in self.directions], dtype=np.float64)

    @property
    def elevation_array(self):
        if self.continuity.direction:
            raise ValueError("continuous direction set has no elevation list")
        return np.array([d.elevation for d in self.directions], dtype=np.float64)

    @property
    def frequency_array(self):
        return np.array(self.frequencies, dtype=np.float64)

    @property
    def distance_array(self):
        return np.array(self.distances, dtype=np.float64)


class CoercionResult(NamedTuple):
    coords: "CoordinateSet"
    changed: bool


def _coerce_directions(base, requested):
    if not requested.continuity.direction:
        req = requested.directions
        if len(req) == 0:
            return (), False
        if base.continuity.direction:
            lo, hi = base.elevation_limits
            out = tuple(
                Direction(d.azimuth, min(max(d.elevation, lo), hi)) for d in req
            )
        else:
            idx = kernels.nearest_direction(
                base.azimuth_array,
                base.elevation_array,
                requested.azimuth_array,
                requested.elevation_array,
            )
            out = tuple(base.directions[i] for i in idx)
        changed = any(a != b for a, b in zip(out, req))
        return out, changed

    req_lo, req_hi = requested.directions
    if base.continuity.direction:
        lo, hi = base.elevation_limits
        out = (min(max(req_lo, lo), hi), min(max(req_hi, lo), hi))
    else:
        # Requested elevation limits snap to the nearest stored elevations.
        els = base.elevation_array
        idx = kernels.nearest_value(els, np.array([req_lo, req_hi]))
        lo, hi = float(els[idx[0]]), float(els[idx[1]])
        out = (min(lo, hi), max(lo, hi))
    return out, out != (req_lo, req_hi)


def _coerce_values(base_vals, base_continuous, req_vals, req_continuous):
    req = tuple(float(v) for v in req_vals)
    if len(req) == 0:
        return (), False
    if base_continuous:
        lo, hi = base_vals
        out = tuple(min(max(v, lo), hi) for v in req)
    else:
        idx = kernels.nearest_value(np.array(base_vals), np.array(req))
        out = tuple(float(base_vals[i]) for i in idx)
        if req_continuous:
            out = (min(out), max(out))
    return out, out != req


def coerce(base, requested):
    """Snap `requested` onto `base`: nearest values for discrete dimensions
    of `base`, clamping into the limits for continuous ones.

    Total and idempotent; the result keeps `requested`'s continuity flags.
    The `changed` flag reports whether any value moved.
    """
    dirs, d_changed = _coerce_directions(base, requested)
    freqs, f_changed = _coerce_values(
        base.frequencies,
        base.continuity.frequency,
        requested.frequencies,
        requested.continuity.frequency,
    )
    dists, r_changed = _coerce_values(
        base.distances,
        base.continuity.distance,
        requested.distances,
        requested.continuity.distance,
    )
    coords = CoordinateSet._unchecked(dirs, freqs, dists, requested.continuity)
    return CoercionResult(coords, d_changed or f_changed or r_changed)


def discrete_read_indices(stored, requested):
    """Nearest-neighbor indices of `requested` within a fully discrete
    `stored` set, per dimension, plus the actual coordinates they land on.

    Returns (direction_idx, frequency_idx, distance_idx, actual_coords).
    Both sets must be fully discrete.
    """
    if not stored.is_discrete:
        raise ValueError("stored coordinates must be fully discrete")
    if not requested.is_discrete:
        raise ValueError("requested coordinates must be fully discrete")
    d_idx = kernels.nearest_direction(
        stored.azimuth_array,
        stored.elevation_array,
        requested.azimuth_array,
        requested.elevation_array,
    )
    f_idx = kernels.nearest_value(stored.frequency_array, requested.frequency_array)
    r_idx = kernels.nearest_value(stored.distance_array, requested.distance_array)
    actual = CoordinateSet._unchecked(
        tuple(stored.directions[i] for i in d_idx),
        tuple(stored.frequencies[i] for i in f_idx),
        tuple(stored.distances[i] for i in r_idx),
        DISCRETE,
    )
    return d_idx, f_idx, r_idx, actual


def expand_grid(cs):
    """Expand a fully discrete set into three (D, F, R) grids.

    Cell (d, f, r) of each grid holds that cell's direction (a structured
    array with azimuth/elevation fields), frequency, and distance.
    """
    if not cs.is_discrete:
        raise ValueError("cannot expand a coordinate set with continuous dimensions")
    shape = cs.shape
    direction_grid = np.zeros(shape, dtype=[("azimuth", "f8"), ("elevation", "f8")])
    direction_grid["azimuth"] = cs.azimuth_array[:, None, None]
    direction_grid["elevation"] = cs.elevation_array[:, None, None]
    frequency_grid = np.broadcast_to(cs.frequency_array[None, :, None], shape).copy()
    distance_grid = np.broadcast_to(cs.distance_array[None, None, :], shape).copy()
    return direction_grid, frequency_grid, distance_grid


_POLE_TOL = 1e-12


def _to_cartesian(azimuth_deg, elevation_deg):
    az = np.deg2rad(np.asarray(azimuth_deg, dtype=np.float64))
    el = np.deg2rad(np.asarray(elevation_deg, dtype=np.float64))
    return np.cos(el) * np.cos(az), np.cos(el) * np.sin(az), np.sin(el)


def spherical_to_interaural(azimuth, elevation):
    """Vertical-polar (azimuth, elevation) to interaural-polar (polar, lateral).

    Unit-sphere Cartesian conversion, axis swap (x, y, z) -> (x, z, -y),
    then back to angles. The swap puts the poles on the ear axis: zenith
    maps to polar +90, the left ear (90, 0) to lateral -90. At
    |lateral| = 90 the polar angle is undefined and set to 0.
    """
    x, y, z = _to_cartesian(azimuth, elevation)
    xr, yr, zr = x, z, -y
    lateral = np.degrees(np.arcsin(np.clip(zr, -1.0, 1.0)))
    polar = np.degrees(np.arctan2(yr, xr)) % 360.0
    polar = np.where(xr * xr + yr * yr < _POLE_TOL * _POLE_TOL, 0.0, polar)
    if np.isscalar(azimuth) and np.isscalar(elevation):
        return float(polar), float(lateral)
    return polar, lateral


def interaural_to_spherical(polar, lateral):
    """Inverse of spherical_to_interaural, axis swap (x, y, z) -> (x, -z, y)."""
    xr, yr, zr = _to_cartesian(polar, lateral)
    x, y, z = xr, -zr, yr
    elevation = np.degrees(np.arcsin(np.clip(z, -1.0, 1.0)))
    azimuth = np.degrees(np.arctan2(y, x)) % 360.0
    azimuth = np.where(x * x + y * y < _POLE_TOL * _POLE_TOL, 0.0, azimuth)
    if np.isscalar(polar) and np.isscalar(lateral):
        return float(azimuth), float(elevation)
    return azimuth, elevation


def great_circle_angle(azimuth_a, elevation_a, azimuth_b, elevation_b):
    """Central angle between two directions, degrees in [0, 180].

    Uses atan2 of the cross-product norm against the dot product, which
    stays accurate for nearly parallel and nearly antipodal pairs.
    """
    ax, ay, az = _to_cartesian(azimuth_a, elevation_a)
    bx, by, bz = _to_cartesian(azimuth_b, elevation_b)
    cx = ay * bz - az * by
    cy = az * bx - ax * bz
    cz = ax * by - ay * bx
    cross = np.sqrt(cx * cx + cy * cy + cz * cz)
    dot = ax * bx + ay * by + az * bz
    angle = np.degrees(np.arctan2(cross, dot))
    if all(np.isscalar(v) for v in (azimuth_a, elevation_a, azimuth_b, elevation_b)):
        return float(angle)
    return angle
