"""Spectrum-series and balloon-grid sampling on top of matrix reads."""

import numpy as np
import pytest

from dirkit import (
    BasisFamily,
    BasisSpectrumModel,
    Continuity,
    CoordinateSet,
    DataType,
    Directivity,
    RawIRs,
    SynthSpec,
    fit_basis_model,
    synth_test_set,
)
from dirkit.core import DataVolume

SEED = 20240817


class AnalyticLobe(Directivity):
    """Continuous test double: value = elevation + log10(frequency)."""

    def __init__(self, elevation_limits=(-30.0, 90.0), frequency_limits=(100.0, 10000.0)):
        coords = CoordinateSet(
            directions=elevation_limits,
            frequencies=frequency_limits,
            distances=(1.0,),
            continuity=Continuity(True, True, False),
        )
        super().__init__("analytic lobe", coords)

    @property
    def supported_datatypes(self):
        return frozenset({DataType.LOG_MAGNITUDE})

    def get_data_matrix(self, requested, datatype):
        self._check_datatype(datatype)
        actual = self.coerce_onto(requested).coords
        elevations = actual.elevation_array
        freqs = np.maximum(actual.frequency_array, 1e-6)
        values = elevations[:, None, None] + np.log10(freqs)[None, :, None]
        values = np.broadcast_to(values, (*values.shape[:2], len(actual.distances)))
        return DataVolume(values.copy(), actual, datatype)


# --------------------------------------------------------------------------
# spectrum_series
# --------------------------------------------------------------------------

def test_discrete_series_reports_every_stored_bin():
    raw = synth_test_set(SynthSpec(length=64))
    series = raw.spectrum_series((90.0, 0.0))
    np.testing.assert_array_equal(series.frequencies, raw.coords.frequency_array)
    assert series.values.shape == (33,)
    # unit gain at (90, 0) in the flat set
    np.testing.assert_allclose(series.values, 0.0, atol=1e-12)


def test_series_direction_is_coerced_and_reported():
    raw = synth_test_set(SynthSpec(length=64))
    series = raw.spectrum_series((91.0, 2.0))
    assert series.coords.directions[0].azimuth == 90.0
    assert series.coords.directions[0].elevation == 0.0


def test_continuous_series_samples_512_log_spaced_points():
    rng = np.random.default_rng(SEED)
    raw = RawIRs(
        info="",
        irs=rng.standard_normal((2, 64)),
        sample_rate=48000.0,
        directions=[(0, 0), (90, 0)],
    )
    model = fit_basis_model("", raw, BasisFamily.FOURIER, 4)
    series = model.spectrum_series((0.0, 0.0))
    lo, hi = model.frequency_limits
    assert len(series.frequencies) == 512
    assert series.frequencies[0] == pytest.approx(lo)
    assert series.frequencies[-1] == pytest.approx(hi)
    # log spacing: constant ratio between neighbors
    ratios = series.frequencies[1:] / series.frequencies[:-1]
    np.testing.assert_allclose(ratios, ratios[0], rtol=1e-9)
    # values agree with a direct discrete read at the sampled points
    request = CoordinateSet(
        directions=[(0.0, 0.0)], frequencies=tuple(series.frequencies)
    )
    direct = model.get_data_matrix(request, DataType.LOG_MAGNITUDE).values[0, :, 0]
    np.testing.assert_array_equal(series.values, direct)


def test_zero_lower_limit_is_floored_at_twenty_hz():
    model = BasisSpectrumModel(
        info="",
        family=BasisFamily.COSINE,
        coefficients=np.ones((1, 2)),
        source_bins=(0.0, 1000.0),
        directions=[(0, 0)],
    )
    series = model.spectrum_series((0.0, 0.0))
    assert series.frequencies[0] == pytest.approx(20.0)
    assert series.frequencies[-1] == pytest.approx(1000.0)


def test_series_on_analytic_double_matches_closed_form():
    lobe = AnalyticLobe()
    series = lobe.spectrum_series((0.0, 10.0))
    np.testing.assert_allclose(
        series.values, 10.0 + np.log10(series.frequencies), atol=1e-12
    )


def test_series_rejects_time_domain_datatype():
    raw = synth_test_set(SynthSpec(length=64))
    with pytest.raises(ValueError):
        raw.spectrum_series((0.0, 0.0), datatype=DataType.IMPULSE_RESPONSES)


# --------------------------------------------------------------------------
# balloon_grid
# --------------------------------------------------------------------------

def test_discrete_balloon_reports_every_stored_direction():
    raw = synth_test_set(SynthSpec(length=64))
    grid = raw.balloon_grid(1000.0)
    assert grid.directions == raw.coords.directions
    assert grid.values.shape == (72,)
    assert grid.coords.frequencies == (750.0,)  # nearest stored bin to 1 kHz


def test_balloon_values_match_matrix_read():
    raw = synth_test_set(SynthSpec(mode="lowpass", length=64))
    grid = raw.balloon_grid(5000.0)
    request = CoordinateSet(
        directions=raw.coords.directions, frequencies=(5000.0,)
    )
    direct = raw.get_data_matrix(request, DataType.LOG_MAGNITUDE).values[:, 0, 0]
    np.testing.assert_array_equal(grid.values, direct)


def test_continuous_balloon_samples_five_degree_grid_inside_limits():
    lobe = AnalyticLobe(elevation_limits=(-30.0, 90.0))
    grid = lobe.balloon_grid(1000.0)
    elevations = sorted({d.elevation for d in grid.directions})
    azimuths = sorted({d.azimuth for d in grid.directions})
    assert elevations == [(-30.0 + 5.0 * i) for i in range(25)]
    assert azimuths == [5.0 * i for i in range(72)]
    assert len(grid.directions) == 25 * 72
    expected = np.array([d.elevation + 3.0 for d in grid.directions])
    np.testing.assert_allclose(grid.values, expected, atol=1e-12)


def test_balloon_rejects_time_domain_datatype():
    raw = synth_test_set(SynthSpec(length=64))
    with pytest.raises(ValueError):
        raw.balloon_grid(1000.0, datatype=DataType.IMPULSE_RESPONSES)
