"""Ingestion of SimpleFreeFieldHRIR containers built in-memory with h5py."""

import numpy as np
import pytest

h5py = pytest.importorskip("h5py")

from dirkit import RawIRs, SofaError, load_sofa, read_dird, write_dird

SEED = 20240819


def write_sofa(
    path,
    irs,
    positions,
    *,
    rate=48000.0,
    convention="SimpleFreeFieldHRIR",
    rate_units="hertz",
    skip_rate=False,
    pos_type="spherical",
    pos_units="degree, degree, metre",
    title="synthetic set",
    database=None,
):
    with h5py.File(path, "w") as handle:
        if convention is not None:
            handle.attrs["SOFAConventions"] = convention
        if title is not None:
            handle.attrs["Title"] = title
        if database is not None:
            handle.attrs["DatabaseName"] = database
        handle.create_dataset("Data.IR", data=np.asarray(irs, dtype=np.float64))
        if not skip_rate:
            node = handle.create_dataset(
                "Data.SamplingRate", data=np.atleast_1d(np.asarray(rate, dtype=np.float64))
            )
            if rate_units is not None:
                node.attrs["Units"] = rate_units
        node = handle.create_dataset(
            "SourcePosition", data=np.asarray(positions, dtype=np.float64)
        )
        if pos_type is not None:
            node.attrs["Type"] = pos_type
        if pos_units is not None:
            node.attrs["Units"] = pos_units
    return path


@pytest.fixture()
def sofa_path(tmp_path):
    return tmp_path / "set.sofa"


def test_one_rawirs_per_receiver(sofa_path):
    rng = np.random.default_rng(SEED)
    irs = rng.normal(size=(3, 2, 8))
    positions = [(0.0, 0.0, 1.0), (90.0, 0.0, 1.0), (-90.0, 30.0, 1.0)]
    write_sofa(sofa_path, irs, positions)

    loaded = load_sofa(sofa_path)
    assert len(loaded) == 2
    for receiver, raw in enumerate(loaded):
        assert isinstance(raw, RawIRs)
        assert raw.info == f"synthetic set (receiver {receiver})"
        assert raw.sample_rate == 48000.0
        assert raw.ir_length == 8
        assert raw.coords.distances == (1.0,)
        dirs = [(d.azimuth, d.elevation) for d in raw.coords.directions]
        assert dirs == [(0.0, 0.0), (90.0, 0.0), (270.0, 30.0)]
        for m in range(3):
            np.testing.assert_array_equal(raw.irs[m, :, 0], irs[m, receiver, :])


def test_negative_azimuth_wraps(sofa_path):
    irs = np.zeros((1, 1, 4))
    irs[0, 0, 0] = 1.0
    write_sofa(sofa_path, irs, [(-10.0, -5.0, 2.5)])
    (raw,) = load_sofa(sofa_path)
    assert raw.coords.directions[0].azimuth == 350.0
    assert raw.coords.directions[0].elevation == -5.0
    assert raw.coords.distances == (2.5,)


def test_multi_distance_rows_are_factored_into_one_grid(sofa_path):
    rng = np.random.default_rng(SEED + 1)
    irs = rng.normal(size=(4, 1, 4))
    # Rows deliberately interleave the two distances.
    positions = [
        (0.0, 0.0, 2.0),
        (90.0, 0.0, 1.0),
        (0.0, 0.0, 1.0),
        (90.0, 0.0, 2.0),
    ]
    write_sofa(sofa_path, irs, positions)
    (raw,) = load_sofa(sofa_path)

    assert raw.coords.distances == (1.0, 2.0)
    dirs = [(d.azimuth, d.elevation) for d in raw.coords.directions]
    assert dirs == [(90.0, 0.0), (0.0, 0.0)]
    # Row layout: direction (90, 0) was measured in rows 1 (1 m) and 3 (2 m),
    # direction (0, 0) in rows 2 (1 m) and 0 (2 m).
    np.testing.assert_array_equal(raw.irs[0, :, 0], irs[1, 0, :])
    np.testing.assert_array_equal(raw.irs[0, :, 1], irs[3, 0, :])
    np.testing.assert_array_equal(raw.irs[1, :, 0], irs[2, 0, :])
    np.testing.assert_array_equal(raw.irs[1, :, 1], irs[0, 0, :])


def test_meter_spelling_and_case_insensitive_units(sofa_path):
    irs = np.zeros((1, 1, 4))
    irs[0, 0, 1] = 1.0
    write_sofa(
        sofa_path,
        irs,
        [(10.0, 20.0, 1.5)],
        rate_units="Hertz",
        pos_type="Spherical",
        pos_units="Degree, Degree, Meter",
    )
    (raw,) = load_sofa(sofa_path)
    assert raw.coords.directions[0].azimuth == 10.0


def test_bytes_attributes_are_decoded(sofa_path):
    irs = np.zeros((1, 1, 4))
    write_sofa(sofa_path, irs, [(0.0, 0.0, 1.0)], title=None, convention=None)
    with h5py.File(sofa_path, "a") as handle:
        handle.attrs["SOFAConventions"] = np.bytes_("SimpleFreeFieldHRIR")
        handle.attrs["Title"] = np.bytes_("byte titled")
    (raw,) = load_sofa(sofa_path)
    assert raw.info == "byte titled (receiver 0)"


def test_database_name_is_the_title_fallback(sofa_path):
    irs = np.zeros((1, 1, 4))
    write_sofa(sofa_path, irs, [(0.0, 0.0, 1.0)], title=None, database="measurement db")
    (raw,) = load_sofa(sofa_path)
    assert raw.info == "measurement db (receiver 0)"


def test_round_trip_through_dird(sofa_path, tmp_path):
    rng = np.random.default_rng(SEED + 2)
    irs = rng.normal(size=(3, 2, 16))
    positions = [(0.0, 0.0, 1.0), (120.0, 15.0, 1.0), (240.0, -15.0, 1.0)]
    write_sofa(sofa_path, irs, positions, rate=44100.0)
    raw = load_sofa(sofa_path)[1]

    out = tmp_path / "receiver1.dird"
    write_dird(raw, out)
    again = read_dird(out)
    assert again.sample_rate == 44100.0
    assert again.coords.directions == raw.coords.directions
    np.testing.assert_array_equal(again.irs, raw.irs)


# -- rejected containers -------------------------------------------------------

def _expect_sofa_error(path, match):
    with pytest.raises(SofaError, match=match) as excinfo:
        load_sofa(path)
    assert excinfo.value.path == str(path)
    return excinfo.value


def _valid_kwargs():
    return {
        "irs": np.ones((2, 1, 4)),
        "positions": [(0.0, 0.0, 1.0), (90.0, 0.0, 1.0)],
    }


def test_wrong_convention_is_rejected(sofa_path):
    write_sofa(sofa_path, convention="GeneralFIR", **_valid_kwargs())
    _expect_sofa_error(sofa_path, "unsupported convention 'GeneralFIR'")


def test_radian_positions_are_rejected(sofa_path):
    write_sofa(sofa_path, pos_units="radian, radian, metre", **_valid_kwargs())
    _expect_sofa_error(sofa_path, "unsupported SourcePosition unit 'radian'")


def test_missing_position_units_are_rejected(sofa_path):
    write_sofa(sofa_path, pos_units=None, **_valid_kwargs())
    _expect_sofa_error(sofa_path, "SourcePosition has no Units")


def test_missing_position_type_is_rejected(sofa_path):
    write_sofa(sofa_path, pos_type=None, **_valid_kwargs())
    _expect_sofa_error(sofa_path, "unsupported SourcePosition type")


def test_cartesian_positions_are_rejected(sofa_path):
    write_sofa(sofa_path, pos_type="cartesian", **_valid_kwargs())
    _expect_sofa_error(sofa_path, "unsupported SourcePosition type 'cartesian'")


def test_missing_sampling_rate_is_rejected(sofa_path):
    write_sofa(sofa_path, skip_rate=True, **_valid_kwargs())
    _expect_sofa_error(sofa_path, "missing mandatory variable Data.SamplingRate")


def test_wrong_rate_unit_is_rejected(sofa_path):
    write_sofa(sofa_path, rate_units="kilohertz", **_valid_kwargs())
    _expect_sofa_error(sofa_path, "unsupported sampling-rate unit 'kilohertz'")


def test_varying_sampling_rate_is_rejected(sofa_path):
    write_sofa(sofa_path, rate=(44100.0, 48000.0), **_valid_kwargs())
    _expect_sofa_error(sofa_path, "Data.SamplingRate varies")


def test_flat_ir_array_is_rejected(sofa_path):
    write_sofa(sofa_path, irs=np.ones((2, 4)), positions=[(0.0, 0.0, 1.0)] * 2)
    _expect_sofa_error(sofa_path, r"Data.IR shape \(2, 4\)")


def test_single_sample_irs_are_rejected(sofa_path):
    write_sofa(sofa_path, irs=np.ones((1, 1, 1)), positions=[(0.0, 0.0, 1.0)])
    _expect_sofa_error(sofa_path, "length 1 are too short")


def test_position_row_count_mismatch_is_rejected(sofa_path):
    write_sofa(sofa_path, irs=np.ones((3, 1, 4)), positions=[(0.0, 0.0, 1.0)] * 2)
    _expect_sofa_error(sofa_path, "disagree with Data.IR")


def test_duplicate_directions_are_rejected(sofa_path):
    write_sofa(
        sofa_path,
        irs=np.ones((2, 1, 4)),
        positions=[(0.0, 0.0, 1.0), (360.0, 0.0, 1.0)],
    )
    _expect_sofa_error(sofa_path, "duplicate direction")


def test_non_positive_distance_is_rejected(sofa_path):
    write_sofa(sofa_path, irs=np.ones((1, 1, 4)), positions=[(0.0, 0.0, 0.0)])
    _expect_sofa_error(sofa_path, "non-positive source distance")


def test_unequal_grid_sizes_across_distances_are_rejected(sofa_path):
    write_sofa(
        sofa_path,
        irs=np.ones((3, 1, 4)),
        positions=[(0.0, 0.0, 1.0), (90.0, 0.0, 1.0), (0.0, 0.0, 2.0)],
    )
    _expect_sofa_error(sofa_path, "direction grids differ across distances")


def test_mismatched_directions_across_distances_are_rejected(sofa_path):
    write_sofa(
        sofa_path,
        irs=np.ones((4, 1, 4)),
        positions=[
            (0.0, 0.0, 1.0),
            (90.0, 0.0, 1.0),
            (0.0, 0.0, 2.0),
            (45.0, 0.0, 2.0),
        ],
    )
    _expect_sofa_error(sofa_path, "missing at distance")


def test_non_hdf5_file_is_rejected(tmp_path):
    path = tmp_path / "fake.sofa"
    path.write_text("DIRD 1\n")
    _expect_sofa_error(path, "not a readable HDF5 container")
