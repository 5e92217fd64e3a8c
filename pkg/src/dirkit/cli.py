"""Command-line front end: synthesize, convert, fit, compare, export.

Every command reads representations from files (.dird, .dirm, .sofa),
writes CSV/SVG/WAV outputs chosen by the output extension, exits 0 on
success, and prints failures to stderr as a single `error: ...` line.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .basis import BasisFamily, fit_basis_model
from .coords import CoordinateSet, Direction
from .core import DataType
from .diff import DirectivityDiff
from .errors import DirectivityError
from .formats import read_dird, read_dirm, write_dird, write_dirm
from .rawirs import RawIRs
from .synth import MODES, SynthSpec, synth_test_set
from .viz import PlotSeries, line_plot_svg, polar_plot_svg, series_csv, write_csv, write_wav

_Y_NAMES = {
    DataType.LOG_MAGNITUDE: "magnitude_db",
    DataType.LINEAR_MAGNITUDE: "magnitude_linear",
    DataType.POWER_SPECTRUM: "power",
}


def _load(path, receiver=0):
    suffix = Path(path).suffix.lower()
    if suffix == ".dird":
        return read_dird(path)
    if suffix == ".dirm":
        return read_dirm(path)
    if suffix == ".sofa":
        from .sofa import load_sofa

        objects = load_sofa(path)
        if not 0 <= receiver < len(objects):
            raise ValueError(
                f"receiver {receiver} out of range, file has {len(objects)}"
            )
        return objects[receiver]
    raise ValueError(
        f"cannot infer the format of {path!r} (expected .dird, .dirm, or .sofa)"
    )


def _emit_series(out, series_list, *, x_name, y_name, x_log, title):
    suffix = Path(out).suffix.lower()
    if suffix == ".csv":
        series_csv(out, series_list, x_name, y_name)
    elif suffix == ".svg":
        line_plot_svg(
            out, series_list, title=title, x_name=x_name, y_name=y_name, x_log=x_log
        )
    else:
        raise ValueError(f"unsupported output format {suffix!r} (use .csv or .svg)")
    print(f"wrote {out}")


def _freq_range(args):
    if args.fmin is None and args.fmax is None:
        return None
    lo = 0.0 if args.fmin is None else args.fmin
    hi = float("inf") if args.fmax is None else args.fmax
    return (lo, hi)


def _comparison_coords(reference, evaluand):
    """The grid a comparison runs on: the reference's stored coordinates,
    restricted to frequency bins inside any continuous participant's limits."""
    base = reference.coords
    if not base.is_discrete:
        raise ValueError("the reference must store discrete coordinates")
    freqs = base.frequency_array
    mask = np.ones(len(freqs), dtype=bool)
    for obj in (reference, evaluand):
        if obj.coords.continuity.frequency:
            lo, hi = obj.coords.frequencies
            mask &= (freqs >= lo) & (freqs <= hi)
    if not np.any(mask):
        raise ValueError("no reference frequency bins inside the evaluand's limits")
    return CoordinateSet(
        directions=base.directions,
        frequencies=tuple(freqs[mask]),
        distances=base.distances,
    )


def _spectral_datatype(text):
    datatype = DataType.parse(text)
    if datatype not in _Y_NAMES:
        raise ValueError(f"this command plots magnitudes, not {datatype.value}")
    return datatype


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_info(args):
    obj = _load(args.input, args.receiver)
    coords = obj.coords
    print(f"info: {obj.info}")
    print(f"type: {type(obj).__name__}")
    if coords.continuity.direction:
        lo, hi = coords.elevation_limits
        print(f"directions: continuous, elevation limits [{lo}, {hi}] deg")
    else:
        print(f"directions: {len(coords.directions)}")
    if coords.continuity.frequency:
        lo, hi = coords.frequencies
        print(f"frequencies: continuous, [{lo:g}, {hi:g}] Hz")
    else:
        f = coords.frequency_array
        span = f" [{f[0]:g}, {f[-1]:g}] Hz" if len(f) else ""
        print(f"frequencies: {len(f)} bins{span}")
    print(f"distances: {', '.join(format(v, 'g') for v in coords.distances)} m")
    print(f"datatypes: {', '.join(sorted(t.value for t in obj.supported_datatypes))}")
    if isinstance(obj, RawIRs):
        print(f"sample rate: {obj.sample_rate:g} Hz, IR length: {obj.ir_length}")
    return 0


def cmd_synth(args):
    spec = SynthSpec(
        mode=args.mode,
        azimuth_step=args.azimuth_step,
        elevation_step=args.elevation_step,
        elevation_limits=(args.elevation_min, args.elevation_max),
        length=args.length,
        sample_rate=args.sample_rate,
        g0=args.g0,
        g1=args.g1,
        lowpass_a=args.lowpass_a,
    )
    raw = synth_test_set(spec, args.info)
    write_dird(raw, args.output)
    d, f, r = raw.coords.shape
    print(f"wrote {args.output} ({d} directions, {f} bins, {r} distances)")
    return 0


def cmd_convert(args):
    obj = _load(args.input, args.receiver)
    if not isinstance(obj, RawIRs):
        raise ValueError("convert expects an impulse-response input")
    write_dird(obj, args.output)
    print(f"wrote {args.output}")
    return 0


def cmd_spectrum(args):
    datatype = _spectral_datatype(args.datatype)
    direction = Direction(args.azimuth, args.elevation)
    series_list = []
    for i, path in enumerate(args.inputs):
        obj = _load(path, args.receiver)
        series = obj.spectrum_series(direction, args.distance, datatype)
        label = Path(path).stem or f"series{i}"
        if any(s.label == label for s in series_list):
            label = f"{label}-{i}"
        series_list.append(PlotSeries(label, series.frequencies, series.values))
        actual = series.coords.directions[0]
        print(
            f"{path}: read at ({actual.azimuth:g}, {actual.elevation:g}) deg, "
            f"{series.coords.distances[0]:g} m"
        )
    title = args.title or f"spectrum at ({args.azimuth:g}, {args.elevation:g})"
    _emit_series(
        args.output,
        series_list,
        x_name="frequency_hz",
        y_name=_Y_NAMES[datatype],
        x_log=True,
        title=title,
    )
    return 0


def cmd_fit(args):
    source = _load(args.input, args.receiver)
    limits = None
    if args.fmin is not None or args.fmax is not None:
        limits = (
            0.0 if args.fmin is None else args.fmin,
            float("inf") if args.fmax is None else args.fmax,
        )
    model = fit_basis_model(
        args.info, source, BasisFamily.parse(args.family), args.order, limits
    )
    write_dirm(model, args.output)
    lo, hi = model.frequency_limits
    print(
        f"wrote {args.output} (family {model.family.value}, order {model.order}, "
        f"limits [{lo:g}, {hi:g}] Hz)"
    )
    return 0


def cmd_diff(args):
    reference = _load(args.reference)
    evaluand = _load(args.evaluand)
    if args.datatype is not None:
        datatype = DataType.parse(args.datatype)
    else:
        datatype = (
            DataType.LOG_MAGNITUDE
            if args.measure == "sd"
            else DataType.LINEAR_MAGNITUDE
        )
    at = _comparison_coords(reference, evaluand)
    diff = DirectivityDiff(args.info, reference, evaluand, at, datatype)
    freq_range = _freq_range(args)
    y_name = "sd_db" if args.measure == "sd" else "mse_ratio"
    if args.mode == "frequency":
        x, y = diff.error_vs_frequency(args.measure, freq_range)
        x_name, x_log = "frequency_hz", True
    else:
        x, y = diff.error_horizontal(args.measure, freq_range)
        x_name, x_log = "azimuth_deg", False
    overall = diff.compute_sd() if args.measure == "sd" else diff.compute_mse()
    print(f"overall {args.measure} over the comparison grid: {overall:.6g}")
    title = args.title or f"{args.measure} vs {args.mode}"
    _emit_series(
        args.output,
        [PlotSeries(args.measure, x, y)],
        x_name=x_name,
        y_name=y_name,
        x_log=x_log,
        title=title,
    )
    return 0


def cmd_sweep(args):
    reference = _load(args.reference)
    family = BasisFamily.parse(args.family)
    probe = fit_basis_model("", reference, family, 1, None)
    at = _comparison_coords(reference, probe)
    orders = np.arange(1, args.max_order + 1)
    errors = []
    for order in orders:
        model = fit_basis_model("", reference, family, int(order), None)
        diff = DirectivityDiff("", reference, model, at, DataType.LINEAR_MAGNITUDE)
        errors.append(diff.compute_mse())
    series = PlotSeries("mse", orders.astype(float), np.array(errors))
    print(
        f"mse: {errors[0]:.6g} at order 1, {errors[-1]:.6g} at order {args.max_order}"
    )
    _emit_series(
        args.output,
        [series],
        x_name="order",
        y_name="mse_ratio",
        x_log=False,
        title=args.title or f"model error vs order ({family.value})",
    )
    return 0


def cmd_extract_ir(args):
    obj = _load(args.input, args.receiver)
    requested = CoordinateSet(
        directions=(Direction(args.azimuth, args.elevation),),
        frequencies=(),
        distances=(args.distance,),
    )
    vector, actual = obj.get_data_vector(requested, DataType.IMPULSE_RESPONSES)
    direction = actual.directions[0]
    print(
        f"extracted {len(vector)} samples at ({direction.azimuth:g}, "
        f"{direction.elevation:g}) deg, {actual.distances[0]:g} m"
    )
    suffix = Path(args.output).suffix.lower()
    if suffix == ".wav":
        write_wav(args.output, vector, obj.sample_rate)
    elif suffix == ".csv":
        times = actual.frequency_array
        rows = [(i, times[i], vector[i]) for i in range(len(vector))]
        write_csv(args.output, ("sample_index", "time_s", "amplitude"), rows)
    else:
        raise ValueError(f"unsupported output format {suffix!r} (use .wav or .csv)")
    print(f"wrote {args.output}")
    return 0


def cmd_balloon(args):
    obj = _load(args.input, args.receiver)
    datatype = _spectral_datatype(args.datatype)
    grid = obj.balloon_grid(args.frequency, args.distance, datatype)
    actual_freq = grid.coords.frequencies[0]
    print(f"balloon read at {actual_freq:g} Hz")
    suffix = Path(args.output).suffix.lower()
    if suffix == ".csv":
        rows = [
            (d.azimuth, d.elevation, v)
            for d, v in zip(grid.directions, grid.values)
        ]
        write_csv(
            args.output, ("azimuth_deg", "elevation_deg", _Y_NAMES[datatype]), rows
        )
    elif suffix == ".svg":
        elevations = np.array([d.elevation for d in grid.directions])
        ring = np.abs(elevations - args.ring_elevation) <= 1e-6
        if not np.any(ring):
            raise ValueError(
                f"no stored directions at elevation {args.ring_elevation:g}; "
                f"use a .csv output for the full grid"
            )
        azimuths = np.array([d.azimuth for d in grid.directions])[ring]
        polar_plot_svg(
            args.output,
            azimuths,
            grid.values[ring],
            title=args.title or f"{_Y_NAMES[datatype]} at {actual_freq:g} Hz",
            value_name=_Y_NAMES[datatype],
        )
    else:
        raise ValueError(f"unsupported output format {suffix!r} (use .csv or .svg)")
    print(f"wrote {args.output}")
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _add_receiver(parser):
    parser.add_argument(
        "--receiver",
        type=int,
        default=0,
        help="receiver index when reading SOFA files (default 0)",
    )


def _add_direction(parser):
    parser.add_argument("--azimuth", type=float, default=0.0, help="degrees, 0=front, CCW")
    parser.add_argument("--elevation", type=float, default=0.0, help="degrees, +90=up")
    parser.add_argument("--distance", type=float, default=1.0, help="meters (default 1)")


def _add_freq_range(parser):
    parser.add_argument("--fmin", type=float, default=None, help="lower frequency bound, Hz")
    parser.add_argument("--fmax", type=float, default=None, help="upper frequency bound, Hz")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dirkit",
        description="Directivity datasets: synthesize, convert, model, compare, export.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="describe a representation file")
    p.add_argument("input")
    _add_receiver(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("synth", help="generate a synthetic IR set as DIRD")
    p.add_argument("--mode", choices=MODES, default="flat")
    p.add_argument("--azimuth-step", type=float, default=5.0)
    p.add_argument("--elevation-step", type=float, default=10.0)
    p.add_argument("--elevation-min", type=float, default=0.0)
    p.add_argument("--elevation-max", type=float, default=0.0)
    p.add_argument("--length", type=int, default=256)
    p.add_argument("--sample-rate", type=float, default=48000.0)
    p.add_argument("--g0", type=float, default=0.6)
    p.add_argument("--g1", type=float, default=0.4)
    p.add_argument("--lowpass-a", type=float, default=0.5)
    p.add_argument("--info", default="")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("convert", help="convert a SOFA (or DIRD) input to DIRD")
    p.add_argument("input")
    _add_receiver(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("spectrum", help="spectrum at one direction as CSV/SVG")
    p.add_argument("inputs", nargs="+", metavar="input")
    _add_receiver(p)
    _add_direction(p)
    p.add_argument("--datatype", default="log", help="log, lin, or pow (default log)")
    p.add_argument("--title", default="")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("fit", help="fit a basis spectrum model, write DIRM")
    p.add_argument("input")
    _add_receiver(p)
    p.add_argument("--family", default="fourier", help="fourier or cosine")
    p.add_argument("-k", "--order", type=int, required=True)
    _add_freq_range(p)
    p.add_argument("--info", default="")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("diff", help="error of an evaluand against a reference")
    p.add_argument("reference")
    p.add_argument("evaluand")
    p.add_argument("--measure", choices=("sd", "mse"), default="sd")
    p.add_argument(
        "--datatype",
        default=None,
        help="override the difference datatype (default: log for sd, lin for mse)",
    )
    p.add_argument("--mode", choices=("frequency", "horizontal"), default="frequency")
    _add_freq_range(p)
    p.add_argument("--info", default="")
    p.add_argument("--title", default="")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("sweep", help="model error against model order")
    p.add_argument("reference")
    p.add_argument("--family", default="fourier")
    p.add_argument("-k", "--max-order", type=int, required=True)
    p.add_argument("--title", default="")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("extract-ir", help="write one impulse response as WAV/CSV")
    p.add_argument("input")
    _add_receiver(p)
    _add_direction(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_extract_ir)

    p = sub.add_parser("balloon", help="directional pattern at one frequency")
    p.add_argument("input")
    _add_receiver(p)
    p.add_argument("--frequency", type=float, required=True)
    p.add_argument("--distance", type=float, default=1.0)
    p.add_argument("--datatype", default="log")
    p.add_argument(
        "--ring-elevation",
        type=float,
        default=0.0,
        help="elevation of the ring rendered in SVG output (default 0)",
    )
    p.add_argument("--title", default="")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_balloon)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DirectivityError, ValueError, OSError, ImportError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
