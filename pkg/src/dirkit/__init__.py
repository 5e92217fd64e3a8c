"""dirkit: directivity data under one read contract.

Representations of direction x frequency x distance data (impulse
responses, basis-function spectrum models, stored differences) share a
uniform coerced-read interface, with error measures, plain-text
persistence, SOFA ingestion, a synthetic test-set generator, and a CLI
on top.
"""

from .basis import BasisFamily, BasisSpectrumModel, eval_basis, fit_basis_model
from .coords import (
    Continuity,
    CoordinateSet,
    Direction,
    coerce,
    expand_grid,
    great_circle_angle,
    interaural_to_spherical,
    spherical_to_interaural,
)
from .core import (
    BalloonGrid,
    DataType,
    DataVolume,
    Directivity,
    SpectrumSeries,
    db_to_linear,
    linear_to_db,
)
from .diff import CoordinateMismatchWarning, DirectivityDiff
from .errors import (
    CoordinateMismatchError,
    DirectivityError,
    FormatError,
    SofaError,
    UnsupportedDatatypeError,
)
from .formats import read_dird, read_dirm, write_dird, write_dirm
from .rawirs import RawIRs
from .sofa import load_sofa
from .synth import SynthSpec, synth_directions, synth_gain, synth_test_set

__version__ = "1.0.0"

__all__ = [
    "BalloonGrid",
    "BasisFamily",
    "BasisSpectrumModel",
    "Continuity",
    "CoordinateMismatchError",
    "CoordinateMismatchWarning",
    "CoordinateSet",
    "DataType",
    "DataVolume",
    "Directivity",
    "DirectivityDiff",
    "DirectivityError",
    "Direction",
    "FormatError",
    "RawIRs",
    "SofaError",
    "SpectrumSeries",
    "SynthSpec",
    "UnsupportedDatatypeError",
    "coerce",
    "db_to_linear",
    "eval_basis",
    "expand_grid",
    "fit_basis_model",
    "great_circle_angle",
    "interaural_to_spherical",
    "linear_to_db",
    "load_sofa",
    "read_dird",
    "read_dirm",
    "spherical_to_interaural",
    "synth_directions",
    "synth_gain",
    "synth_test_set",
    "write_dird",
    "write_dirm",
]
