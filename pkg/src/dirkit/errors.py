"""Exception types shared across the package."""


class DirectivityError(Exception):
    """Base class for all dirkit-specific errors."""


class UnsupportedDatatypeError(DirectivityError):
    """A representation was asked for a datatype it cannot serve."""

    def __init__(self, datatype, supported=()):
        self.datatype = datatype
        self.supported = tuple(supported)
        names = ", ".join(sorted(d.value for d in self.supported)) or "none"
        super().__init__(
            f"datatype '{getattr(datatype, 'value', datatype)}' is not supported "
            f"(supported: {names})"
        )


class CoordinateMismatchError(DirectivityError):
    """Two reads landed on coordinates that differ beyond tolerance."""


class FormatError(DirectivityError):
    """A file does not follow its expected grammar.

    `line` is 1-based and None when the problem is not tied to a line.
    """

    def __init__(self, path, message, line=None):
        self.path = str(path)
        self.line = line
        where = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{where}: {message}")


class SofaError(FormatError):
    """A SOFA file cannot be ingested (wrong convention, units, or layout)."""

    def __init__(self, path, message):
        super().__init__(path, message, line=None)
