"""Exceptions raised by the simulator and the label parsers."""


class HyperAnalysisError(Exception):
    """Base class for every error raised by this package."""


class NonCanonicalLabel(HyperAnalysisError, ValueError):
    """A GHZ label whose bit string is not in canonical form.

    The canonical label is attached as ``canonical`` so callers can report it.
    """

    def __init__(self, label, canonical):
        self.label = label
        self.canonical = canonical
        super().__init__(f"non-canonical GHZ label {label}; canonical form is {canonical}")


class ShapeMismatch(HyperAnalysisError, ValueError):
    pass


class NotAProduct(HyperAnalysisError, ValueError):
    """The state is entangled across the polarization / spatial-mode cut."""


class IndexOutOfRange(HyperAnalysisError, IndexError):
    pass


class UnexpectedPhaseClass(HyperAnalysisError, RuntimeError):
    """A theta-probe carries a phase outside {0, +theta, -theta}; the circuit is mis-wired."""


class DoubleMeasurement(HyperAnalysisError, RuntimeError):
    pass
