"""Complete analysis of hyperentangled Bell and GHZ states with cross-Kerr probes.

The photons carry polarization (H/V) and spatial-mode (M1/M2) qubits.  Probe
phases are tracked exactly as integer multiples of theta or pi, so every
quantity here is a finite, exact computation.
"""

from .circuits import CircuitKind, MeasurementRecord, hbsa_plan, hgsa_plan, run_hbsa, run_hgsa
from .decoder import decode, decode_hbsa, decode_hgsa
from .elements import ProbeClass, ProbeOutcome, SpbsmOutcome, detector_port
from .errors import (
    DoubleMeasurement,
    HyperAnalysisError,
    IndexOutOfRange,
    NonCanonicalLabel,
    NotAProduct,
    ShapeMismatch,
    UnexpectedPhaseClass,
)
from .hilbert import (
    BellLabel,
    GhzLabel,
    HyperBellLabel,
    HyperGhzLabel,
    PureState,
    Sign,
    SpbsmKind,
    canonicalize_ghz,
    make_hyper_bell,
    make_hyper_ghz,
)
from .oracle import expand_in_spbsm_basis, verify_all

__all__ = [
    "BellLabel", "CircuitKind", "DoubleMeasurement", "GhzLabel", "HyperAnalysisError",
    "HyperBellLabel", "HyperGhzLabel", "IndexOutOfRange", "MeasurementRecord",
    "NonCanonicalLabel", "NotAProduct", "ProbeClass", "ProbeOutcome", "PureState",
    "ShapeMismatch", "Sign", "SpbsmKind", "SpbsmOutcome", "UnexpectedPhaseClass",
    "canonicalize_ghz", "decode", "decode_hbsa", "decode_hgsa", "detector_port",
    "expand_in_spbsm_basis", "hbsa_plan", "hgsa_plan", "make_hyper_bell", "make_hyper_ghz",
    "run_hbsa", "run_hgsa", "verify_all",
]
