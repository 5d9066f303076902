"""Map a :class:`MeasurementRecord` back to the hyperentangled label that produced it.

The spatial label comes from the probe classes.  The polarization label then
follows from the SPBSM results: the product of the SPBSM phases fixes the
polarization phase relative to the spatial one, and each photon's SPBSM bit
fixes its polarization bit relative to its spatial bit, up to complementing
the whole string.
"""

from __future__ import annotations

from typing import Sequence

from .circuits import CircuitKind, MeasurementRecord
from .elements import ProbeClass, ProbeOutcome, SpbsmOutcome
from .hilbert import (
    PHI_MINUS,
    PHI_PLUS,
    PSI_MINUS,
    PSI_PLUS,
    BellLabel,
    GhzLabel,
    HyperBellLabel,
    HyperGhzLabel,
    Sign,
    bell_to_ghz,
    canonicalize_ghz,
    ghz_to_bell,
)

PhaseBit = Sign

_SPATIAL_BELL = {
    (ProbeClass.ZERO, ProbeClass.ZERO): (PHI_PLUS, PHI_PLUS),
    (ProbeClass.ZERO, ProbeClass.THETA): (PHI_MINUS, PSI_PLUS),
    (ProbeClass.THETA, ProbeClass.ZERO): (PSI_PLUS, PHI_MINUS),
    (ProbeClass.THETA, ProbeClass.THETA): (PSI_MINUS, PSI_MINUS),
}


def decode_spatial_bell(probe1: ProbeOutcome, probe2: ProbeOutcome) -> tuple[BellLabel, BellLabel]:
    """``(original, new)`` spatial Bell labels for the two theta-probe classes."""
    try:
        return _SPATIAL_BELL[probe1.klass, probe2.klass]
    except KeyError:
        raise ValueError(f"expected two theta-probe classes, got {probe1}, {probe2}") from None


def decode_spatial_ghz(probes: Sequence[ProbeOutcome], n: int) -> GhzLabel:
    if len(probes) != n:
        raise ValueError(f"expected {n} probe outcomes, got {len(probes)}")
    bits = [0] + [int(p.klass is ProbeClass.THETA) for p in probes[:-1]]
    sign = Sign.MINUS if probes[-1].klass is ProbeClass.PI else Sign.PLUS
    return canonicalize_ghz(sign, bits)


def phase_of(outcome: SpbsmOutcome) -> PhaseBit:
    return outcome.kind.phase


def bit_of(outcome: SpbsmOutcome) -> int:
    return outcome.kind.bit


def polarization_phase(spatial: GhzLabel, spbsm: Sequence[SpbsmOutcome]) -> Sign:
    sign = spatial.sign
    for outcome in spbsm:
        sign = sign * phase_of(outcome)
    return sign


def polarization_bits(spatial: GhzLabel, spbsm: Sequence[SpbsmOutcome]) -> tuple[int, ...]:
    """Candidate polarization bits; the true string is this or its complement."""
    return tuple(bit_of(o) ^ s for o, s in zip(spbsm, spatial.bits))


def decode_polarization(spatial: GhzLabel, spbsm: Sequence[SpbsmOutcome]) -> GhzLabel:
    if len(spbsm) != spatial.n:
        raise ValueError(f"expected {spatial.n} SPBSM outcomes, got {len(spbsm)}")
    return canonicalize_ghz(polarization_phase(spatial, spbsm), polarization_bits(spatial, spbsm))


def decode_hbsa(record: MeasurementRecord) -> HyperBellLabel:
    if record.kind is not CircuitKind.HBSA:
        raise ValueError("not a Bell-analyzer record")
    original, new = decode_spatial_bell(*record.probe_outcomes)
    # the SPBSMs see the relabeled spatial state, not the original one
    pol = decode_polarization(bell_to_ghz(new), record.spbsm_outcomes)
    return HyperBellLabel(ghz_to_bell(pol), original)


def decode_hgsa(record: MeasurementRecord) -> HyperGhzLabel:
    if record.kind is not CircuitKind.HGSA:
        raise ValueError("not a GHZ-analyzer record")
    spatial = decode_spatial_ghz(record.probe_outcomes, record.n_photons)
    return HyperGhzLabel(decode_polarization(spatial, record.spbsm_outcomes), spatial)


def decode(record: MeasurementRecord):
    return decode_hbsa(record) if record.kind is CircuitKind.HBSA else decode_hgsa(record)
