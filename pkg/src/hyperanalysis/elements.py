"""Optical elements acting on :class:`~hyperanalysis.hilbert.PureState`.

Beam splitters mix the two spatial modes of a photon, cross-Kerr couplings
shift a probe's integer phase tag, homodyne probe readout projects onto a
sign-blind phase class, and the single-photon Bell-state measurement (SPBSM)
projects one photon onto the four states that entangle its own polarization
and spatial mode.

Every measurement is available in two forms: ``*_branches`` returns all
outcomes with their probabilities and post-measurement states, and
``measure_*`` samples one of them from a caller-owned random generator.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DoubleMeasurement, IndexOutOfRange, UnexpectedPhaseClass
from .hilbert import ATOL, Branch, ProbeUnit, PureState, Sign, SpatialMode, SpbsmKind

_R = 1 / math.sqrt(2)


class ProbeClass(Enum):
    ZERO = "0"
    THETA = "theta"
    PI = "pi"

    __hash__ = object.__hash__

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ProbeOutcome:
    probe_index: int
    klass: ProbeClass

    def __str__(self) -> str:
        return str(self.klass)


@dataclass(frozen=True)
class SpbsmOutcome:
    photon_index: int
    kind: SpbsmKind

    def __str__(self) -> str:
        return str(self.kind)


@dataclass(frozen=True)
class DetectorPort:
    photon_index: int
    mode: SpatialMode
    sign: Sign

    def __str__(self) -> str:
        letter = chr(ord("a") + self.photon_index)
        return f"{letter}{int(self.mode) + 1}{self.sign}"


def detector_port(outcome: SpbsmOutcome) -> DetectorPort:
    """phi-type outcomes fire the mode-1 detectors, psi-type the mode-2 detectors."""
    mode = SpatialMode.M2 if outcome.kind.bit else SpatialMode.M1
    return DetectorPort(outcome.photon_index, mode, outcome.kind.phase)


def outcome_for_port(port: DetectorPort) -> SpbsmOutcome:
    for kind in SpbsmKind:
        if kind.bit == int(port.mode) and kind.phase is port.sign:
            return SpbsmOutcome(port.photon_index, kind)
    raise AssertionError("unreachable")


def _check_photon(state: PureState, photon: int) -> None:
    if not 0 <= photon < state.n_photons:
        raise IndexOutOfRange(f"photon {photon} out of range for {state.n_photons} photons")


def _check_live(state: PureState, photon: int) -> None:
    _check_photon(state, photon)
    if photon in state.measured:
        raise DoubleMeasurement(f"photon {photon} was already measured")


def _check_probe(state: PureState, probe: int) -> None:
    if not 0 <= probe < state.n_probes:
        raise IndexOutOfRange(f"probe {probe} out of range for {state.n_probes} probes")


def apply_beam_splitter(state: PureState, photon: int) -> PureState:
    """Hadamard on the spatial mode of one photon: M1 -> (M1+M2)/r2, M2 -> (M1-M2)/r2."""
    _check_live(state, photon)
    mask = 1 << photon
    out: dict[Branch, complex] = defaultdict(complex)
    for b, a in state:
        low = b.mode & ~mask
        out[Branch(b.pol, low, b.tags)] += a * _R
        out[Branch(b.pol, low | mask, b.tags)] += -a * _R if b.mode & mask else a * _R
    return state.evolve(out)


def apply_beam_splitters(state: PureState, photons) -> PureState:
    for p in photons:
        state = apply_beam_splitter(state, p)
    return state


def apply_cross_kerr(state: PureState, probe: int, photon: int, mode: SpatialMode,
                     coupling: int) -> PureState:
    """Shift the probe tag by ``coupling`` on every branch where ``photon`` sits in ``mode``."""
    _check_probe(state, probe)
    _check_live(state, photon)
    if coupling not in (1, -1):
        raise ValueError(f"coupling must be +1 or -1, got {coupling}")
    out = {}
    for b, a in state:
        if (b.mode >> photon) & 1 == mode:
            tags = b.tags[:probe] + (b.tags[probe] + coupling,) + b.tags[probe + 1:]
            b = Branch(b.pol, b.mode, tags)
        out[b] = a
    return state.evolve(out)


_PROBE_CLASSES = tuple(ProbeClass)


def probe_class(unit: ProbeUnit, tag: int) -> ProbeClass:
    if unit is ProbeUnit.PI:
        return ProbeClass.PI if tag % 2 else ProbeClass.ZERO
    if tag == 0:
        return ProbeClass.ZERO
    if abs(tag) == 1:
        return ProbeClass.THETA
    raise UnexpectedPhaseClass(f"theta-probe holds a phase of {tag} theta")


def probe_branches(state: PureState, probe: int) -> list[tuple[ProbeOutcome, float, PureState]]:
    """All readout classes of one probe with probabilities and projected states.

    The projected state keeps every branch of the class with its relative phase
    and resets the probe's tag to zero.  Branches that then coincide are summed,
    and the result is renormalized.
    """
    _check_probe(state, probe)
    unit = state.probe_units[probe]
    groups: dict[ProbeClass, dict[Branch, complex]] = {}
    weights: dict[ProbeClass, list[float]] = {}
    for b, a in state:
        klass = probe_class(unit, b.tags[probe])
        reset = Branch(b.pol, b.mode, b.tags[:probe] + (0,) + b.tags[probe + 1:])
        group = groups.setdefault(klass, defaultdict(complex))
        group[reset] += a
        weights.setdefault(klass, []).append(abs(a) ** 2)
    out = []
    for klass in _PROBE_CLASSES:
        if klass not in groups:
            continue
        prob = math.fsum(weights[klass])
        if prob < ATOL:
            continue
        out.append((ProbeOutcome(probe, klass), prob, state.evolve(groups[klass], renormalize=True)))
    return out


_SPBSM_KINDS = tuple(SpbsmKind)
_LOCAL_TO_KINDS: dict[tuple[int, int], list[tuple[SpbsmKind, float]]] = defaultdict(list)
for _kind in SpbsmKind:
    for _local, _coeff in _kind.components.items():
        _LOCAL_TO_KINDS[_local].append((_kind, _coeff))


def spbsm_branches(state: PureState, photon: int) -> list[tuple[SpbsmOutcome, float, PureState]]:
    """All single-photon Bell outcomes of ``photon`` with nonzero probability.

    In each post-measurement state the photon is factored out onto the observed
    eigenstate and listed in ``state.measured``.
    """
    _check_live(state, photon)
    clear = ~(1 << photon)
    overlaps: dict[SpbsmKind, dict[Branch, complex]] = {k: defaultdict(complex) for k in _SPBSM_KINDS}
    for b, a in state:
        rest = Branch(b.pol & clear, b.mode & clear, b.tags)
        for kind, coeff in _LOCAL_TO_KINDS[(b.pol >> photon) & 1, (b.mode >> photon) & 1]:
            overlaps[kind][rest] += coeff * a
    out = []
    for kind in _SPBSM_KINDS:
        prob = math.fsum(abs(c) ** 2 for c in overlaps[kind].values())
        if prob < ATOL:
            continue
        post = state.evolve(overlaps[kind], scale=1 / math.sqrt(prob),
                            measured={**state.measured, photon: kind})
        out.append((SpbsmOutcome(photon, kind), prob, post))
    return out


def _sample(rng: np.random.Generator, branches):
    u = rng.random()
    acc = 0.0
    for outcome, prob, post in branches:
        acc += prob
        if u < acc:
            return outcome, post
    outcome, _, post = branches[-1]
    return outcome, post


def measure_probe(state: PureState, probe: int, rng: np.random.Generator):
    """Sample a sign-blind readout of ``probe``; returns ``(ProbeOutcome, post_state)``."""
    return _sample(rng, probe_branches(state, probe))


def measure_spbsm(state: PureState, photon: int, rng: np.random.Generator):
    """Sample an SPBSM on ``photon``; returns ``(SpbsmOutcome, post_state)``."""
    return _sample(rng, spbsm_branches(state, photon))
