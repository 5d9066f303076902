"""The two analyzer pipelines and the record they produce.

Both pipelines are described declaratively by a :class:`WiringPlan`, a flat
sequence of steps (Kerr couplings, probe readouts, beam-splitter layers and
SPBSMs).  :func:`execute` samples a plan with a random generator; the oracle
module walks the same plan exhaustively.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .elements import (
    ProbeClass,
    ProbeOutcome,
    SpbsmOutcome,
    apply_beam_splitters,
    apply_cross_kerr,
    measure_probe,
    measure_spbsm,
)
from .hilbert import (
    PHI_MINUS,
    PHI_PLUS,
    PSI_MINUS,
    PSI_PLUS,
    BellLabel,
    ProbeUnit,
    PureState,
    SpatialMode,
    hgsa_probe_units,
)


class CircuitKind(Enum):
    HBSA = "bell"
    HGSA = "ghz"


@dataclass(frozen=True)
class KerrCouplings:
    probe: int
    couplings: tuple[tuple[int, SpatialMode, int], ...]


@dataclass(frozen=True)
class ProbeReadout:
    probe: int


@dataclass(frozen=True)
class BeamSplitterLayer:
    photons: tuple[int, ...]


@dataclass(frozen=True)
class SpbsmStep:
    photon: int


Step = Union[KerrCouplings, ProbeReadout, BeamSplitterLayer, SpbsmStep]


@dataclass(frozen=True)
class WiringPlan:
    kind: CircuitKind
    n_photons: int
    probe_units: tuple[ProbeUnit, ...]
    steps: tuple[Step, ...]

    def couplings(self, probe: int) -> list[tuple[int, SpatialMode, int]]:
        return [c for s in self.steps if isinstance(s, KerrCouplings) and s.probe == probe
                for c in s.couplings]

    @property
    def bs_layers(self) -> list[tuple[int, ...]]:
        return [s.photons for s in self.steps if isinstance(s, BeamSplitterLayer)]

    @property
    def spbsm_start(self) -> int:
        """Index of the first SPBSM step; ``steps[:spbsm_start]`` is the QND stage."""
        return next(i for i, s in enumerate(self.steps) if isinstance(s, SpbsmStep))


def _parity_couplings(first: int, partner: int) -> tuple[tuple[int, SpatialMode, int], ...]:
    return ((first, SpatialMode.M1, +1), (partner, SpatialMode.M1, -1))


def hbsa_plan() -> WiringPlan:
    both = (0, 1)
    steps: list[Step] = [
        KerrCouplings(0, _parity_couplings(0, 1)),
        ProbeReadout(0),
        BeamSplitterLayer(both),
        KerrCouplings(1, _parity_couplings(0, 1)),
        ProbeReadout(1),
        SpbsmStep(0),
        SpbsmStep(1),
    ]
    return WiringPlan(CircuitKind.HBSA, 2, (ProbeUnit.THETA, ProbeUnit.THETA), tuple(steps))


def hgsa_plan(n: int) -> WiringPlan:
    """Parity checks of photon 0 against each other photon, then a pi-probe
    between two beam-splitter layers, then one SPBSM per photon."""
    if n < 2:
        raise ValueError(f"need at least 2 photons, got {n}")
    everyone = tuple(range(n))
    steps: list[Step] = []
    for j in range(n - 1):
        steps.append(KerrCouplings(j, _parity_couplings(0, j + 1)))
        steps.append(ProbeReadout(j))
    steps.append(BeamSplitterLayer(everyone))
    steps.append(KerrCouplings(n - 1, tuple((i, SpatialMode.M2, +1) for i in everyone)))
    steps.append(ProbeReadout(n - 1))
    steps.append(BeamSplitterLayer(everyone))
    steps.extend(SpbsmStep(i) for i in everyone)
    return WiringPlan(CircuitKind.HGSA, n, hgsa_probe_units(n), tuple(steps))


@dataclass(frozen=True)
class MeasurementRecord:
    kind: CircuitKind
    n_photons: int
    probe_outcomes: tuple[ProbeOutcome, ...]
    spbsm_outcomes: tuple[SpbsmOutcome, ...]

    def __post_init__(self):
        object.__setattr__(self, "probe_outcomes", tuple(self.probe_outcomes))
        object.__setattr__(self, "spbsm_outcomes", tuple(self.spbsm_outcomes))
        n = self.n_photons
        probes = self.probe_outcomes
        if self.kind is CircuitKind.HBSA:
            if n != 2 or len(probes) != 2:
                raise ValueError("a Bell-analyzer record has 2 photons and 2 probe outcomes")
            if any(p.klass is ProbeClass.PI for p in probes):
                raise ValueError("Bell-analyzer probes are theta-probes")
        else:
            if len(probes) != n:
                raise ValueError(f"a GHZ-analyzer record has {n} probe outcomes")
            if any(p.klass is ProbeClass.PI for p in probes[:-1]) or probes[-1].klass is ProbeClass.THETA:
                raise ValueError("GHZ-analyzer records hold N-1 theta classes then one pi class")
        if [o.photon_index for o in self.spbsm_outcomes] != list(range(n)):
            raise ValueError("need exactly one SPBSM outcome per photon, in photon order")
        object.__setattr__(self, "_hash", hash((self.kind, n, probes, self.spbsm_outcomes)))

    def __hash__(self) -> int:
        # records are dictionary keys by the tens of thousands during verification
        return self._hash


def execute(steps: Sequence[Step], state: PureState, rng: np.random.Generator):
    """Run ``steps`` on ``state``; returns ``(probe_outcomes, spbsm_outcomes, state)``."""
    probes: list[ProbeOutcome] = []
    spbsms: list[SpbsmOutcome] = []
    for step in steps:
        if isinstance(step, KerrCouplings):
            for photon, mode, coupling in step.couplings:
                state = apply_cross_kerr(state, step.probe, photon, mode, coupling)
        elif isinstance(step, ProbeReadout):
            outcome, state = measure_probe(state, step.probe, rng)
            probes.append(outcome)
        elif isinstance(step, BeamSplitterLayer):
            state = apply_beam_splitters(state, step.photons)
        elif isinstance(step, SpbsmStep):
            outcome, state = measure_spbsm(state, step.photon, rng)
            spbsms.append(outcome)
        else:
            raise TypeError(f"unknown step {step!r}")
    return probes, spbsms, state


def _check_layout(plan: WiringPlan, state: PureState) -> None:
    if state.n_photons != plan.n_photons or state.probe_units != plan.probe_units:
        raise ValueError(
            f"{plan.kind.name} needs {plan.n_photons} photons with probes {plan.probe_units}; "
            f"got {state.n_photons} photons with {state.probe_units}"
        )


def run_plan(plan: WiringPlan, state: PureState, rng: np.random.Generator):
    _check_layout(plan, state)
    probes, spbsms, final = execute(plan.steps, state, rng)
    return MeasurementRecord(plan.kind, plan.n_photons, probes, spbsms), final


def run_hbsa(state: PureState, rng: np.random.Generator):
    """Analyze a two-photon state; returns ``(MeasurementRecord, final_state)``."""
    return run_plan(hbsa_plan(), state, rng)


def run_hgsa(state: PureState, n: int, rng: np.random.Generator):
    """Analyze an ``n``-photon state; returns ``(MeasurementRecord, final_state)``."""
    return run_plan(hgsa_plan(n), state, rng)


_AFTER_PROBES = {PHI_PLUS: PHI_PLUS, PHI_MINUS: PSI_PLUS, PSI_PLUS: PHI_MINUS, PSI_MINUS: PSI_MINUS}


def spatial_state_after_probes(label: BellLabel) -> BellLabel:
    """Spatial Bell state left behind by the Bell analyzer's beam-splitter layer."""
    return _AFTER_PROBES[label]
