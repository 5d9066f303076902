"""Exhaustive checks of the analyzers.

Two independent routes are compared here.  :func:`expand_in_spbsm_basis`
rewrites a state in the product SPBSM basis with a dense tensor contraction,
while :func:`enumerate_records` walks every measurement branch of a wiring
plan using the sparse projections of :mod:`hyperanalysis.elements`.  No
sampling is involved anywhere in this module.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .circuits import (
    BeamSplitterLayer,
    CircuitKind,
    KerrCouplings,
    MeasurementRecord,
    ProbeReadout,
    SpbsmStep,
    WiringPlan,
    hbsa_plan,
    hgsa_plan,
)
from .decoder import decode, polarization_bits, polarization_phase
from .elements import (
    SpbsmKind,
    apply_beam_splitters,
    apply_cross_kerr,
    probe_branches,
    spbsm_branches,
)
from .hilbert import (
    ATOL,
    GhzLabel,
    HyperBellLabel,
    HyperGhzLabel,
    PureState,
    bell_to_ghz,
    hyper_bell_labels,
    hyper_ghz_labels,
    make_hyper_bell,
    make_hyper_ghz,
)

Label = Union[HyperBellLabel, HyperGhzLabel]

_KINDS = tuple(SpbsmKind)
_R = 1 / math.sqrt(2)
# rows: phi+, phi-, psi+, psi-; columns: local basis index 2*pol + mode
_SPBSM_BASIS = np.array(
    [
        [0, _R, _R, 0],   # (|H x2> + |V x1>)
        [0, _R, -_R, 0],  # (|H x2> - |V x1>)
        [_R, 0, 0, _R],   # (|H x1> + |V x2>)
        [_R, 0, 0, -_R],  # (|H x1> - |V x2>)
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class OutcomeDistribution:
    entries: dict[tuple[SpbsmKind, ...], complex]

    def __post_init__(self):
        norm = math.fsum(abs(a) ** 2 for a in self.entries.values())
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"outcome amplitudes are not normalized (norm^2 = {norm!r})")

    def probabilities(self) -> dict[tuple[SpbsmKind, ...], float]:
        return {k: abs(a) ** 2 for k, a in self.entries.items()}


def expand_in_spbsm_basis(state: PureState) -> OutcomeDistribution:
    """Amplitude of every joint SPBSM outcome, by dense change of basis photon by photon."""
    state = state.expanded()
    if len({b.tags for b in state.amplitudes}) > 1:
        raise ValueError("probe tags differ across branches; measure the probes first")
    n = state.n_photons
    tensor = np.zeros((4,) * n, dtype=complex)
    for b, a in state:
        tensor[tuple(2 * p + m for p, m in b.ket(n))] += a
    for axis in range(n):
        tensor = np.tensordot(_SPBSM_BASIS.conj(), tensor, axes=([1], [axis]))
        tensor = np.moveaxis(tensor, 0, axis)
    entries = {}
    for idx in zip(*np.nonzero(np.abs(tensor) >= ATOL)):
        entries[tuple(_KINDS[i] for i in idx)] = complex(tensor[idx])
    return OutcomeDistribution(entries)


@dataclass
class Leaf:
    record: MeasurementRecord
    probability: float
    pre_spbsm: PureState
    probe_probabilities: list[list[float]]


def walk_plan(plan: WiringPlan, state: PureState) -> list[Leaf]:
    """Depth-first traversal of every measurement outcome of ``plan`` on ``state``.

    Each leaf carries its exact probability, the state entering the SPBSM stage
    and, for each probe readout on its path, the probabilities of all classes
    that were possible at that point.
    """
    leaves: list[Leaf] = []
    steps = plan.steps
    start = plan.spbsm_start

    def rec(i, state, probes, spbsms, prob, fanouts, pre):
        if i == start:
            pre = state
        if i == len(steps):
            record = MeasurementRecord(plan.kind, plan.n_photons, probes, spbsms)
            leaves.append(Leaf(record, prob, pre, fanouts))
            return
        step = steps[i]
        if isinstance(step, KerrCouplings):
            for photon, mode, coupling in step.couplings:
                state = apply_cross_kerr(state, step.probe, photon, mode, coupling)
            rec(i + 1, state, probes, spbsms, prob, fanouts, pre)
        elif isinstance(step, BeamSplitterLayer):
            rec(i + 1, apply_beam_splitters(state, step.photons), probes, spbsms, prob, fanouts, pre)
        elif isinstance(step, ProbeReadout):
            branches = probe_branches(state, step.probe)
            seen = fanouts + [[p for _, p, _ in branches]]
            for outcome, p, post in branches:
                rec(i + 1, post, probes + [outcome], spbsms, prob * p, seen, pre)
        elif isinstance(step, SpbsmStep):
            for outcome, p, post in spbsm_branches(state, step.photon):
                rec(i + 1, post, probes, spbsms + [outcome], prob * p, fanouts, pre)
        else:
            raise TypeError(f"unknown step {step!r}")

    rec(0, state, [], [], 1.0, [], None)
    return leaves


def prepare(circuit: CircuitKind, label: Label, n: int) -> tuple[WiringPlan, PureState]:
    """Wiring plan and freshly prepared input state for ``label``."""
    if circuit is CircuitKind.HBSA:
        if n != 2 or not isinstance(label, HyperBellLabel):
            raise ValueError("the Bell analyzer takes a HyperBellLabel and n = 2")
        return hbsa_plan(), make_hyper_bell(label, 2)
    if not isinstance(label, HyperGhzLabel) or label.n_photons != n:
        raise ValueError(f"the GHZ analyzer takes a {n}-photon HyperGhzLabel")
    return hgsa_plan(n), make_hyper_ghz(label)


def enumerate_records(circuit: CircuitKind, label: Label, n: int) -> list[tuple[MeasurementRecord, float]]:
    """Every reachable record of ``label`` with its exact probability."""
    plan, state = prepare(circuit, label, n)
    return [(leaf.record, leaf.probability) for leaf in walk_plan(plan, state)]


def spatial_ghz_seen_by_spbsm(record: MeasurementRecord) -> GhzLabel:
    """Spatial GHZ label present when the SPBSMs act, as reconstructed by the decoder."""
    from .decoder import decode_spatial_bell, decode_spatial_ghz

    if record.kind is CircuitKind.HBSA:
        return bell_to_ghz(decode_spatial_bell(*record.probe_outcomes)[1])
    return decode_spatial_ghz(record.probe_outcomes, record.n_photons)


def relations_hold(record: MeasurementRecord, label: Label) -> tuple[bool, bool]:
    """``(phase relation, bit relation up to complement)`` for one reachable record."""
    spatial = spatial_ghz_seen_by_spbsm(record)
    pol = bell_to_ghz(label.pol) if isinstance(label, HyperBellLabel) else label.pol
    phase_ok = polarization_phase(spatial, record.spbsm_outcomes) is pol.sign
    bits = polarization_bits(spatial, record.spbsm_outcomes)
    complement = tuple(1 - b for b in bits)
    return phase_ok, pol.bits in (bits, complement)


@dataclass
class LabelResult:
    label: Label
    records: dict[MeasurementRecord, float]
    deterministic: bool
    round_trip: dict[MeasurementRecord, bool]
    equiprobable: bool
    total_probability: float
    oracle_agrees: bool
    relations: bool

    @property
    def passed(self) -> bool:
        return (self.deterministic and self.equiprobable and self.oracle_agrees
                and self.relations and all(self.round_trip.values())
                and abs(self.total_probability - 1.0) <= ATOL)


def check_label(circuit: CircuitKind, label: Label, n: int) -> LabelResult:
    plan, state = prepare(circuit, label, n)
    leaves = walk_plan(plan, state)
    records = {leaf.record: leaf.probability for leaf in leaves}
    deterministic = all(
        len(fan) == 1 and abs(fan[0] - 1.0) <= ATOL
        for leaf in leaves for fan in leaf.probe_probabilities
    )
    probs = list(records.values())
    equiprobable = max(probs) - min(probs) <= ATOL
    oracle_agrees = True
    for pre in {id(leaf.pre_spbsm): leaf.pre_spbsm for leaf in leaves}.values():
        branch_probability = sum(l.probability for l in leaves if l.pre_spbsm is pre)
        expected = expand_in_spbsm_basis(pre).probabilities()
        got = {
            tuple(o.kind for o in l.record.spbsm_outcomes): l.probability / branch_probability
            for l in leaves if l.pre_spbsm is pre
        }
        if set(got) != set(expected) or any(abs(got[k] - expected[k]) > ATOL for k in got):
            oracle_agrees = False
    relations = all(all(relations_hold(r, label)) for r in records)
    return LabelResult(
        label=label,
        records=records,
        deterministic=deterministic,
        round_trip={r: decode(r) == label for r in records},
        equiprobable=equiprobable,
        total_probability=math.fsum(probs),
        oracle_agrees=oracle_agrees,
        relations=relations,
    )


@dataclass
class VerificationReport:
    kind: CircuitKind
    n: int
    results: list[LabelResult] = field(default_factory=list)
    collisions: list[tuple[MeasurementRecord, Label, Label]] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def labels_tested(self) -> int:
        return len(self.results)

    @property
    def labels_passed(self) -> int:
        return sum(r.passed for r in self.results)

    @property
    def n_records(self) -> int:
        return sum(len(r.records) for r in self.results)

    @property
    def records_per_label(self) -> set[int]:
        return {len(r.records) for r in self.results}

    @property
    def partition_ok(self) -> bool:
        return not self.collisions

    @property
    def passed(self) -> bool:
        return self.partition_ok and self.labels_passed == self.labels_tested > 0

    def summary(self) -> str:
        return (f"{self.labels_passed}/{self.labels_tested} labels, {self.n_records} records, "
                f"{'pass' if self.passed else 'FAIL'}")

    def failures(self) -> list[str]:
        out = []
        for r in self.results:
            if r.passed:
                continue
            bad = [name for name, ok in (
                ("determinism", r.deterministic),
                ("equiprobability", r.equiprobable),
                ("oracle agreement", r.oracle_agrees),
                ("sign/bit relations", r.relations),
                ("round trip", all(r.round_trip.values())),
                ("total probability", abs(r.total_probability - 1.0) <= ATOL),
            ) if not ok]
            out.append(f"{r.label}: {', '.join(bad)}")
        out.extend(f"record {rec} reachable from {a} and {b}" for rec, a, b in self.collisions)
        return out

    def to_dict(self) -> dict:
        probabilities = sorted({round(p, 12) for r in self.results for p in r.records.values()})
        return {
            "mode": self.kind.value,
            "photons": self.n,
            "labels_tested": self.labels_tested,
            "labels_passed": self.labels_passed,
            "records": self.n_records,
            "records_per_label": sorted(self.records_per_label),
            "record_probabilities": probabilities,
            "deterministic_probes": all(r.deterministic for r in self.results),
            "round_trip": all(all(r.round_trip.values()) for r in self.results),
            "oracle_agreement": all(r.oracle_agrees for r in self.results),
            "relations": all(r.relations for r in self.results),
            "partition": self.partition_ok,
            "failures": self.failures(),
            "wall_time": round(self.wall_time, 3),
            "pass": self.passed,
        }


def labels_for(circuit: CircuitKind, n: int) -> list[Label]:
    if circuit is CircuitKind.HBSA:
        if n != 2:
            raise ValueError("the Bell analyzer works on 2 photons")
        return hyper_bell_labels()
    if n < 2:
        raise ValueError("need at least 2 photons")
    return hyper_ghz_labels(n)


def verify_all(circuit: CircuitKind, n: int) -> VerificationReport:
    """Enumerate, decode and cross-check every label of one analyzer."""
    start = time.perf_counter()
    report = VerificationReport(circuit, n)
    owner: dict[MeasurementRecord, Label] = {}
    for label in labels_for(circuit, n):
        result = check_label(circuit, label, n)
        report.results.append(result)
        for record in result.records:
            previous = owner.setdefault(record, label)
            if previous != label:
                report.collisions.append((record, previous, label))
    report.wall_time = time.perf_counter() - start
    return report

