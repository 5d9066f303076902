"""Lookup tables of the analyzers, generated by running the simulator and decoder."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .circuits import CircuitKind
from .decoder import decode_polarization
from .elements import ProbeClass, SpbsmKind, SpbsmOutcome
from .hilbert import (
    BELL_LABELS,
    PHI_PLUS,
    BellLabel,
    Dof,
    GhzLabel,
    HyperBellLabel,
    HyperGhzLabel,
    Sign,
    bell_dof_state,
    bell_to_ghz,
    factor_dof,
    fidelity,
    ghz_labels,
    ghz_to_bell,
)
from .oracle import prepare, walk_plan


@dataclass(frozen=True)
class BellProbeRow:
    original: BellLabel
    new: BellLabel
    probe1: ProbeClass
    probe2: ProbeClass


@dataclass(frozen=True)
class DetectionGroup:
    states: frozenset[HyperBellLabel]
    detections: frozenset[tuple[SpbsmKind, SpbsmKind]]


@dataclass(frozen=True)
class GhzProbeRow:
    original: GhzLabel
    classes: tuple[ProbeClass, ...]


def _single(values):
    values = set(values)
    if len(values) != 1:
        raise RuntimeError(f"expected one deterministic value, got {values}")
    return values.pop()


def table_i() -> list[BellProbeRow]:
    """Probe classes and post-probe spatial state of each spatial Bell input."""
    rows = []
    for original in BELL_LABELS:
        plan, state = prepare(CircuitKind.HBSA, HyperBellLabel(PHI_PLUS, original), 2)
        leaves = walk_plan(plan, state)
        classes = _single(tuple(p.klass for p in leaf.record.probe_outcomes) for leaf in leaves)
        spatial = factor_dof(leaves[0].pre_spbsm, Dof.SPATIAL)
        new = next(b for b in BELL_LABELS
                   if fidelity(spatial, bell_dof_state(b, Dof.SPATIAL)) > 1 - 1e-9)
        rows.append(BellProbeRow(original, new, *classes))
    return rows


def table_ii() -> list[DetectionGroup]:
    """Detection pairs grouped by the set of post-probe states they are consistent with."""
    groups: dict[frozenset, set] = {}
    for a, b in itertools.product(SpbsmKind, repeat=2):
        outcomes = (SpbsmOutcome(0, a), SpbsmOutcome(1, b))
        states = frozenset(
            HyperBellLabel(ghz_to_bell(decode_polarization(bell_to_ghz(sp), outcomes)), sp)
            for sp in BELL_LABELS
        )
        groups.setdefault(states, set()).add((a, b))
    order = list(SpbsmKind)
    out = [DetectionGroup(states, frozenset(dets)) for states, dets in groups.items()]
    return sorted(out, key=lambda g: min((order.index(a), order.index(b)) for a, b in g.detections))


def table_iii(n: int = 3) -> list[GhzProbeRow]:
    """Probe classes of the GHZ analyzer for each canonical spatial label."""
    rows = []
    pol = GhzLabel(Sign.PLUS, (0,) * n)
    for spatial in ghz_labels(n):
        plan, state = prepare(CircuitKind.HGSA, HyperGhzLabel(pol, spatial), n)
        leaves = walk_plan(plan, state)
        classes = _single(tuple(p.klass for p in leaf.record.probe_outcomes) for leaf in leaves)
        rows.append(GhzProbeRow(spatial, classes))
    return rows


def _probe_text(klass: ProbeClass) -> str:
    return str(klass)


def render(which: str) -> tuple[str, list[dict]]:
    """Text rendering and JSON-ready rows for table ``I``, ``II`` or ``III``."""
    if which == "I":
        rows = table_i()
        data = [{"original": str(r.original), "new": str(r.new),
                 "alpha1": str(r.probe1), "alpha2": str(r.probe2)} for r in rows]
        lines = ["original  new   alpha1  alpha2"]
        lines += [f"{str(r.original):<9} {str(r.new):<5} {_probe_text(r.probe1):<7} {_probe_text(r.probe2)}"
                  for r in rows]
        return "\n".join(lines), data
    if which == "II":
        data, lines = [], []
        for group in table_ii():
            states = sorted(str(s) for s in group.states)
            dets = sorted(f"{a} {b}" for a, b in group.detections)
            data.append({"states": states, "detections": dets})
            lines.append("states:     " + ", ".join(states))
            lines.append("detections: " + ", ".join(dets))
            lines.append("")
        return "\n".join(lines).rstrip(), data
    if which == "III":
        rows = table_iii()
        data = [{"original": str(r.original), **{f"alpha{i + 1}": str(c) for i, c in enumerate(r.classes)}}
                for r in rows]
        lines = ["original  alpha1  alpha2  alpha3"]
        lines += [f"{str(r.original):<9} " + " ".join(f"{_probe_text(c):<7}" for c in r.classes).rstrip()
                  for r in rows]
        return "\n".join(lines), data
    raise ValueError(f"unknown table {which!r}; choose I, II or III")
