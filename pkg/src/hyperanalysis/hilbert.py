"""N-photon states carrying a polarization qubit and a spatial-mode qubit per photon.

A :class:`PureState` is a sparse map from :class:`Branch` keys to complex
amplitudes.  A branch fixes the polarization and spatial mode of every photon
plus an integer phase tag for each coherent probe, so entanglement between the
photons and the probes is tracked exactly without ever assigning a numeric
value to the Kerr phase.

Bit conventions: ``H = 0``, ``V = 1`` and ``M1 = 0``, ``M2 = 1``.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import NonCanonicalLabel, NotAProduct, ShapeMismatch

ATOL = 1e-9


class Polarization(IntEnum):
    H = 0
    V = 1


class SpatialMode(IntEnum):
    M1 = 0
    M2 = 1


class ProbeUnit(Enum):
    THETA = "theta"
    PI = "pi"

    __hash__ = object.__hash__


class Dof(Enum):
    POLARIZATION = "polarization"
    SPATIAL = "spatial"


class Sign(Enum):
    """Relative phase of a two-term state; multiplication forms the group Z2."""

    PLUS = 1
    MINUS = -1

    # members are singletons; identity hashing is much cheaper than Enum's default
    __hash__ = object.__hash__

    def __mul__(self, other: "Sign") -> "Sign":
        return Sign.PLUS if self is other else Sign.MINUS

    def __str__(self) -> str:
        return "+" if self is Sign.PLUS else "-"

    @classmethod
    def parse(cls, text: str) -> "Sign":
        try:
            return {"+": cls.PLUS, "-": cls.MINUS}[text]
        except KeyError:
            raise ValueError(f"sign must be '+' or '-', got {text!r}") from None


_R = 1 / math.sqrt(2)


class SpbsmKind(Enum):
    """The four single-photon Bell states of one photon's polarization and spatial mode."""

    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"

    __hash__ = object.__hash__

    @property
    def phase(self) -> Sign:
        return _SPBSM_PHASE[self]

    @property
    def bit(self) -> int:
        return _SPBSM_BIT[self]

    @property
    def components(self) -> dict[tuple[int, int], float]:
        """``(polarization, mode) -> amplitude``: phi pairs H with M2, psi pairs H with M1."""
        sign = self.phase.value * _R
        if self.bit:
            return {(0, 0): _R, (1, 1): sign}
        return {(0, 1): _R, (1, 0): sign}

    def __str__(self) -> str:
        return self.value


_SPBSM_PHASE = {k: Sign.PLUS if k.value.endswith("+") else Sign.MINUS for k in SpbsmKind}
_SPBSM_BIT = {k: int(k.value.startswith("psi")) for k in SpbsmKind}


class BellKind(Enum):
    PHI = "Phi"
    PSI = "Psi"


@dataclass(frozen=True)
class BellLabel:
    kind: BellKind
    sign: Sign

    def __str__(self) -> str:
        return f"{self.kind.value}{self.sign}"

    @classmethod
    def parse(cls, text: str) -> "BellLabel":
        text = text.strip()
        for kind in BellKind:
            if text.lower().startswith(kind.value.lower()) and len(text) == 4:
                return cls(kind, Sign.parse(text[3]))
        raise ValueError(f"expected one of Phi+, Phi-, Psi+, Psi-; got {text!r}")


PHI_PLUS = BellLabel(BellKind.PHI, Sign.PLUS)
PHI_MINUS = BellLabel(BellKind.PHI, Sign.MINUS)
PSI_PLUS = BellLabel(BellKind.PSI, Sign.PLUS)
PSI_MINUS = BellLabel(BellKind.PSI, Sign.MINUS)
BELL_LABELS = (PHI_PLUS, PHI_MINUS, PSI_PLUS, PSI_MINUS)


def _complement(bits: Sequence[int]) -> tuple[int, ...]:
    return tuple(1 - b for b in bits)


def _is_canonical_bits(bits: tuple[int, ...]) -> bool:
    ones = sum(bits)
    n = len(bits)
    if 2 * ones < n:
        return True
    if 2 * ones == n:
        # equal-length tuples compare like their binary values
        return bits < _complement(bits)
    return False


@dataclass(frozen=True)
class GhzLabel:
    """``(|bits> + sign |complement(bits)>) / sqrt(2)``.

    Construction does not enforce the canonical form because decoding builds
    candidate strings first; see :func:`canonicalize_ghz`.
    """

    sign: Sign
    bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "bits", tuple(int(b) for b in self.bits))
        if len(self.bits) < 2 or any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"GHZ bit string must have length >= 2 over {{0,1}}, got {self.bits}")

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def is_canonical(self) -> bool:
        return _is_canonical_bits(self.bits)

    def __str__(self) -> str:
        return f"{self.sign}:{''.join(map(str, self.bits))}"

    @classmethod
    def parse(cls, text: str) -> "GhzLabel":
        sign, sep, bits = text.strip().partition(":")
        if not sep or not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"expected GHZ label like '+:010', got {text!r}")
        return cls(Sign.parse(sign), tuple(int(c) for c in bits))


@functools.lru_cache(maxsize=None)
def _canonical(sign: Sign, bits: tuple[int, ...]) -> GhzLabel:
    if _is_canonical_bits(bits):
        return GhzLabel(sign, bits)
    return GhzLabel(sign, _complement(bits))


def canonicalize_ghz(sign: Sign, bits: Sequence[int]) -> GhzLabel:
    """Pick between ``bits`` and its complement; the sign is never touched."""
    return _canonical(sign, tuple(int(b) for b in bits))


def bell_to_ghz(label: BellLabel) -> GhzLabel:
    return GhzLabel(label.sign, (0, 0) if label.kind is BellKind.PHI else (0, 1))


def ghz_to_bell(label: GhzLabel) -> BellLabel:
    label = canonicalize_ghz(label.sign, label.bits)
    if label.n != 2:
        raise ValueError(f"only 2-photon GHZ labels map to Bell labels, got {label}")
    return BellLabel(BellKind.PHI if label.bits == (0, 0) else BellKind.PSI, label.sign)


@dataclass(frozen=True)
class HyperBellLabel:
    pol: BellLabel
    spatial: BellLabel

    def __str__(self) -> str:
        return f"{self.pol} / {self.spatial}"


@dataclass(frozen=True)
class HyperGhzLabel:
    pol: GhzLabel
    spatial: GhzLabel

    def __post_init__(self):
        if self.pol.n != self.spatial.n:
            raise ValueError("polarization and spatial labels must cover the same photons")

    @property
    def n_photons(self) -> int:
        return self.pol.n

    def __str__(self) -> str:
        return f"{self.pol} / {self.spatial}"


def ghz_labels(n: int) -> list[GhzLabel]:
    """The 2^n canonical labels, ordered by bit string then sign."""
    out = []
    for bits in itertools.product((0, 1), repeat=n):
        if _is_canonical_bits(bits):
            out.extend(GhzLabel(s, bits) for s in (Sign.PLUS, Sign.MINUS))
    return out


def hyper_bell_labels() -> list[HyperBellLabel]:
    return [HyperBellLabel(p, s) for p in BELL_LABELS for s in BELL_LABELS]


def hyper_ghz_labels(n: int) -> list[HyperGhzLabel]:
    labels = ghz_labels(n)
    return [HyperGhzLabel(p, s) for p in labels for s in labels]


def pack_bits(bits: Sequence[int]) -> int:
    """Photon ``i``'s bit goes to bit ``i`` of the integer."""
    return sum(int(b) << i for i, b in enumerate(bits))


def unpack_bits(value: int, n: int) -> tuple[int, ...]:
    return tuple((value >> i) & 1 for i in range(n))


class Branch(NamedTuple):
    """One basis ket plus probe tags; ``pol`` and ``mode`` are bit masks over photons."""

    pol: int
    mode: int
    tags: tuple[int, ...]

    def ket(self, n: int) -> tuple[tuple[int, int], ...]:
        """``((pol, mode), ...)`` for photons ``0..n-1``."""
        return tuple(zip(unpack_bits(self.pol, n), unpack_bits(self.mode, n)))

    @classmethod
    def from_bits(cls, pol: Sequence[int], mode: Sequence[int], tags: Sequence[int] = ()) -> "Branch":
        return cls(pack_bits(pol), pack_bits(mode), tuple(tags))


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized sparse superposition of :class:`Branch` keys.

    ``measured`` maps photons consumed by a single-photon Bell-state measurement
    to the observed eigenstate.  Such a photon is factored out: its slot in every
    branch holds the placeholder ``(H, M1)`` and the full ket is recovered with
    :meth:`expanded`.
    """

    n_photons: int
    probe_units: tuple[ProbeUnit, ...]
    amplitudes: dict[Branch, complex]
    measured: dict[int, SpbsmKind] = field(default_factory=dict)

    def __post_init__(self):
        if self.n_photons < 2:
            raise ValueError(f"need at least 2 photons, got {self.n_photons}")
        object.__setattr__(self, "probe_units", tuple(self.probe_units))
        object.__setattr__(self, "measured", dict(self.measured))
        amps = {}
        limit = 1 << self.n_photons
        for b, a in sorted(self.amplitudes.items(), key=lambda kv: self._sort_key(kv[0])):
            if not (0 <= b.pol < limit and 0 <= b.mode < limit):
                raise ShapeMismatch(f"branch {b} does not describe {self.n_photons} photons")
            if len(b.tags) != len(self.probe_units):
                raise ShapeMismatch(f"branch {b} does not carry {len(self.probe_units)} probe tags")
            if any((b.pol | b.mode) >> i & 1 for i in self.measured):
                raise ValueError(f"branch {b} does not hold the placeholder for a measured photon")
            if abs(a) >= ATOL:
                amps[b] = complex(a)
        norm = math.fsum(abs(a) ** 2 for a in amps.values())
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_probes(self) -> int:
        return len(self.probe_units)

    def __len__(self) -> int:
        return len(self.amplitudes)

    def __iter__(self) -> Iterator[tuple[Branch, complex]]:
        return iter(self.amplitudes.items())

    def __neg__(self) -> "PureState":
        return self.evolve({b: -a for b, a in self})

    def evolve(self, amplitudes: dict[Branch, complex], *, renormalize: bool = False,
               scale: float = 1.0, measured: dict[int, SpbsmKind] | None = None) -> "PureState":
        """New state with the same shape, pruned of vanishing branches.

        Amplitudes are multiplied by ``scale``; with ``renormalize`` the result is
        brought to unit norm instead.  The caller guarantees branch shapes and,
        otherwise, the norm: this is the fast path used by the optical elements.
        """
        if renormalize:
            norm = math.sqrt(math.fsum(abs(a) ** 2 for a in amplitudes.values()))
            if norm < ATOL:
                raise ValueError("cannot renormalize a vanishing state")
            scale = 1 / norm
        if scale == 1.0:
            amps = {b: a for b, a in amplitudes.items() if abs(a) >= ATOL}
        else:
            amps = {b: a * scale for b, a in amplitudes.items() if abs(a * scale) >= ATOL}
        out = object.__new__(PureState)
        object.__setattr__(out, "n_photons", self.n_photons)
        object.__setattr__(out, "probe_units", self.probe_units)
        object.__setattr__(out, "amplitudes", amps)
        object.__setattr__(out, "measured", self.measured if measured is None else measured)
        return out

    def expanded(self) -> "PureState":
        """The same state with every measured photon written back into the ket."""
        if not self.measured:
            return self
        amps = dict(self.amplitudes)
        for photon, kind in self.measured.items():
            out: dict[Branch, complex] = {}
            for b, a in amps.items():
                for (p, m), c in kind.components.items():
                    out[Branch(b.pol | p << photon, b.mode | m << photon, b.tags)] = a * c
            amps = out
        return PureState(self.n_photons, self.probe_units, amps)

    def norm(self) -> float:
        return math.sqrt(math.fsum(abs(a) ** 2 for a in self.amplitudes.values()))

    def branches(self) -> list[tuple[Branch, complex]]:
        """Branches in canonical order: lexicographic on per-photon bit pairs, then tags."""
        return sorted(self.amplitudes.items(), key=lambda kv: self._sort_key(kv[0]))

    def _sort_key(self, branch: Branch):
        return branch.ket(self.n_photons), branch.tags

    def __str__(self) -> str:
        lines = []
        for b, a in self.branches():
            ket = " ".join(f"{Polarization(p).name}{m + 1}" for p, m in b.ket(self.n_photons))
            tags = ",".join(str(t) for t in b.tags)
            lines.append(f"{a.real:+.4f}{a.imag:+.4f}j |{ket}> [{tags}]")
        return "\n".join(lines)


def _bell_terms(label: BellLabel) -> list[tuple[tuple[int, int], int]]:
    if label.kind is BellKind.PHI:
        return [((0, 0), 1), ((1, 1), label.sign.value)]
    return [((0, 1), 1), ((1, 0), label.sign.value)]


def _ghz_terms(label: GhzLabel) -> list[tuple[tuple[int, ...], int]]:
    return [(label.bits, 1), (_complement(label.bits), label.sign.value)]


def _product_state(pol_terms, spatial_terms, probe_units) -> PureState:
    n = len(pol_terms[0][0])
    tags = (0,) * len(probe_units)
    amps: dict[Branch, complex] = {}
    for (pbits, pa), (sbits, sa) in itertools.product(pol_terms, spatial_terms):
        amps[Branch.from_bits(pbits, sbits, tags)] = 0.5 * pa * sa
    return PureState(n, probe_units, amps)


def make_hyper_bell(label: HyperBellLabel, n_probes: int = 2) -> PureState:
    """Two-photon state ``pol (x) spatial`` with ``n_probes`` theta-probes at rest."""
    if n_probes < 0:
        raise ValueError("n_probes must be >= 0")
    return _product_state(
        _bell_terms(label.pol), _bell_terms(label.spatial), (ProbeUnit.THETA,) * n_probes
    )


def hgsa_probe_units(n: int) -> tuple[ProbeUnit, ...]:
    return (ProbeUnit.THETA,) * (n - 1) + (ProbeUnit.PI,)


def make_hyper_ghz(label: HyperGhzLabel, n_probes: int | None = None, *,
                   probe_units: Sequence[ProbeUnit] | None = None) -> PureState:
    """N-photon state ``pol (x) spatial`` with every probe tag at zero.

    By default the probes follow the GHZ analyzer layout: N-1 theta-probes and
    a final pi-probe.  Any other ``n_probes`` gives theta-probes only, and an
    explicit ``probe_units`` overrides both.
    """
    for part in (label.pol, label.spatial):
        if not part.is_canonical:
            raise NonCanonicalLabel(part, canonicalize_ghz(part.sign, part.bits))
    n = label.n_photons
    if probe_units is None:
        if n_probes is None or n_probes == n:
            probe_units = hgsa_probe_units(n)
        else:
            if n_probes < 0:
                raise ValueError("n_probes must be >= 0")
            probe_units = (ProbeUnit.THETA,) * n_probes
    elif n_probes is not None and n_probes != len(probe_units):
        raise ValueError("n_probes disagrees with probe_units")
    return _product_state(_ghz_terms(label.pol), _ghz_terms(label.spatial), tuple(probe_units))


def _check_shapes(a, b) -> None:
    if isinstance(a, PureState) and isinstance(b, PureState):
        if a.n_photons != b.n_photons or a.probe_units != b.probe_units:
            raise ShapeMismatch(
                f"cannot compare {a.n_photons}-photon/{a.probe_units} with "
                f"{b.n_photons}-photon/{b.probe_units}"
            )
    elif isinstance(a, DofState) and isinstance(b, DofState):
        if a.dof is not b.dof or a.n_qubits != b.n_qubits:
            raise ShapeMismatch(f"cannot compare {a.dof}/{a.n_qubits} with {b.dof}/{b.n_qubits}")
    else:
        raise ShapeMismatch(f"cannot compare {type(a).__name__} with {type(b).__name__}")


def inner(a, b) -> complex:
    """``<a|b>`` for two :class:`PureState` or two :class:`DofState` values."""
    _check_shapes(a, b)
    if isinstance(a, PureState) and a.measured != b.measured:
        a, b = a.expanded(), b.expanded()
    if len(a.amplitudes) > len(b.amplitudes):
        return inner(b, a).conjugate()
    return sum(
        (amp.conjugate() * b.amplitudes.get(key, 0.0) for key, amp in a.amplitudes.items()),
        0j,
    )


def fidelity(a, b) -> float:
    """``|<a|b>|``: insensitive to global phase, probe tags included."""
    return min(1.0, abs(inner(a, b)))


@dataclass(frozen=True, eq=False)
class DofState:
    """Pure state of one degree of freedom of all photons (an N-qubit register)."""

    dof: Dof
    amplitudes: dict[tuple[int, ...], complex]

    def __post_init__(self):
        amps = {tuple(k): complex(v) for k, v in sorted(self.amplitudes.items()) if abs(v) >= ATOL}
        if not amps:
            raise ValueError("empty state")
        if len({len(k) for k in amps}) != 1:
            raise ShapeMismatch("mixed register sizes")
        norm = math.fsum(abs(a) ** 2 for a in amps.values())
        if abs(norm - 1.0) > ATOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return len(next(iter(self.amplitudes)))


def bell_dof_state(label: BellLabel, dof: Dof) -> DofState:
    r = 1 / math.sqrt(2)
    return DofState(dof, {bits: r * s for bits, s in _bell_terms(label)})


def ghz_dof_state(label: GhzLabel, dof: Dof) -> DofState:
    r = 1 / math.sqrt(2)
    return DofState(dof, {bits: r * s for bits, s in _ghz_terms(label)})


def dof_matrix(state: PureState) -> tuple[np.ndarray, list, list]:
    """Amplitude matrix with polarization configurations as rows, spatial as columns.

    Probe tags must be identical on every branch.
    """
    state = state.expanded()
    if len({b.tags for b in state.amplitudes}) > 1:
        raise ValueError("probe tags differ across branches; measure the probes first")
    rows = sorted({b.pol for b in state.amplitudes})
    cols = sorted({b.mode for b in state.amplitudes})
    r_index = {k: i for i, k in enumerate(rows)}
    c_index = {k: i for i, k in enumerate(cols)}
    mat = np.zeros((len(rows), len(cols)), dtype=complex)
    for b, a in state:
        mat[r_index[b.pol], c_index[b.mode]] = a
    return mat, rows, cols


def factor_dof(state: PureState, dof: Dof) -> DofState:
    """The factor of ``state`` on one degree of freedom, if the DOFs are unentangled."""
    mat, rows, cols = dof_matrix(state)
    u, s, vh = np.linalg.svd(mat)
    if len(s) > 1 and s[1] > ATOL:
        rank = int(np.count_nonzero(s > ATOL))
        raise NotAProduct(f"polarization and spatial modes are entangled (Schmidt rank {rank})")
    n = state.n_photons
    if dof is Dof.POLARIZATION:
        return DofState(dof, {unpack_bits(k, n): v for k, v in zip(rows, u[:, 0])})
    return DofState(dof, {unpack_bits(k, n): v for k, v in zip(cols, vh[0, :])})
