import numpy as np
import pytest

from hyperanalysis.hilbert import (
    BellLabel,
    Branch,
    GhzLabel,
    HyperBellLabel,
    HyperGhzLabel,
    ProbeUnit,
    PureState,
)


def hb(pol: str, spatial: str) -> HyperBellLabel:
    return HyperBellLabel(BellLabel.parse(pol), BellLabel.parse(spatial))


def hg(pol: str, spatial: str) -> HyperGhzLabel:
    return HyperGhzLabel(GhzLabel.parse(pol), GhzLabel.parse(spatial))


def random_state(rng: np.random.Generator, n: int, probe_units, n_branches: int = 6) -> PureState:
    """Random normalized sparse state; theta tags in {-1, 0, 1}, pi tags in [-3, 3]."""
    amps = {}
    while len(amps) < n_branches:
        tags = tuple(
            int(rng.integers(-1, 2)) if u is ProbeUnit.THETA else int(rng.integers(-3, 4))
            for u in probe_units
        )
        b = Branch(int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n)), tags)
        amps[b] = complex(rng.normal(), rng.normal())
    scale = np.sqrt(sum(abs(a) ** 2 for a in amps.values()))
    return PureState(n, tuple(probe_units), {b: a / scale for b, a in amps.items()})


def dense(state: PureState) -> dict:
    """Amplitude map of the fully expanded state, for exact comparisons."""
    return dict(state.expanded().amplitudes)


def assert_same_state(a: PureState, b: PureState, atol: float = 1e-9) -> None:
    da, db = dense(a), dense(b)
    for key in set(da) | set(db):
        assert abs(da.get(key, 0) - db.get(key, 0)) <= atol, key


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# Acceptance criteria register one line each here; the summary hook prints them.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
