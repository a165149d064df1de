import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tsineq.timescale import TimeScale

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_line():
    def record(number: int, ok: bool, detail: str):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


@st.composite
def integer_scales(draw, min_points=3, max_points=10):
    """Sorted distinct integers, as both a TimeScale and the raw list."""
    start = draw(st.integers(-5, 5))
    gaps = draw(st.lists(st.integers(1, 3), min_size=min_points - 1, max_size=max_points - 1))
    pts = np.concatenate(([start], start + np.cumsum(gaps))).astype(float)
    return TimeScale.points(pts.tolist()), pts


@st.composite
def mixed_scales(draw):
    """One to three segments and up to three isolated points, with positive gaps."""
    kinds = draw(st.lists(st.sampled_from(["seg", "pt"]), min_size=2, max_size=5))
    x = draw(st.floats(-2, 0))
    pairs = []
    for k in kinds:
        if k == "seg":
            hi = x + draw(st.floats(0.25, 1.5))
            pairs.append([x, hi])
            x = hi
        else:
            pairs.append([x, x])
        x += draw(st.floats(0.2, 1.2))
    return TimeScale.from_pairs(pairs)


def window_points(T: TimeScale) -> np.ndarray:
    """Scattered points plus segment ends: every place the window may start or stop."""
    return np.unique(np.ravel(T.to_pairs()))


def brute_hk(pts, t, s, k):
    """Nested left-endpoint sums over a purely discrete scale."""
    pts = list(pts)
    if k == 0:
        return 1.0
    lo, hi, sign = (s, t, 1.0) if t >= s else (t, s, -1.0)
    total = 0.0
    for i, tau in enumerate(pts[:-1]):
        if lo <= tau < hi:
            total += brute_hk(pts, tau, s, k - 1) * (pts[i + 1] - tau)
    return sign * total
