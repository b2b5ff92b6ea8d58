from __future__ import annotations

import os
from pathlib import Path

import pytest
from hypothesis import strategies as st

from idnrobust import IDN, IDR, EntityId, Side, make_idn, read_idn

DATA = Path(__file__).parent / "data"
REPORT_DIR = Path(os.environ.get("IDN_REPORT_DIR", Path(__file__).parent.parent / "reports"))


@pytest.fixture
def sample() -> IDN:
    return read_idn(DATA / "sample.idn")


@pytest.fixture
def chain() -> IDN:
    # a1 <- b1, b1 <- a2; a2 and b2 have no IDR
    return make_idn(["a1", "a2"], ["b1", "b2"], {"a1": [["b1"]], "b1": [["a2"]]})


@pytest.fixture
def no_deps() -> IDN:
    return make_idn(["a1", "a2"], ["b1", "b2"])


@pytest.fixture(scope="session")
def report_dir() -> Path:
    REPORT_DIR.mkdir(parents=True, exist_ok=True)
    return REPORT_DIR


@st.composite
def idns(draw, max_a: int = 4, max_b: int = 4, max_minterms: int = 3, max_size: int = 3, cross_only=None):
    """Small valid IDNs with arbitrary IDR shapes."""
    na = draw(st.integers(1, max_a))
    nb = draw(st.integers(1, max_b))
    a = [EntityId(Side.A, f"a{i}") for i in range(1, na + 1)]
    b = [EntityId(Side.B, f"b{i}") for i in range(1, nb + 1)]
    everyone = a + b
    cross = draw(st.booleans()) if cross_only is None else cross_only
    idrs = []
    for target in everyone:
        if not draw(st.booleans()):
            continue
        pool = (b if target.side is Side.A else a) if cross else [e for e in everyone if e != target]
        if not pool:
            continue
        minterm = st.frozensets(st.sampled_from(pool), min_size=1, max_size=min(max_size, len(pool)))
        ms = draw(st.lists(minterm, min_size=1, max_size=max_minterms, unique=True))
        idrs.append(IDR(target, tuple(ms)))
    return IDN(a, b, idrs)


# -- acceptance summary ------------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    crit = marker.kwargs["criterion"]
    title = marker.kwargs.get("title", item.name)
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _ACCEPTANCE[crit] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_ACCEPTANCE):
        status, title = _ACCEPTANCE[crit]
        terminalreporter.write_line(f"criterion {crit}: {status}  {title}")
