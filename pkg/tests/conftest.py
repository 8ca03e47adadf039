import numpy as np
import pytest

from netselect.anp import LEAF_CRITERIA, LEVEL1, LEVEL2, uniform_pairwise
from netselect.config import load_config
from netselect.simulator import DEFAULT_NETWORKS, sample_snapshot
from netselect.strategy import TrafficClassProfile

NETS = ("UMTS", "WLAN", "WIMAX")


def uniform_block(labels):
    return {a: {b: 1 for b in labels[i + 1:]} for i, a in enumerate(labels[:-1])}


def uniform_profile(networks=NETS, name="uniform", level1=None, level2=None):
    return TrafficClassProfile(
        name, tuple(networks),
        level1 or uniform_pairwise(LEVEL1),
        level2 or uniform_pairwise(LEVEL2),
        {c: uniform_pairwise(networks) for c in LEAF_CRITERIA},
    )


def random_snapshots(rng, specs=DEFAULT_NETWORKS):
    return tuple(sample_snapshot(s, rng) for s in specs)


@pytest.fixture(scope="session")
def default_config():
    return load_config()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one "criterion N: PASS/FAIL" line per acceptance criterion, shown after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line[1])
