import numpy as np
import pytest

from regionscreen import DiscreteDictionary, build_doa_dictionary, build_gaussian_dictionary

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def doa_dict():
    return build_doa_dictionary(1000, 100)


@pytest.fixture(scope="session")
def gauss_dict():
    return build_gaussian_dictionary((0.0, 100.0), 10.0, 500)


@pytest.fixture(scope="session")
def gauss_discrete(gauss_dict):
    """Gaussian atoms on a 0.1-spaced mean grid over [0, 100] (1001 atoms)."""
    mus = np.linspace(0.0, 100.0, 1001)
    return DiscreteDictionary(gauss_dict.atoms(mus), mus)


def separated_support(rng, gap=20.0, lo=5.0, hi=95.0, count=5):
    """Indices into ``gauss_discrete`` with means pairwise at least ``gap`` apart."""
    slack = np.sort(rng.uniform(0.0, (hi - lo) - (count - 1) * gap, count))
    return np.rint((lo + slack + gap * np.arange(count)) * 10).astype(int)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
