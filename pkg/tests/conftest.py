import pathlib
import re

import numpy as np
import pytest

from tanisearch import DescriptorMatrix, DrugClass

DATA = pathlib.Path(__file__).parent / "data"

_CRITERION = re.compile(r"test_criterion_(\d+)_([a-z0-9_]+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion, after the normal output."""
    results = {}
    for key in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(key, []):
            match = _CRITERION.search(getattr(report, "nodeid", ""))
            if not match:
                continue
            number = int(match.group(1))
            title = match.group(2).replace("_", " ")
            status = "PASS" if key == "passed" else "FAIL"
            if results.get(number, ("", "PASS"))[1] != "FAIL":
                results[number] = (title, status)
    if results:
        terminalreporter.write_sep("-", "acceptance criteria")
        for number in sorted(results):
            title, status = results[number]
            terminalreporter.write_line(f"criterion {number:2d} ({title}): {status}")


def make_matrix(values, ids=None, classes=None, names=None, has_class_column=True):
    values = np.asarray(values, dtype=float)
    m, n = values.shape
    ids = ids or [f"m{i:04d}" for i in range(m)]
    classes = classes or [DrugClass.ATS] * m
    names = names or [f"a{j}" for j in range(n)]
    return DescriptorMatrix(list(ids), list(classes), list(names), values,
                            has_class_column=has_class_column)


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)


@pytest.fixture
def rank_fixture_path():
    return DATA / "rank_fixture_50x10.csv"


@pytest.fixture
def golden_rank_path():
    return DATA / "golden_rank_50x10.csv"


@pytest.fixture
def divergence_fixture_path():
    return DATA / "compare_divergence_20x5.csv"
