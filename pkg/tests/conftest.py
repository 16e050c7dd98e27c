"""Shared fixtures and the per-criterion acceptance summary."""

from __future__ import annotations

import itertools
import re
from collections import OrderedDict
from pathlib import Path

import pytest

from localfield_mra.gf import GF
from localfield_mra.trees import RootedTree, prufer_decode

DATA = Path(__file__).parent / "data"

ACCEPTANCE_TITLES = {
    1: "worked example (p=s=2): phi and phi-hat grids, spectrum cosets",
    2: "tree counts 1, 3, 16 and Prufer round trip",
    3: "exhaustive certification at p=s=2 and p=3,s=1",
    4: "height formula: support level equals H-2",
    5: "star tree gives the Haar MRA",
    6: "tree and product spectra agree",
    7: "negative controls",
    8: "refinement coefficients reproduce the mask",
    9: "field axioms and character-sum identities",
}

_outcomes: "OrderedDict[int, list[str]]" = OrderedDict((k, []) for k in ACCEPTANCE_TITLES)


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _outcomes[int(m.group(1))].append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not any(_outcomes.values()):
        return
    terminalreporter.section("acceptance criteria")
    for k, outcomes in _outcomes.items():
        if not outcomes:
            status = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"criterion {k}: {status} - {ACCEPTANCE_TITLES[k]}")


# -- fixtures ---------------------------------------------------------------------

SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1)]
UP_TO_8 = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3)]
UP_TO_9 = UP_TO_8 + [(3, 2)]


@pytest.fixture(scope="session")
def gf4() -> GF:
    return GF.make(2, 2)


@pytest.fixture(scope="session")
def example_tree(gf4) -> RootedTree:
    return RootedTree.validate(gf4, {gf4.parse("1,1"): 0, gf4.parse("0,1"): gf4.parse("1,1"),
                                     gf4.parse("1,0"): gf4.parse("1,1")})


def all_trees(field: GF):
    """Every rooted tree (decoded lazily from all Prufer sequences)."""
    q = field.order
    for seq in itertools.product(range(q), repeat=q - 2):
        yield prufer_decode(seq, field)
