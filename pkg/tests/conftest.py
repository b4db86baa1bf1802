import dataclasses

import pytest

from aperiodic.catalog import make_kite_dart, make_pinwheel, make_quaquaversal, make_thue_morse
from aperiodic.geometry import Isometry2
from aperiodic.substitution import SubstitutionRule


@pytest.fixture(scope="session")
def pinwheel():
    return make_pinwheel()


@pytest.fixture(scope="session")
def quaquaversal():
    return make_quaquaversal()


@pytest.fixture(scope="session")
def kite_dart():
    return make_kite_dart()


@pytest.fixture(scope="session")
def thue_morse():
    return make_thue_morse()


def shifted_child_system(system, child: int = 0, dx: float = 0.01):
    """Copy of a 2D system with one child of the first rule nudged along x."""
    rule = system.rules[0]
    kids = list(rule.children)
    cid, iso = kids[child]
    kids[child] = (cid, Isometry2(iso.orientation, (iso.translation[0] + dx, iso.translation[1])))
    rules = (SubstitutionRule(rule.parent, tuple(kids)),) + system.rules[1:]
    return dataclasses.replace(system, rules=rules)


@pytest.fixture
def corrupted_pinwheel(pinwheel):
    return shifted_child_system(pinwheel)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance") or sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} {detail}")
