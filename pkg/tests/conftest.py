from __future__ import annotations

import pytest

from dhzeros import characters as ch
from dhzeros.dh import build_dh
from dhzeros.zeros import SearchRect, find_zeros, mirror_check

_acceptance: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _acceptance.setdefault(mark.args[0], []).append((item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        results = _acceptance[n]
        ok = all(o == "passed" for _, o in results)
        failed = [name for name, o in results if o != "passed"]
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  ({len(results)} check(s))"
        if failed:
            line += "  failing: " + ", ".join(failed)
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def chi5():
    """The mod-5 character with chi(2) = i."""
    chi = ch.get_character(5, 1)
    assert chi(2) == 1j
    return chi


@pytest.fixture(scope="session")
def chi7():
    """The odd order-6 character mod 7 with chi(3) = exp(i pi / 3)."""
    return ch.get_character(7, 1)


@pytest.fixture(scope="session")
def spec5(chi5):
    return build_dh(chi5)


@pytest.fixture(scope="session")
def spec7(chi7):
    return build_dh(chi7)


@pytest.fixture(scope="session")
def f5(spec5):
    return spec5.evaluator()


WINDOW_80 = SearchRect(-1, 2, 80, 90)
WINDOW_85 = SearchRect(-1, 2, 85, 86.5)
WINDOW_176 = SearchRect(-1, 2, 174, 179)
EMPTY = SearchRect(4, 6, 0, 10)


@pytest.fixture(scope="session")
def zeros_80(f5):
    return find_zeros(f5, WINDOW_80)


@pytest.fixture(scope="session")
def zeros_176(f5):
    return find_zeros(f5, WINDOW_176)


def off_line_pair(f, records):
    """First zero right of the critical line, with its mirror attached."""
    right = [z for z in records if z.location.real - 0.5 > 0.05]
    assert right, "no off-line zero found"
    return mirror_check(f, right[0])


@pytest.fixture(scope="session")
def pair_176(f5, zeros_176):
    z = off_line_pair(f5, zeros_176)
    return z.location, z.mirror


@pytest.fixture(scope="session")
def pair_85(f5, zeros_80):
    z = off_line_pair(f5, zeros_80)
    return z.location, z.mirror
