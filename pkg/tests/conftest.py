import functools

import pytest

from curvecx import complexes as cx
from curvecx import normalcurves as nc
from curvecx import triangulation as tr
from curvecx.surface import SurfaceSig


@functools.lru_cache(maxsize=None)
def reference(name):
    return tr.build_reference(SurfaceSig.parse(name))


@functools.lru_cache(maxsize=None)
def curves(name, bound):
    return tuple(nc.enumerate_vertices(reference(name), bound))


@functools.lru_cache(maxsize=None)
def snapshot(name, bound, lazy=False):
    return cx.build_snapshot(SurfaceSig.parse(name), bound, lazy=lazy)


@pytest.fixture
def ref():
    return reference


@pytest.fixture
def vertices():
    return curves


@pytest.fixture
def snap():
    return snapshot


ACCEPTANCE_LINES = []


def _criterion_key(line):
    label = line.split()[2].rstrip(":")
    digits = "".join(ch for ch in label if ch.isdigit())
    return int(digits), label


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=_criterion_key):
            terminalreporter.write_line(line)
