"""Shared, session-scoped fixtures; models are expensive, so they are built once."""
from __future__ import annotations

import pytest

from phipoisson.cohomology import build_slice
from phipoisson.poisson import solve_phi_poisson
from phipoisson.report import DEFAULT_INSTANCES, InstanceSpec, algebra, instance_model

BY_LEVEL = {l: (a, n, l) for a, n, l in DEFAULT_INSTANCES}

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def get_algebra():
    return algebra


@pytest.fixture(scope="session")
def get_model():
    def make(name: str, node: int, l: int):
        return instance_model(InstanceSpec(name, node, l))
    return make


@pytest.fixture(scope="session")
def solutions(get_model):
    """Solver output per level l = 2..6 on the default instances."""
    return {l: solve_phi_poisson(get_model(*inst)) for l, inst in BY_LEVEL.items()}


@pytest.fixture(scope="session")
def slices(get_model, solutions):
    """d_s complexes per level l = 3..6, one per solution branch."""
    return {l: [build_slice(get_model(*BY_LEVEL[l]), s) for s in solutions[l]] for l in (3, 4, 5, 6)}


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
