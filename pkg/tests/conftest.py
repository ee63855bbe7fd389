import math

import numpy as np
import pytest
from hypothesis import strategies as st

from qdram.qcore import DensityMatrix, QubitState, make_qubit

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
angles = st.floats(min_value=-4 * math.pi, max_value=4 * math.pi, allow_nan=False)
unit = st.floats(min_value=0.0, max_value=1.0)


@st.composite
def qubits(draw) -> QubitState:
    theta = draw(st.floats(min_value=0.0, max_value=math.pi))
    phi = draw(st.floats(min_value=0.0, max_value=2 * math.pi))
    glob = draw(st.floats(min_value=0.0, max_value=2 * math.pi))
    g = complex(math.cos(glob), math.sin(glob))
    return make_qubit(g * math.cos(theta / 2), g * math.sin(theta / 2) * complex(math.cos(phi), math.sin(phi)))


@st.composite
def densities(draw) -> DensityMatrix:
    """Random valid density matrix from a Bloch vector of length <= 1."""
    r = draw(unit)
    theta = draw(st.floats(min_value=0.0, max_value=math.pi))
    phi = draw(st.floats(min_value=0.0, max_value=2 * math.pi))
    x, y, z = r * math.sin(theta) * math.cos(phi), r * math.sin(theta) * math.sin(phi), r * math.cos(theta)
    off = complex(x, -y) / 2
    return DensityMatrix(complex((1 + z) / 2), off, off.conjugate(), complex((1 - z) / 2))


def random_qubits(rng: np.random.Generator, n: int) -> list[QubitState]:
    """Haar-random pure states with random global phase."""
    v = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    return [make_qubit(a, b) for a, b in v]


def random_density_arrays(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform-in-ball Bloch vectors as (n, 2, 2) arrays."""
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    v *= rng.random((n, 1)) ** (1 / 3)
    x, y, z = v.T
    rho = np.empty((n, 2, 2), dtype=complex)
    rho[:, 0, 0] = (1 + z) / 2
    rho[:, 1, 1] = (1 - z) / 2
    rho[:, 0, 1] = (x - 1j * y) / 2
    rho[:, 1, 0] = (x + 1j * y) / 2
    return rho


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def record(name: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
