import numpy as np
import pytest


def random_complex(rng, num_qubits):
    dim = 1 << num_qubits
    return rng.uniform(-1, 1, (dim, dim)) + 1j * rng.uniform(-1, 1, (dim, dim))


def random_hermitian(rng, num_qubits):
    A = random_complex(rng, num_qubits)
    return (A + A.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(20231019)


CRITERIA = []


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for ok, name, detail in CRITERIA:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
