"""Pauli-basis coefficients of dense complex matrices.

``coeff_fast`` evaluates one coefficient by walking the ``2**N`` columns in
Gray-code order, touching only the single nonzero entry of the Pauli string
in each column and updating the phase with one table lookup per step.
``coeff_slow`` visits the same terms in the same order but rebuilds the
phase from scratch each time; ``oracle_coeff_kron`` builds the Pauli
string explicitly and takes the trace.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterator

import numpy as np

from . import _kernels
from .core import (
    PAULI_MATRICES,
    PauliOp,
    check_index,
    check_num_qubits,
    index_to_string,
    string_to_index,
)

ORACLE_MAX_QUBITS = 6


@dataclass
class MultiplicationCounter:
    """Tally of multiplications reported by the instrumented kernels."""

    count: int = 0

    def add(self, n: int) -> None:
        self.count += int(n)


@dataclass(frozen=True, eq=False)
class DenseMatrix:
    """A ``2**N x 2**N`` complex matrix stored row-major."""

    num_qubits: int
    elements: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_num_qubits(self.num_qubits)
        dim = 1 << self.num_qubits
        elements = np.ascontiguousarray(self.elements, dtype=np.complex128)
        if elements.size != dim * dim:
            raise ValueError(
                f"expected {dim * dim} elements for {self.num_qubits} qubits, got {elements.size}"
            )
        elements = elements.reshape(dim, dim)
        object.__setattr__(self, "elements", elements)

    @classmethod
    def from_array(cls, array) -> "DenseMatrix":
        a = np.asarray(array)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        dim = a.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise ValueError(f"matrix dimension {dim} is not a power of two >= 2")
        return cls(dim.bit_length() - 1, a)

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    @property
    def flat(self) -> np.ndarray:
        return self.elements.reshape(-1)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.elements, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.num_qubits == other.num_qubits and np.array_equal(
            self.elements, other.elements
        )


def as_dense_matrix(G) -> DenseMatrix:
    if isinstance(G, DenseMatrix):
        return G
    return DenseMatrix.from_array(G)


@dataclass(frozen=True, eq=False)
class PauliDecomposition:
    """The ``4**N`` coefficients of a matrix, indexed by Pauli string index."""

    num_qubits: int
    coefficients: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_num_qubits(self.num_qubits)
        c = np.ascontiguousarray(self.coefficients, dtype=np.complex128).reshape(-1)
        if c.size != 4**self.num_qubits:
            raise ValueError(
                f"expected {4**self.num_qubits} coefficients for {self.num_qubits} qubits, got {c.size}"
            )
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def zeros(cls, num_qubits: int) -> "PauliDecomposition":
        return cls(num_qubits, np.zeros(4**num_qubits, dtype=np.complex128))

    @classmethod
    def from_terms(cls, num_qubits: int, terms) -> "PauliDecomposition":
        """Build from ``{label: coefficient}`` or ``(label, coefficient)`` pairs."""
        d = cls.zeros(num_qubits)
        items = terms.items() if hasattr(terms, "items") else terms
        for label, value in items:
            d.coefficients[string_to_index(label, num_qubits)] += value
        return d

    def __getitem__(self, key) -> complex:
        if isinstance(key, str):
            key = string_to_index(key, self.num_qubits)
        return complex(self.coefficients[key])

    def __len__(self) -> int:
        return self.coefficients.size

    def __eq__(self, other):
        if not isinstance(other, PauliDecomposition):
            return NotImplemented
        return self.num_qubits == other.num_qubits and np.array_equal(
            self.coefficients, other.coefficients
        )

    def terms(self, threshold: float = 0.0) -> Iterator[tuple[str, complex]]:
        """Yield ``(label, c)`` in index order, skipping ``|c| <= threshold``.

        A threshold of exactly zero yields every term.
        """
        for n, c in enumerate(self.coefficients):
            if threshold == 0 or abs(c) > threshold:
                yield index_to_string(n, self.num_qubits), complex(c)


def _prepare(G, n=None):
    G = as_dense_matrix(G)
    if n is not None:
        check_index(n, G.num_qubits)
    return G


def coeff_fast(G, n: int, counter: MultiplicationCounter | None = None) -> complex:
    """Coefficient of Pauli string ``n`` in ``G``, in ``O(2**N)`` time and ``O(1)`` memory."""
    G = _prepare(G, n)
    c, mults = _kernels.coeff_fast(G.flat, G.num_qubits, n)
    if counter is not None:
        counter.add(mults)
    return c


def coeff_slow(G, n: int, counter: MultiplicationCounter | None = None) -> complex:
    """Reference path for :func:`coeff_fast`; rebuilds each phase in ``O(N)``.

    Bitwise identical to ``coeff_fast``.
    """
    G = _prepare(G, n)
    c, mults = _kernels.coeff_slow(G.flat, G.num_qubits, n)
    if counter is not None:
        counter.add(mults)
    return c


def pauli_string_matrix(n: int, num_qubits: int) -> np.ndarray:
    """Explicit ``2**N x 2**N`` matrix of string ``n`` (qubit 0 is the last Kronecker factor)."""
    check_index(n, num_qubits)
    factors = [
        PAULI_MATRICES[PauliOp((n >> (2 * t)) & 3)] for t in reversed(range(num_qubits))
    ]
    return reduce(np.kron, factors)


def oracle_coeff_kron(G, n: int) -> complex:
    """Ground truth ``Tr(P_n G) / 2**N`` via explicit Kronecker products."""
    G = _prepare(G, n)
    if G.num_qubits > ORACLE_MAX_QUBITS:
        raise ValueError(
            f"Kronecker oracle is limited to {ORACLE_MAX_QUBITS} qubits, got {G.num_qubits}"
        )
    P = pauli_string_matrix(n, G.num_qubits)
    return complex(np.trace(P @ G.elements) / G.dim)


def oracle_decompose_kron(G) -> PauliDecomposition:
    G = _prepare(G)
    return PauliDecomposition(
        G.num_qubits,
        np.array([oracle_coeff_kron(G, n) for n in range(4**G.num_qubits)]),
    )


def _allocate(num_qubits: int) -> np.ndarray:
    try:
        return np.empty(4**num_qubits, dtype=np.complex128)
    except (MemoryError, ValueError) as exc:
        raise MemoryError(
            f"cannot allocate {4**num_qubits} coefficients for {num_qubits} qubits"
        ) from exc


def decompose_parallel(
    G, threads: int = 1, counter: MultiplicationCounter | None = None
) -> PauliDecomposition:
    """All coefficients via :func:`coeff_fast`, split over ``threads`` workers.

    Each worker owns one contiguous block of string indices, so the result
    does not depend on the thread count.
    """
    G = _prepare(G)
    if threads < 1:
        raise ValueError(f"threads must be >= 1, got {threads}")
    total = 4**G.num_qubits
    out = _allocate(G.num_qubits)
    chunk = max(1, math.ceil(total / threads))
    bounds = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
    flat = G.flat
    if len(bounds) == 1:
        mults = [_kernels.fill_fast(flat, G.num_qubits, out, 0, total)]
    else:
        with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
            mults = list(
                pool.map(
                    lambda b: _kernels.fill_fast(flat, G.num_qubits, out, b[0], b[1]),
                    bounds,
                )
            )
    if counter is not None:
        counter.add(sum(mults))
    return PauliDecomposition(G.num_qubits, out)


def decompose_slow(G, counter: MultiplicationCounter | None = None) -> PauliDecomposition:
    G = _prepare(G)
    out = _allocate(G.num_qubits)
    mults = _kernels.fill_slow(G.flat, G.num_qubits, out, 0, out.size)
    if counter is not None:
        counter.add(mults)
    return PauliDecomposition(G.num_qubits, out)


def decompose_serial_quaternary(
    G, counter: MultiplicationCounter | None = None
) -> PauliDecomposition:
    """All coefficients, visiting strings in modular base-4 Gray-code order.

    Consecutive strings differ in one operator, so the XY mask and the
    column-0 phase are carried forward instead of rebuilt for every string.
    """
    G = _prepare(G)
    out = _allocate(G.num_qubits)
    mults = _kernels.fill_serial_quaternary(G.flat, G.num_qubits, out)
    if counter is not None:
        counter.add(mults)
    return PauliDecomposition(G.num_qubits, out)


def quaternary_visit_order(num_qubits: int) -> np.ndarray:
    """Rows of ``(n, xy_mask, column-0 phase exponent)`` in serial visit order."""
    check_num_qubits(num_qubits)
    return _kernels.quaternary_sequence(num_qubits)


def decompose(G, threads: int = 1, serial: bool = False) -> PauliDecomposition:
    if serial:
        return decompose_serial_quaternary(G)
    return decompose_parallel(G, threads)


def recompose(d: PauliDecomposition) -> DenseMatrix:
    """``sum_n c_n P_n`` without building any ``P_n``."""
    dim = 1 << d.num_qubits
    try:
        out = np.zeros(dim * dim, dtype=np.complex128)
    except (MemoryError, ValueError) as exc:
        raise MemoryError(f"cannot allocate a {dim}x{dim} matrix") from exc
    _kernels.accumulate_strings(d.coefficients, d.num_qubits, out)
    return DenseMatrix(d.num_qubits, out)
