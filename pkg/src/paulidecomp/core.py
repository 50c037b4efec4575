"""Pauli operator encoding, phase tables and constant-time bit utilities.

Operators are encoded as two-bit digits ``I=0, X=1, Y=2, Z=3`` and a Pauli
string on ``N`` qubits is the base-4 integer whose digit ``t`` is the
operator acting on qubit ``t``.  Qubit 0 is the rightmost character of a
label, so ``"XY"`` is index 6.

Phases are never stored as complex floats.  A phase ``i**p`` is carried as
the exponent ``p`` modulo 4, which keeps every product exact.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

MAX_QUBITS = 32

LABELS = "IXYZ"


class PauliOp(enum.IntEnum):
    I = 0
    X = 1
    Y = 2
    Z = 3

    @property
    def is_antidiagonal(self) -> bool:
        return self in (PauliOp.X, PauliOp.Y)

    @property
    def mask_bit(self) -> int:
        return int(self.is_antidiagonal)

    @property
    def matrix(self) -> np.ndarray:
        return PAULI_MATRICES[self]

    @property
    def label(self) -> str:
        return LABELS[self]


PAULI_MATRICES = {
    PauliOp.I: np.array([[1, 0], [0, 1]], dtype=complex),
    PauliOp.X: np.array([[0, 1], [1, 0]], dtype=complex),
    PauliOp.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    PauliOp.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}

# BETA_EXP[op][a] = p such that [op]_{a, a ^ mask_bit(op)} == 1j**p
BETA_EXP = np.array(
    [
        [0, 0],  # I
        [0, 0],  # X
        [3, 1],  # Y: -i, +i
        [0, 2],  # Z: +1, -1
    ],
    dtype=np.int64,
)

# RATIO_EXP[op] = p such that beta[op][1 - a] / beta[op][a] == 1j**p (always 0 or 2)
RATIO_EXP = np.array([0, 0, 2, 2], dtype=np.int64)

# (a + bi) * 1j**p  ==  (COS[p]*a - SIN[p]*b) + (SIN[p]*a + COS[p]*b) i
PHASE_COS = np.array([1.0, 0.0, -1.0, 0.0])
PHASE_SIN = np.array([0.0, 1.0, 0.0, -1.0])


@dataclass(frozen=True)
class PhaseFactor:
    """An exact fourth root of unity, ``1j ** power``."""

    power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "power", self.power & 3)

    @property
    def value(self) -> complex:
        return (1, 1j, -1, -1j)[self.power]

    def __mul__(self, other: "PhaseFactor") -> "PhaseFactor":
        if not isinstance(other, PhaseFactor):
            return NotImplemented
        return PhaseFactor(self.power + other.power)

    def __truediv__(self, other: "PhaseFactor") -> "PhaseFactor":
        if not isinstance(other, PhaseFactor):
            return NotImplemented
        return PhaseFactor(self.power - other.power)

    def __complex__(self) -> complex:
        return complex(self.value)


@dataclass(frozen=True)
class BetaTable:
    """Nonzero entries of the four Pauli matrices, keyed by row bit.

    ``beta[op][a]`` is the entry in row ``a`` of the column that row
    couples to, and ``ratio[op]`` is the sign picked up when that row bit
    flips.  Both are independent of which way the bit flips.
    """

    beta: tuple = field(
        default_factory=lambda: tuple(
            tuple(PhaseFactor(int(p)) for p in row) for row in BETA_EXP
        )
    )
    ratio: tuple = field(
        default_factory=lambda: tuple(PhaseFactor(int(p)) for p in RATIO_EXP)
    )


BETA = BetaTable()


def gray_code(k: int) -> int:
    """Reflected binary Gray code of ``k``."""
    return k ^ (k >> 1)


def inverse_gray_code(g: int) -> int:
    k = g
    shift = 1
    while g >> shift:
        k ^= g >> shift
        shift += 1
    return k


def flipped_bit_index(k: int) -> int:
    """Index of the bit that differs between ``gray_code(k)`` and ``gray_code(k+1)``.

    This is the trailing-zero count of ``k + 1``.
    """
    j = k + 1
    return (j & -j).bit_length() - 1


def pauli_digit(n: int, t: int, num_qubits: int = MAX_QUBITS) -> PauliOp:
    if not 0 <= t < num_qubits:
        raise ValueError(f"qubit index {t} out of range for {num_qubits} qubits")
    return PauliOp((n >> (2 * t)) & 3)


def xy_mask(n: int, num_qubits: int) -> int:
    """Bitmask with bit ``t`` set where the string has X or Y on qubit ``t``.

    Digits X=01 and Y=10 are exactly those whose two bits differ, so the mask
    is the XOR of the low and high bit planes of ``n`` compacted to one bit
    per qubit.
    """
    plane = (n ^ (n >> 1)) & _LOW_BITS[num_qubits]
    return _compact_even_bits(plane)


_LOW_BITS = [int("01" * q, 2) if q else 0 for q in range(MAX_QUBITS + 1)]


def _compact_even_bits(x: int) -> int:
    # inverse Morton spread: bits at even positions 2t -> position t
    x &= 0x5555555555555555
    x = (x | (x >> 1)) & 0x3333333333333333
    x = (x | (x >> 2)) & 0x0F0F0F0F0F0F0F0F
    x = (x | (x >> 4)) & 0x00FF00FF00FF00FF
    x = (x | (x >> 8)) & 0x0000FFFF0000FFFF
    x = (x | (x >> 16)) & 0x00000000FFFFFFFF
    return x


def y_count(n: int, num_qubits: int) -> int:
    """Number of Y operators in string ``n``."""
    plane = n & ~(n << 1) & (_LOW_BITS[num_qubits] << 1)
    return bin(plane).count("1")


def check_num_qubits(num_qubits: int) -> int:
    if not isinstance(num_qubits, (int, np.integer)) or isinstance(num_qubits, bool):
        raise TypeError(f"number of qubits must be an integer, got {num_qubits!r}")
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise ValueError(f"number of qubits must be in [1, {MAX_QUBITS}], got {num_qubits}")
    return int(num_qubits)


def check_index(n: int, num_qubits: int) -> int:
    if not 0 <= n < 4**num_qubits:
        raise ValueError(f"Pauli index {n} out of range for {num_qubits} qubits")
    return int(n)


def string_to_index(label: str, num_qubits: int | None = None) -> int:
    """Parse an ``IXYZ`` label; the rightmost character acts on qubit 0."""
    if num_qubits is None:
        num_qubits = len(label)
    if len(label) != num_qubits:
        raise ValueError(
            f"label {label!r} has {len(label)} characters, expected {num_qubits}"
        )
    n = 0
    for ch in label:
        digit = LABELS.find(ch)
        if digit < 0:
            raise ValueError(f"invalid Pauli character {ch!r} in label {label!r}")
        n = (n << 2) | digit
    return n


def index_to_string(n: int, num_qubits: int) -> str:
    check_index(n, num_qubits)
    return "".join(LABELS[(n >> (2 * t)) & 3] for t in reversed(range(num_qubits)))


@dataclass(frozen=True)
class PauliString:
    num_qubits: int
    index: int

    def __post_init__(self):
        check_num_qubits(self.num_qubits)
        check_index(self.index, self.num_qubits)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        return cls(len(label), string_to_index(label))

    @property
    def xy_mask(self) -> int:
        return xy_mask(self.index, self.num_qubits)

    @property
    def label(self) -> str:
        return index_to_string(self.index, self.num_qubits)

    @property
    def ops(self) -> tuple[PauliOp, ...]:
        """Operators ordered by qubit, qubit 0 first."""
        return tuple(pauli_digit(self.index, t, self.num_qubits) for t in range(self.num_qubits))

    def __str__(self) -> str:
        return self.label


@dataclass
class GrayCodeWalker:
    """Walks ``gray_code(0), ..., gray_code(2**N - 1)``.

    ``flipped_bit`` is the bit that changes on the *next* step.
    """

    num_qubits: int
    step: int = 0

    @property
    def code(self) -> int:
        return gray_code(self.step)

    @property
    def flipped_bit(self) -> int:
        return flipped_bit_index(self.step)

    @property
    def done(self) -> bool:
        return self.step >= (1 << self.num_qubits) - 1

    def advance(self) -> int:
        t = self.flipped_bit
        self.step += 1
        return t

    def __iter__(self) -> Iterator[tuple[int, int]]:
        """Yield ``(code, flipped_bit)``; the final flipped bit is -1."""
        while True:
            if self.done:
                yield self.code, -1
                return
            yield self.code, self.flipped_bit
            self.step += 1
