"""Matrix and coefficient file formats.

Text matrix::

    PAULIDECOMP-MAT v1 N=<N>
    <re>±<im>j <re>±<im>j ...      (one row per line, 2**N rows)

The header line is optional when reading; without it ``N`` is inferred
from the row count.

Binary matrix: 8-byte magic ``b"PDMAT\\x00v1"``, ``N`` as little-endian
uint64, then ``2 * 4**N`` little-endian float64 values, row-major,
real and imaginary parts interleaved.

Coefficients: CSV with an optional ``# N=<N>`` line, then the header
``pauli,re,im`` and one record per string in ascending index order.
Floats use the shortest representation that round-trips exactly.

A path of ``"-"`` means stdin/stdout.
"""
from __future__ import annotations

import contextlib
import csv
import io
import math
import re
import struct
import sys
from pathlib import Path

import numpy as np

from .core import MAX_QUBITS, string_to_index
from .decompose import DenseMatrix, PauliDecomposition

TEXT_HEADER = "PAULIDECOMP-MAT v1 N={}"
BINARY_MAGIC = b"PDMAT\x00v1"
COEFF_HEADER = ["pauli", "re", "im"]

_HEADER_RE = re.compile(r"^PAULIDECOMP-MAT v1 N=(\d+)$")
_NQ_RE = re.compile(r"^#\s*N=(\d+)\s*$")
FORMATS = ("text", "binary")


class FormatError(ValueError):
    """Base class for malformed input files."""


class HeaderError(FormatError):
    pass


class DimensionError(FormatError):
    pass


class TruncatedError(FormatError):
    pass


class NonFiniteError(FormatError):
    pass


def format_complex(z: complex) -> str:
    re_, im = float(z.real), float(z.imag)
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"{re_!r}{sign}{abs(im)!r}j"


def parse_complex(token: str) -> complex:
    try:
        return complex(token)
    except ValueError:
        raise FormatError(f"cannot parse complex number {token!r}") from None


@contextlib.contextmanager
def _open_read(path, binary: bool):
    if str(path) == "-":
        yield sys.stdin.buffer if binary else sys.stdin
    else:
        with open(path, "rb" if binary else "r", newline=None if binary else "") as f:
            yield f


@contextlib.contextmanager
def _open_write(path, binary: bool):
    if str(path) == "-":
        stream = sys.stdout.buffer if binary else sys.stdout
        yield stream
        stream.flush()
    else:
        with open(path, "wb" if binary else "w", newline=None if binary else "") as f:
            yield f


def _check_qubits(num_qubits: int) -> int:
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise DimensionError(f"N={num_qubits} outside supported range [1, {MAX_QUBITS}]")
    return num_qubits


def _dim_to_qubits(dim: int) -> int:
    if dim < 2 or dim & (dim - 1):
        raise DimensionError(f"matrix dimension {dim} is not a power of two >= 2")
    return _check_qubits(dim.bit_length() - 1)


def _check_finite(values: np.ndarray) -> None:
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise NonFiniteError(f"non-finite value at element {bad}")


def parse_matrix_text(text: str) -> DenseMatrix:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    declared = None
    if lines and lines[0].startswith("PAULIDECOMP"):
        m = _HEADER_RE.match(lines[0])
        if not m:
            raise HeaderError(f"malformed header line {lines[0]!r}")
        declared = _check_qubits(int(m.group(1)))
        lines = lines[1:]
    if not lines:
        raise TruncatedError("matrix file has no rows")
    rows = [[parse_complex(tok) for tok in ln.split()] for ln in lines]
    if declared is not None:
        dim = 1 << declared
        if len(rows) < dim:
            raise TruncatedError(f"header declares {dim} rows, found {len(rows)}")
        if len(rows) > dim:
            raise DimensionError(f"header declares {dim} rows, found {len(rows)}")
    else:
        dim = len(rows)
    for j, row in enumerate(rows):
        if len(row) != len(rows):
            if declared is not None and len(row) < dim:
                raise TruncatedError(f"row {j} has {len(row)} entries, expected {dim}")
            raise DimensionError(
                f"row {j} has {len(row)} entries but there are {len(rows)} rows"
            )
    num_qubits = _dim_to_qubits(dim)
    a = np.array(rows, dtype=np.complex128)
    _check_finite(a.view(np.float64))
    return DenseMatrix(num_qubits, a)


def parse_matrix_binary(data: bytes) -> DenseMatrix:
    if len(data) < 16:
        raise TruncatedError(f"binary matrix shorter than its 16-byte header ({len(data)} bytes)")
    if data[:8] != BINARY_MAGIC:
        raise HeaderError(f"bad magic {data[:8]!r}, expected {BINARY_MAGIC!r}")
    (num_qubits,) = struct.unpack("<Q", data[8:16])
    _check_qubits(num_qubits)
    expected = 16 * 4**num_qubits
    payload = data[16:]
    if len(payload) < expected:
        raise TruncatedError(f"payload has {len(payload)} bytes, expected {expected}")
    if len(payload) > expected:
        raise DimensionError(f"payload has {len(payload) - expected} trailing bytes")
    values = np.frombuffer(payload, dtype="<f8")
    _check_finite(values)
    return DenseMatrix(num_qubits, values.astype(np.float64).view(np.complex128))


def read_matrix(path, format: str = "text") -> DenseMatrix:
    """Read a matrix file; raises a :class:`FormatError` subclass on bad input."""
    if format not in FORMATS:
        raise ValueError(f"unknown matrix format {format!r}")
    binary = format == "binary"
    with _open_read(path, binary) as f:
        data = f.read()
    return parse_matrix_binary(data) if binary else parse_matrix_text(data)


def dump_matrix_text(G: DenseMatrix) -> str:
    lines = [TEXT_HEADER.format(G.num_qubits)]
    lines.extend(" ".join(format_complex(z) for z in row) for row in G.elements)
    return "\n".join(lines) + "\n"


def dump_matrix_binary(G: DenseMatrix) -> bytes:
    payload = np.ascontiguousarray(G.elements).view(np.float64).astype("<f8").tobytes()
    return BINARY_MAGIC + struct.pack("<Q", G.num_qubits) + payload


def write_matrix(G: DenseMatrix, path, format: str = "text") -> None:
    if format not in FORMATS:
        raise ValueError(f"unknown matrix format {format!r}")
    binary = format == "binary"
    data = dump_matrix_binary(G) if binary else dump_matrix_text(G)
    with _open_write(path, binary) as f:
        f.write(data)


def dump_coefficients(d: PauliDecomposition, threshold: float = 0.0) -> tuple[str, int]:
    if threshold < 0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")
    buf = io.StringIO()
    buf.write(f"# N={d.num_qubits}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COEFF_HEADER)
    count = 0
    for label, c in d.terms(threshold):
        writer.writerow([label, repr(c.real), repr(c.imag)])
        count += 1
    return buf.getvalue(), count


def write_coefficients(d: PauliDecomposition, path, threshold: float = 0.0) -> int:
    """Write terms with ``|c| > threshold`` (all of them when it is 0); return the count."""
    text, count = dump_coefficients(d, threshold)
    with _open_write(path, False) as f:
        f.write(text)
    return count


def parse_coefficients(text: str, num_qubits: int | None = None) -> PauliDecomposition:
    lines = text.splitlines()
    declared = None
    while lines and lines[0].startswith("#"):
        m = _NQ_RE.match(lines[0])
        if m:
            declared = int(m.group(1))
        lines = lines[1:]
    if num_qubits is None:
        num_qubits = declared
    elif declared is not None and declared != num_qubits:
        raise DimensionError(f"file declares N={declared}, expected N={num_qubits}")
    rows = list(csv.reader(lines))
    if not rows or [h.strip() for h in rows[0]] != COEFF_HEADER:
        raise HeaderError(f"expected CSV header {','.join(COEFF_HEADER)!r}")
    records = [r for r in rows[1:] if r]
    for r in records:
        if len(r) != 3:
            raise FormatError(f"expected 3 fields, got {len(r)} in {','.join(r)!r}")
    lengths = {len(r[0]) for r in records}
    if len(lengths) > 1:
        raise DimensionError(f"inconsistent label lengths {sorted(lengths)}")
    if num_qubits is None:
        if not lengths:
            raise HeaderError("empty coefficient file without an N declaration")
        num_qubits = lengths.pop()
    elif lengths and lengths != {num_qubits}:
        raise DimensionError(f"labels of length {lengths.pop()} do not match N={num_qubits}")
    _check_qubits(num_qubits)
    d = PauliDecomposition.zeros(num_qubits)
    for label, re_, im in records:
        try:
            n = string_to_index(label, num_qubits)
            value = complex(float(re_), float(im))
        except ValueError as exc:
            raise FormatError(str(exc)) from None
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise NonFiniteError(f"non-finite coefficient for {label}")
        d.coefficients[n] = value
    return d


def read_coefficients(path, num_qubits: int | None = None) -> PauliDecomposition:
    with _open_read(path, False) as f:
        text = f.read()
    return parse_coefficients(text, num_qubits)
