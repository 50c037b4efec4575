"""Compiled inner loops.

Every kernel takes the matrix as a flat, row-major complex128 array where
entry ``(row, col)`` lives at ``row * 2**N + col``.  Phases are integer
exponents of ``1j`` and are applied through the ``_COS``/``_SIN`` tables,
so every path that visits the same terms in the same order produces the
same floating point result.

Kernels also return the number of multiplications they performed:
one per phase product (beta or ratio lookup folded into the running
phase), one per phase-times-matrix-element product, one for the final
``2**-N`` scaling.
"""
import numpy as np
from numba import njit

from .core import BETA_EXP, PHASE_COS, PHASE_SIN, RATIO_EXP

_BETA0 = np.ascontiguousarray(BETA_EXP[:, 0])
_BETA = np.ascontiguousarray(BETA_EXP)
_RATIO = np.ascontiguousarray(RATIO_EXP)
_COS = PHASE_COS.copy()
_SIN = PHASE_SIN.copy()

_DEBRUIJN = np.uint64(0x03F79D71B4CB0A89)
_DEBRUIJN_TABLE = np.zeros(64, dtype=np.int64)
for _t in range(64):
    _DEBRUIJN_TABLE[((int(_DEBRUIJN) << _t) & 0xFFFFFFFFFFFFFFFF) >> 58] = _t


@njit(cache=True, nogil=True)
def trailing_zeros(x):
    """Trailing zero count of a positive 64-bit integer, branch and loop free."""
    v = np.uint64(x)
    low = v & (~v + np.uint64(1))
    return _DEBRUIJN_TABLE[np.int64((low * _DEBRUIJN) >> np.uint64(58))]


@njit(cache=True, nogil=True)
def string_mask_phase(num_qubits, n):
    """XY mask of string ``n`` and exponent of its phase at column 0."""
    mask = 0
    p = 0
    for t in range(num_qubits):
        op = (n >> (2 * t)) & 3
        mask |= ((op ^ (op >> 1)) & 1) << t
        p += _BETA0[op]
    return mask, p & 3


@njit(cache=True, nogil=True)
def _walk(g, num_qubits, n, mask, p):
    # sum_i lambda_i * G[i ^ mask, i] over i in Gray-code order
    dim = 1 << num_qubits
    sr = 0.0
    si = 0.0
    i = 0
    for k in range(dim - 1):
        v = g[((i ^ mask) << num_qubits) | i]
        c = _COS[p]
        s = _SIN[p]
        sr += c * v.real - s * v.imag
        si += s * v.real + c * v.imag
        t = trailing_zeros(k + 1)
        p = (p + _RATIO[(n >> (2 * t)) & 3]) & 3
        i ^= 1 << t
    v = g[((i ^ mask) << num_qubits) | i]
    c = _COS[p]
    s = _SIN[p]
    sr += c * v.real - s * v.imag
    si += s * v.real + c * v.imag
    return sr, si, 2 * dim - 1


@njit(cache=True, nogil=True)
def coeff_fast(g, num_qubits, n):
    mask, p = string_mask_phase(num_qubits, n)
    sr, si, mults = _walk(g, num_qubits, n, mask, p)
    scale = 1.0 / (1 << num_qubits)
    return complex(sr * scale, si * scale), num_qubits + mults + 1


@njit(cache=True, nogil=True)
def coeff_slow(g, num_qubits, n):
    # same visit order as coeff_fast, but the phase is rebuilt from all N
    # factors at every column
    dim = 1 << num_qubits
    mask, _ = string_mask_phase(num_qubits, n)
    mults = 0
    sr = 0.0
    si = 0.0
    for k in range(dim):
        i = k ^ (k >> 1)
        p = 0
        for t in range(num_qubits):
            p += _BETA[(n >> (2 * t)) & 3, (i >> t) & 1]
        mults += num_qubits
        p &= 3
        v = g[((i ^ mask) << num_qubits) | i]
        c = _COS[p]
        s = _SIN[p]
        sr += c * v.real - s * v.imag
        si += s * v.real + c * v.imag
        mults += 1
    scale = 1.0 / dim
    return complex(sr * scale, si * scale), mults + 1


@njit(cache=True, nogil=True)
def fill_fast(g, num_qubits, out, start, stop):
    mults = 0
    for n in range(start, stop):
        c, m = coeff_fast(g, num_qubits, n)
        out[n] = c
        mults += m
    return mults


@njit(cache=True, nogil=True)
def fill_slow(g, num_qubits, out, start, stop):
    mults = 0
    for n in range(start, stop):
        c, m = coeff_slow(g, num_qubits, n)
        out[n] = c
        mults += m
    return mults


@njit(cache=True, nogil=True)
def quaternary_step(num_qubits, k, n, mask, p0):
    """Advance the modular base-4 Gray code from visit ``k`` to ``k + 1``.

    Exactly one digit ``t`` (half the trailing zero count of ``k + 1``) is
    incremented mod 4.  The XY mask flips at ``t`` unless the move is Z->I
    or X->Y, and the column-0 phase is corrected by one beta ratio.
    """
    t = trailing_zeros(k + 1) >> 1
    old = (n >> (2 * t)) & 3
    new = (old + 1) & 3
    n ^= (old ^ new) << (2 * t)
    mask ^= ((~old) & 1) << t
    p0 = (p0 + _BETA0[new] - _BETA0[old]) & 3
    return n, mask, p0


@njit(cache=True, nogil=True)
def fill_serial_quaternary(g, num_qubits, out):
    total = 1 << (2 * num_qubits)
    scale = 1.0 / (1 << num_qubits)
    n = 0
    mask = 0
    p0 = 0
    mults = 0
    for k in range(total):
        sr, si, m = _walk(g, num_qubits, n, mask, p0)
        out[n] = complex(sr * scale, si * scale)
        mults += m + 1
        if k + 1 < total:
            n, mask, p0 = quaternary_step(num_qubits, k, n, mask, p0)
            mults += 1
    return mults


@njit(cache=True, nogil=True)
def quaternary_sequence(num_qubits):
    total = 1 << (2 * num_qubits)
    seq = np.empty((total, 3), dtype=np.int64)
    n = 0
    mask = 0
    p0 = 0
    for k in range(total):
        seq[k, 0] = n
        seq[k, 1] = mask
        seq[k, 2] = p0
        if k + 1 < total:
            n, mask, p0 = quaternary_step(num_qubits, k, n, mask, p0)
    return seq


@njit(cache=True, nogil=True)
def accumulate_strings(coeffs, num_qubits, out):
    # out[i, i ^ mask] += c_n * lambda_i, the nonzero entry of P_n in row i
    dim = 1 << num_qubits
    for n in range(coeffs.shape[0]):
        cn = coeffs[n]
        if cn == 0:
            continue
        mask, p = string_mask_phase(num_qubits, n)
        i = 0
        for k in range(dim):
            c = _COS[p]
            s = _SIN[p]
            idx = (i << num_qubits) | (i ^ mask)
            out[idx] += complex(c * cn.real - s * cn.imag, s * cn.real + c * cn.imag)
            if k + 1 < dim:
                t = trailing_zeros(k + 1)
                p = (p + _RATIO[(n >> (2 * t)) & 3]) & 3
                i ^= 1 << t
