"""Radix-q fast Fourier transform for lengths q^L.

The butterflies follow the Cooley-Tukey decimation-in-time recursion with
branching factor q, vectorized over leading batch axes so that 2-D grids
transform one axis at a time.  ``naive_dft`` is the quadratic oracle the
fast path is tested against.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


def exponent_of(n: int, q: int) -> int:
    """L with n = q^L, or raise."""
    if n < 1:
        raise ValueError("length must be positive")
    L = 0
    while n % q == 0:
        n //= q
        L += 1
    if n != 1:
        raise ValueError(f"length is not a power of {q}")
    return L


@lru_cache(maxsize=None)
def _roots(q: int, n: int, sign: int) -> np.ndarray:
    return np.exp(sign * 2j * np.pi * np.arange(n) / n)


def fft_radix_q(x: np.ndarray, q: int, sign: int = -1) -> np.ndarray:
    """DFT along the last axis: X[k] = sum_j x[j] exp(sign 2 pi i jk / n).

    The length of the last axis must be a power of q.  No 1/n factor is
    applied in either direction.
    """
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[-1]
    exponent_of(n, q)
    if sign not in (-1, 1):
        raise ValueError("sign must be -1 or +1")
    return _fft_rec(x, q, sign)


def _fft_rec(x: np.ndarray, q: int, sign: int) -> np.ndarray:
    n = x.shape[-1]
    if n == 1:
        return x.copy()
    m = n // q
    # transform the q decimated subsequences, each of length m
    sub = np.stack([_fft_rec(x[..., r::q], q, sign) for r in range(q)], axis=-2)
    # combine: X[k + t m] = sum_r w_n^{r (k + t m)} sub[r, k]
    w_n = _roots(q, n, sign)
    k = np.arange(m)
    out_parts = []
    w_q = _roots(q, q, sign)
    for t in range(q):
        tw = w_n[(k * np.arange(q)[:, None]) % n] * w_q[(t * np.arange(q)) % q][:, None]
        out_parts.append(np.einsum("...rk,rk->...k", sub, tw))
    return np.concatenate(out_parts, axis=-1)


def naive_dft(x: np.ndarray, sign: int = -1) -> np.ndarray:
    """Quadratic-time DFT along the last axis (test oracle)."""
    x = np.asarray(x, dtype=np.complex128)
    n = x.shape[-1]
    jk = np.outer(np.arange(n), np.arange(n))
    mat = np.exp(sign * 2j * np.pi * jk / n)
    return x @ mat


def fft2_radix_q(grid: np.ndarray, q: int, sign: int = -1) -> np.ndarray:
    """2-D transform of a q^L x q^L grid (both axes)."""
    out = fft_radix_q(grid, q, sign)           # along axis 1
    out = fft_radix_q(out.T, q, sign).T         # along axis 0
    return out
