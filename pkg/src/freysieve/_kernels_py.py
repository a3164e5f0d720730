"""Pure-Python (numpy) kernels: the import-time fallback for _kernels.

Same contracts as the compiled extension; anything here must stay
bit-identical to it (the test suite and `frey-sieve bench` compare them).
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"

_CLASS_MATRIX = None


def _class_matrix():
    global _CLASS_MATRIX
    if _CLASS_MATRIX is None:
        grid = np.indices((7,) * 5).reshape(5, -1).T
        _CLASS_MATRIX = np.ascontiguousarray(grid.astype(np.int64))
    return _CLASS_MATRIX


def legendre_table(q):
    """table[x] = 1/0/-1 for x a nonzero square / zero / non-square mod q."""
    t = -np.ones(q, dtype=np.int8)
    t[0] = 0
    sq = (np.arange(q, dtype=np.int64) ** 2) % q
    t[np.unique(sq[1:])] = 1
    return t


def traces_deg1(q, b2, b4, b6, table):
    """Traces over F_q of y^2 = 4x^3 + b2 x^2 + 2 b4 x + b6, one per row."""
    x = np.arange(q, dtype=np.int64)
    x2 = (x * x) % q
    x3 = (x2 * x) % q
    rhs = (4 * x3 + b2[:, None] * x2 + 2 * b4[:, None] * x + b6[:, None]) % q
    return -table[rhs].astype(np.int64).sum(axis=1)


def traces_deg2(q, alpha, beta, b2u, b2v, b4u, b4v, b6u, b6v, table, chunk=64):
    """Traces over F_{q^2} = F_q[t]/(t^2 - alpha t - beta), one per row.

    Elements are u + v t; squareness is tested through the norm
    u^2 + alpha u v - beta v^2 down in F_q.
    """
    idx = np.arange(q * q, dtype=np.int64)
    xu = idx // q
    xv = idx % q
    x2u = (xu * xu + beta * xv * xv) % q
    x2v = (xu * xv + xv * xu + alpha * xv * xv) % q
    x3u = (x2u * xu + beta * x2v * xv) % q
    x3v = (x2u * xv + x2v * xu + alpha * x2v * xv) % q
    n = len(b2u)
    out = np.empty(n, dtype=np.int64)
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        cb2u = b2u[lo:hi, None]
        cb2v = b2v[lo:hi, None]
        cb4u = (2 * b4u[lo:hi, None]) % q
        cb4v = (2 * b4v[lo:hi, None]) % q
        t1u = (cb2u * x2u + beta * cb2v * x2v) % q
        t1v = (cb2u * x2v + cb2v * x2u + alpha * cb2v * x2v) % q
        t2u = (cb4u * xu + beta * cb4v * xv) % q
        t2v = (cb4u * xv + cb4v * xu + alpha * cb4v * xv) % q
        ru = (4 * x3u + t1u + t2u + b6u[lo:hi, None]) % q
        rv = (4 * x3v + t1v + t2v + b6v[lo:hi, None]) % q
        nrm = (ru * ru + alpha * ru * rv - beta * rv * rv) % q
        out[lo:hi] = -table[nrm].astype(np.int64).sum(axis=1)
    return out


def survivor_mask(gens, offsets, sat):
    """Per-class pass mask for one sieve prime.

    gens: (g, 5) character values of the five generators; offsets: (g,)
    additive constants; sat: flat boolean table over (Z/7)^g in
    big-endian mixed radix.  Class order is lexicographic.
    """
    exps = _class_matrix()
    g = gens.shape[0]
    keys = np.zeros(len(exps), dtype=np.int64)
    for i in range(g):
        tau = (exps @ gens[i].astype(np.int64) + int(offsets[i])) % 7
        keys = keys * 7 + tau
    return sat[keys]
