# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: point-count inner loops and the unit-class sweep.

Hot paths of the sieves; the numpy module _kernels_py implements the same
contracts and is selected instead when this extension is unavailable.
"""

import numpy as np

BACKEND = "compiled"


def legendre_table(int q):
    t = -np.ones(q, dtype=np.int8)
    cdef signed char[:] tv = t
    cdef long long x
    tv[0] = 0
    for x in range(1, q):
        tv[(x * x) % q] = 1
    return t


def traces_deg1(int q, b2, b4, b6, table):
    cdef long long[:] b2v = np.ascontiguousarray(b2, dtype=np.int64)
    cdef long long[:] b4v = np.ascontiguousarray(b4, dtype=np.int64)
    cdef long long[:] b6v = np.ascontiguousarray(b6, dtype=np.int64)
    cdef signed char[:] tab = table
    cdef Py_ssize_t n = b2v.shape[0]
    out = np.empty(n, dtype=np.int64)
    cdef long long[:] ov = out
    cdef Py_ssize_t i
    cdef long long x, rhs, s, c2, c4, c6
    with nogil:
        for i in range(n):
            c2 = b2v[i] % q
            c4 = (2 * b4v[i]) % q
            c6 = b6v[i] % q
            s = 0
            for x in range(q):
                rhs = (((4 * x + c2) * x + c4) % q * x + c6) % q
                s += tab[rhs]
            ov[i] = -s
    return out


def traces_deg2(int q, int alpha, int beta, b2u, b2v, b4u, b4v, b6u, b6v, table):
    cdef long long[:] c2u = np.ascontiguousarray(b2u, dtype=np.int64)
    cdef long long[:] c2v = np.ascontiguousarray(b2v, dtype=np.int64)
    cdef long long[:] c4u = np.ascontiguousarray(b4u, dtype=np.int64)
    cdef long long[:] c4v = np.ascontiguousarray(b4v, dtype=np.int64)
    cdef long long[:] c6u = np.ascontiguousarray(b6u, dtype=np.int64)
    cdef long long[:] c6v = np.ascontiguousarray(b6v, dtype=np.int64)
    cdef signed char[:] tab = table
    cdef Py_ssize_t n = c2u.shape[0]
    out = np.empty(n, dtype=np.int64)
    cdef long long[:] ov = out
    # precompute x^2 and x^3 component grids over the q^2 elements u + v t
    x2u_a = np.empty(q * q, dtype=np.int64)
    x2v_a = np.empty(q * q, dtype=np.int64)
    x3u_a = np.empty(q * q, dtype=np.int64)
    x3v_a = np.empty(q * q, dtype=np.int64)
    cdef long long[:] x2u = x2u_a
    cdef long long[:] x2v = x2v_a
    cdef long long[:] x3u = x3u_a
    cdef long long[:] x3v = x3v_a
    cdef Py_ssize_t i, k
    cdef long long u, v, au, av, bu, bv, t1u, t1v, t2u, t2v, ru, rv, nrm, s
    cdef long long e2u, e2v, e4u, e4v, e6u, e6v
    with nogil:
        k = 0
        for u in range(q):
            for v in range(q):
                au = (u * u + beta * v * v) % q
                av = (2 * u * v + alpha * v * v) % q
                x2u[k] = au
                x2v[k] = av
                x3u[k] = (au * u + beta * av * v) % q
                x3v[k] = (au * v + av * u + alpha * av * v) % q
                k += 1
        for i in range(n):
            e2u = c2u[i] % q
            e2v = c2v[i] % q
            e4u = (2 * c4u[i]) % q
            e4v = (2 * c4v[i]) % q
            e6u = c6u[i] % q
            e6v = c6v[i] % q
            s = 0
            k = 0
            for u in range(q):
                for v in range(q):
                    t1u = (e2u * x2u[k] + beta * e2v * x2v[k]) % q
                    t1v = (e2u * x2v[k] + e2v * x2u[k] + alpha * e2v * x2v[k]) % q
                    t2u = (e4u * u + beta * e4v * v) % q
                    t2v = (e4u * v + e4v * u + alpha * e4v * v) % q
                    ru = (4 * x3u[k] + t1u + t2u + e6u) % q
                    rv = (4 * x3v[k] + t1v + t2v + e6v) % q
                    nrm = (ru * ru + alpha * ru * rv + (q - beta) * rv * rv) % q
                    s += tab[nrm]
                    k += 1
            ov[i] = -s
    return out


def survivor_mask(gens, offsets, sat):
    cdef long long[:, :] gv = np.ascontiguousarray(gens, dtype=np.int64)
    cdef long long[:] off = np.ascontiguousarray(offsets, dtype=np.int64)
    satc = np.ascontiguousarray(sat, dtype=np.uint8)
    cdef unsigned char[:] sv = satc
    cdef Py_ssize_t g = gv.shape[0]
    out = np.zeros(16807, dtype=bool)
    cdef unsigned char[:] ov = out.view(np.uint8)
    cdef long long e2, e3, e4, e5, e6, key, tau
    cdef Py_ssize_t i, idx
    with nogil:
        idx = 0
        for e2 in range(7):
            for e3 in range(7):
                for e4 in range(7):
                    for e5 in range(7):
                        for e6 in range(7):
                            key = 0
                            for i in range(g):
                                tau = (
                                    e2 * gv[i, 0]
                                    + e3 * gv[i, 1]
                                    + e4 * gv[i, 2]
                                    + e5 * gv[i, 3]
                                    + e6 * gv[i, 4]
                                    + off[i]
                                ) % 7
                                key = key * 7 + tau
                            ov[idx] = sv[key]
                            idx += 1
    return out
