# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: exact-enumeration energies and Glauber sweeps."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp

BACKEND = "cython"


def config_energies(int n, long[:] edges_u, long[:] edges_v,
                    double[:] beta, double[:] alpha):
    cdef long m = 1 << n
    cdef cnp.ndarray[cnp.float64_t, ndim=1] h = np.zeros(m, dtype=np.float64)
    cdef double[:] hv = h
    cdef long c, e, i
    cdef long n_edges = edges_u.shape[0]
    cdef double acc
    cdef int su, sv
    for c in range(m):
        acc = 0.0
        for e in range(n_edges):
            su = 2 * ((c >> edges_u[e]) & 1) - 1
            sv = 2 * ((c >> edges_v[e]) & 1) - 1
            acc += beta[e] * su * sv
        for i in range(n):
            acc += alpha[i] * (2 * ((c >> i) & 1) - 1)
        hv[c] = acc
    return h


def glauber_chain(long[:] indptr, long[:] indices, double[:] weights,
                  double[:] alpha, cnp.int8_t[:] state, long n_sweeps,
                  double[:] uniforms, cnp.int8_t[:, :] out):
    cdef long n = state.shape[0]
    cdef bint record = out.shape[0] > 0
    cdef long u = 0, sweep, i, p
    cdef double field, p_up
    for sweep in range(n_sweeps):
        for i in range(n):
            field = alpha[i]
            for p in range(indptr[i], indptr[i + 1]):
                field += weights[p] * state[indices[p]]
            p_up = 1.0 / (1.0 + exp(-2.0 * field))
            state[i] = 1 if uniforms[u] < p_up else -1
            u += 1
        if record:
            for i in range(n):
                out[sweep, i] = state[i]
    return np.asarray(state)
