"""Pure-numpy implementations of the hot kernels.

Same signatures as the compiled module ``_core``; used when the extension
is unavailable or when BPPSIM_PURE_PYTHON is set.
"""
import numpy as np

BACKEND = "python"


def config_energies(n, edges_u, edges_v, beta, alpha):
    """Energy of every spin configuration of an n-node model.

    Configuration c encodes node i's spin in bit i: bit 1 -> spin +1.
    Returns a float64 array of length 2**n.
    """
    m = 1 << n
    idx = np.arange(m, dtype=np.int64)
    h = np.zeros(m, dtype=np.float64)
    for u, v, b in zip(edges_u, edges_v, beta):
        su = (((idx >> int(u)) & 1) * 2 - 1).astype(np.float64)
        sv = (((idx >> int(v)) & 1) * 2 - 1).astype(np.float64)
        h += b * su * sv
    for i, a in enumerate(alpha):
        if a != 0.0:
            si = (((idx >> i) & 1) * 2 - 1).astype(np.float64)
            h += a * si
    return h


def glauber_chain(indptr, indices, weights, alpha, state, n_sweeps, uniforms, out):
    """Heat-bath Glauber dynamics with a systematic site schedule.

    ``state`` (int8, +-1) is updated in place, one full sweep per row of
    ``out`` (pass an empty out to burn in only).  ``uniforms`` must hold
    n_sweeps * n values in [0, 1).
    """
    n = state.shape[0]
    record = out.shape[0] > 0
    u = 0
    for sweep in range(n_sweeps):
        for i in range(n):
            field = alpha[i]
            for p in range(indptr[i], indptr[i + 1]):
                field += weights[p] * state[indices[p]]
            p_up = 1.0 / (1.0 + np.exp(-2.0 * field))
            state[i] = 1 if uniforms[u] < p_up else -1
            u += 1
        if record:
            out[sweep, :] = state
    return state
