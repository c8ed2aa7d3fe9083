# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled trajectory-sampling kernel.

Semantics match qsteer._mc_numpy.simulate_batch exactly; see that module
for the contract. The hot loop here is trajectories x rounds x d.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline Py_ssize_t _pick(const double* cdf, Py_ssize_t d, double u) noexcept nogil:
    cdef Py_ssize_t j
    for j in range(d):
        if u < cdf[j]:
            return j
    return d - 1


def simulate_batch(const double[:, ::1] uniforms,
                   const double[::1] init_cdf,
                   const double[:, ::1] phi_to_theta_cdf,
                   const double[:, ::1] theta_to_phi_cdf,
                   const unsigned char[::1] is_target,
                   Py_ssize_t rounds):
    cdef Py_ssize_t n = uniforms.shape[0]
    cdef Py_ssize_t d = init_cdf.shape[0]
    if uniforms.shape[1] != 2 * rounds + 1:
        raise ValueError(f"uniforms must have 2*rounds + 1 = {2 * rounds + 1} columns, got {uniforms.shape[1]}")

    success = np.zeros(n, dtype=np.uint8)
    hit_round = np.full(n, -1, dtype=np.int64)
    cdef unsigned char[::1] succ = success
    cdef cnp.int64_t[::1] hit = hit_round
    cdef Py_ssize_t t, r, state, theta

    with nogil:
        for t in range(n):
            state = _pick(&init_cdf[0], d, uniforms[t, 0])
            if is_target[state]:
                succ[t] = 1
                hit[t] = 0
                continue
            for r in range(rounds):
                theta = _pick(&phi_to_theta_cdf[state, 0], d, uniforms[t, 2 * r + 1])
                state = _pick(&theta_to_phi_cdf[theta, 0], d, uniforms[t, 2 * r + 2])
                if is_target[state]:
                    succ[t] = 1
                    hit[t] = r + 1
                    break

    return success, hit_round
