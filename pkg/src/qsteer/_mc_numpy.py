"""Pure-numpy trajectory-sampling kernel (fallback for the compiled one).

Both kernels share exact semantics: outcomes are drawn by inverse CDF, the
outcome picked is the first index whose cumulative probability strictly
exceeds the uniform draw, and the final bucket absorbs rounding residue.
Given identical inputs the two backends return bit-identical arrays.
"""
from __future__ import annotations

import numpy as np


def _pick_rows(cdf_rows: np.ndarray, u: np.ndarray, d: int) -> np.ndarray:
    # First index with cdf > u; counting entries <= u gives exactly that.
    return np.minimum((cdf_rows <= u[:, None]).sum(axis=1), d - 1)


def simulate_batch(
    uniforms: np.ndarray,
    init_cdf: np.ndarray,
    phi_to_theta_cdf: np.ndarray,
    theta_to_phi_cdf: np.ndarray,
    is_target: np.ndarray,
    rounds: int,
):
    """Run one trajectory per row of `uniforms` in outcome-index space.

    uniforms[t, 0] drives the first target-basis measurement; uniforms[t,
    2r+1] and uniforms[t, 2r+2] drive round r's intermediate and target
    measurements. Returns (success: uint8 array, hit_round: int64 array)
    with hit_round = -1 on failure and 0 for a first-measurement hit.
    """
    uniforms = np.asarray(uniforms, dtype=np.float64)
    d = init_cdf.shape[0]
    n = uniforms.shape[0]
    if uniforms.shape[1] != 2 * rounds + 1:
        raise ValueError(f"uniforms must have 2*rounds + 1 = {2 * rounds + 1} columns, got {uniforms.shape[1]}")
    target = np.asarray(is_target, dtype=bool)

    state = _pick_rows(init_cdf[None, :], uniforms[:, 0], d)
    success = target[state]
    hit_round = np.where(success, 0, -1).astype(np.int64)
    alive = np.flatnonzero(~success)

    for r in range(rounds):
        if alive.size == 0:
            break
        theta = _pick_rows(phi_to_theta_cdf[state[alive]], uniforms[alive, 2 * r + 1], d)
        phi = _pick_rows(theta_to_phi_cdf[theta], uniforms[alive, 2 * r + 2], d)
        state[alive] = phi
        hits = target[phi]
        hit_idx = alive[hits]
        success[hit_idx] = True
        hit_round[hit_idx] = r + 1
        alive = alive[~hits]

    return success.astype(np.uint8), hit_round
