"""The measurement sequence itself: one target-basis measurement followed by
N rounds of intermediate-then-target measurements, stopping at the first
target outcome.

Three evaluators coexist on purpose:
  * exact_success      absorbing-Markov-chain recursion, O(N d^2)
  * brute_force_success  full outcome-tree enumeration (oracle, guarded)
  * monte_carlo_success  batched Born-rule trajectory sampling
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple, Union

import numpy as np

from .bases import OrthonormalBasis, overlap_matrix, squared_overlaps
from .states import DensityMatrix, PureState
from . import mc

PROB_SUM_TOL = 1e-10
ORACLE_MAX_LEAVES = 10**7

State = Union[PureState, DensityMatrix]


class InfeasibleError(RuntimeError):
    """Raised when a brute-force enumeration would exceed the tree-size guard."""


@dataclass(frozen=True)
class Protocol:
    """Measurement plan: target basis with designated target indices, the
    intermediate basis, and the round count."""

    target_basis: OrthonormalBasis
    intermediate_basis: OrthonormalBasis
    target_indices: Tuple[int, ...]
    rounds: int

    def __post_init__(self) -> None:
        if self.target_basis.dim != self.intermediate_basis.dim:
            raise ValueError(f"basis dimensions differ: {self.target_basis.dim} vs {self.intermediate_basis.dim}")
        targets = tuple(sorted(set(int(i) for i in self.target_indices)))
        if not targets:
            raise ValueError("target_indices must not be empty")
        if targets[0] < 0 or targets[-1] >= self.target_basis.dim:
            raise ValueError(f"target indices {targets} out of range for dimension {self.target_basis.dim}")
        if self.rounds < 0:
            raise ValueError(f"rounds must be >= 0, got {self.rounds}")
        object.__setattr__(self, "target_indices", targets)

    @property
    def dim(self) -> int:
        return self.target_basis.dim

    @property
    def failure_indices(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.dim) if i not in set(self.target_indices))


@dataclass(frozen=True)
class TrajectoryResult:
    """One sampled run. `round` is 0 for a first-measurement hit, k for a hit
    at round k, None on failure. Outcomes stop at the first target hit."""

    success: bool
    round: Optional[int]
    outcomes: Tuple[Tuple[str, int], ...]


@dataclass(frozen=True, eq=False)
class MarkovModel:
    """One-round transition structure over target-basis outcome indices,
    restricted to the failure subspace. success_mass[j] is the probability of
    reaching any target from failure index failure_indices[j] in one round;
    failure_kernel[j, j'] the probability of landing on failure index j'."""

    success_mass: np.ndarray
    failure_kernel: np.ndarray
    failure_indices: Tuple[int, ...]

    def __post_init__(self) -> None:
        s = np.asarray(self.success_mass, dtype=np.float64)
        t = np.asarray(self.failure_kernel, dtype=np.float64)
        if t.shape != (s.shape[0], s.shape[0]):
            raise ValueError(f"kernel shape {t.shape} does not match mass length {s.shape[0]}")
        if s.shape[0] > 0:
            defect = np.max(np.abs(s + t.sum(axis=1) - 1.0))
            if defect > PROB_SUM_TOL:
                raise ValueError(f"rows must sum to 1: defect = {defect:.3e}")
        s.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "success_mass", s)
        object.__setattr__(self, "failure_kernel", t)


class MonteCarloResult(NamedTuple):
    estimate: float
    stderr: float


class TrajectoryModel(NamedTuple):
    """Index-space sampling tables consumed by the batch kernels."""

    init_cdf: np.ndarray
    phi_to_theta_cdf: np.ndarray
    theta_to_phi_cdf: np.ndarray
    is_target: np.ndarray


def born_probabilities(state: State, b: OrthonormalBasis) -> np.ndarray:
    """Outcome probabilities <b_i|rho|b_i> for measuring `state` in `b`.

    Tiny negatives are clipped and the vector renormalized; a sum deviating
    from 1 by more than 1e-10 means the state is invalid and raises.
    """
    if state.dim != b.dim:
        raise ValueError(f"dimension mismatch: state is {state.dim}, basis is {b.dim}")
    if isinstance(state, PureState):
        probs = np.abs(b.matrix.conj().T @ state.amplitudes) ** 2
    else:
        probs = np.einsum("ij,jk,ki->i", b.matrix.conj().T, state.matrix, b.matrix).real
    total = probs.sum()
    if abs(total - 1.0) > PROB_SUM_TOL or probs.min() < -PROB_SUM_TOL:
        raise ValueError(f"invalid state: outcome probabilities sum to {total!r}")
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def measure_in_basis(state: State, b: OrthonormalBasis, rng: np.random.Generator) -> Tuple[int, PureState]:
    """Projective measurement: returns the sampled outcome index and the
    collapsed state (the corresponding basis element)."""
    probs = born_probabilities(state, b)
    cdf = np.cumsum(probs)
    # Final bucket absorbs rounding residue so sampling cannot fail.
    index = int(min(np.searchsorted(cdf, rng.random(), side="right"), b.dim - 1))
    return index, b.state(index)


def run_trajectory(rho: State, protocol: Protocol, rng: np.random.Generator) -> TrajectoryResult:
    """Sample one full run, recording every outcome until the first hit."""
    targets = set(protocol.target_indices)
    outcomes = []
    index, state = measure_in_basis(rho, protocol.target_basis, rng)
    outcomes.append(("phi", index))
    if index in targets:
        return TrajectoryResult(True, 0, tuple(outcomes))
    for r in range(1, protocol.rounds + 1):
        index, state = measure_in_basis(state, protocol.intermediate_basis, rng)
        outcomes.append(("theta", index))
        index, state = measure_in_basis(state, protocol.target_basis, rng)
        outcomes.append(("phi", index))
        if index in targets:
            return TrajectoryResult(True, r, tuple(outcomes))
    return TrajectoryResult(False, None, tuple(outcomes))


def build_markov(protocol: Protocol) -> MarkovModel:
    """Regroup the one-round transition probabilities into success mass and
    failure-to-failure kernel."""
    p = overlap_matrix(protocol.target_basis, protocol.intermediate_basis).entries
    targets = list(protocol.target_indices)
    failure = list(protocol.failure_indices)
    success_mass = p[np.ix_(failure, targets)].sum(axis=1)
    failure_kernel = p[np.ix_(failure, failure)]
    return MarkovModel(success_mass, failure_kernel, tuple(failure))


def _check_and_clamp(total: float) -> float:
    if total < -PROB_SUM_TOL or total > 1.0 + PROB_SUM_TOL:
        raise ValueError(f"accumulated probability {total!r} is outside [0, 1] beyond tolerance")
    return min(max(total, 0.0), 1.0)


def exact_success(rho: State, protocol: Protocol) -> float:
    """Success probability after the first measurement plus `rounds` rounds,
    by iterated vector-kernel products over the failure subspace."""
    q = born_probabilities(rho, protocol.target_basis)
    targets = list(protocol.target_indices)
    total = float(q[targets].sum())
    if protocol.rounds > 0 and len(protocol.failure_indices) > 0:
        model = build_markov(protocol)
        v = q[list(protocol.failure_indices)]
        for _ in range(protocol.rounds):
            total += float(v @ model.success_mass)
            v = v @ model.failure_kernel
    return _check_and_clamp(total)


def brute_force_success(rho: State, protocol: Protocol) -> float:
    """Oracle: enumerate every outcome sequence of the measurement tree and
    credit each path at its first target hit. Exponential in rounds; guarded
    to at most 10^7 leaves."""
    d = protocol.dim
    leaves = d ** (2 * protocol.rounds + 1)
    if leaves > ORACLE_MAX_LEAVES:
        raise InfeasibleError(
            f"outcome tree has d^(2N+1) = {leaves} leaves, exceeding the guard of {ORACLE_MAX_LEAVES}"
        )
    q = born_probabilities(rho, protocol.target_basis)
    m = squared_overlaps(protocol.target_basis, protocol.intermediate_basis)
    phi_to_theta = m.tolist()
    theta_to_phi = m.T.tolist()
    targets = set(protocol.target_indices)
    indices = range(d)

    def subtree(k: int, rounds_left: int) -> float:
        # Success mass of the remaining tree from failure state |phi_k>.
        if rounds_left == 0:
            return 0.0
        total = 0.0
        row = phi_to_theta[k]
        for i in indices:
            p_theta = row[i]
            if p_theta == 0.0:
                continue
            col = theta_to_phi[i]
            for j in indices:
                p_phi = col[j]
                if p_phi == 0.0:
                    continue
                if j in targets:
                    total += p_theta * p_phi
                else:
                    total += p_theta * p_phi * subtree(j, rounds_left - 1)
        return total

    total = 0.0
    for k in indices:
        if q[k] == 0.0:
            continue
        if k in targets:
            total += q[k]
        else:
            total += q[k] * subtree(k, protocol.rounds)
    return _check_and_clamp(total)


def trajectory_model(rho: State, protocol: Protocol) -> TrajectoryModel:
    """Precompute the cumulative sampling tables for the batch kernels."""
    q = born_probabilities(rho, protocol.target_basis)
    m = squared_overlaps(protocol.target_basis, protocol.intermediate_basis)
    is_target = np.zeros(protocol.dim, dtype=np.uint8)
    is_target[list(protocol.target_indices)] = 1
    return TrajectoryModel(
        np.ascontiguousarray(np.cumsum(q)),
        np.ascontiguousarray(np.cumsum(m, axis=1)),
        np.ascontiguousarray(np.cumsum(np.ascontiguousarray(m.T), axis=1)),
        is_target,
    )


def monte_carlo_success(
    rho: State,
    protocol: Protocol,
    n_traj: int,
    rng: np.random.Generator,
    chunk_size: int = 65536,
) -> MonteCarloResult:
    """Success fraction over n_traj sampled trajectories with binomial
    standard error.

    Uniform draws are assigned to trajectories in index order (one row of
    2*rounds + 1 draws each), so the result depends only on the rng state
    and n_traj, not on chunking or any worker decomposition by row.
    """
    if n_traj < 1:
        raise ValueError(f"n_traj must be >= 1, got {n_traj}")
    model = trajectory_model(rho, protocol)
    columns = 2 * protocol.rounds + 1
    successes = 0
    done = 0
    while done < n_traj:
        rows = min(chunk_size, n_traj - done)
        uniforms = rng.random((rows, columns))
        succ, _ = mc.simulate_batch(
            uniforms,
            model.init_cdf,
            model.phi_to_theta_cdf,
            model.theta_to_phi_cdf,
            model.is_target,
            protocol.rounds,
        )
        successes += int(succ.sum())
        done += rows
    estimate = successes / n_traj
    stderr = math.sqrt(estimate * (1.0 - estimate) / n_traj)
    return MonteCarloResult(estimate, stderr)
