"""Closed-form success probabilities for the measurement-steering sequence.

Pure real arithmetic throughout; no formula consults a basis. Each closed
form is cross-checked against the protocol engine in the test suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .states import PureState, tensor

AMPLITUDE_TOL = 1e-12


def _check_unit_interval(name: str, value: float) -> float:
    if not -AMPLITUDE_TOL <= value <= 1.0 + AMPLITUDE_TOL:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return min(max(float(value), 0.0), 1.0)


def _check_counts(d: int, n: int) -> None:
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    if n < 0:
        raise ValueError(f"round count must be >= 0, got {n}")


def ps_2d(theta: float, q_perp: float, n: int) -> float:
    """1 - q_perp * (1 - sin^2(2 theta)/2)^n for a qubit and one target."""
    q_perp = _check_unit_interval("q_perp", q_perp)
    if n < 0:
        raise ValueError(f"round count must be >= 0, got {n}")
    return 1.0 - q_perp * (1.0 - 0.5 * np.sin(2.0 * theta) ** 2) ** n


def ps_2d_max(q_perp: float, n: int) -> float:
    """1 - q_perp / 2^n, the qubit optimum reached at theta = pi/4."""
    q_perp = _check_unit_interval("q_perp", q_perp)
    if n < 0:
        raise ValueError(f"round count must be >= 0, got {n}")
    return 1.0 - q_perp * 0.5**n


def ps_mub(d: int, overlap: float, n: int) -> float:
    """1 - (1 - overlap) * (1 - 1/d)^n for mutually unbiased bases."""
    _check_counts(d, n)
    overlap = _check_unit_interval("overlap", overlap)
    return 1.0 - (1.0 - overlap) * (1.0 - 1.0 / d) ** n


def ps_mub_asymptotic(d: int, overlap: float, n: int) -> float:
    """Large-d form 1 - (1 - overlap) * exp(-n/d)."""
    _check_counts(d, n)
    overlap = _check_unit_interval("overlap", overlap)
    return 1.0 - (1.0 - overlap) * math.exp(-n / d)


def avg_ps(d: int, n: int, m: int = 1, dim_scale: int = 1) -> float:
    """Success probability averaged over uniformly random pure initial
    states: 1 - (1 - m/d^dim_scale)^(n+1).

    With m = 1 and dim_scale = 1 this is the single-target average; general
    (m, dim_scale) covers m targets in a dim_scale-fold composite space.
    """
    _check_counts(d, n)
    space = d**dim_scale
    if not 1 <= m <= space:
        raise ValueError(f"m must lie in [1, {space}], got {m}")
    return 1.0 - (1.0 - m / space) ** (n + 1)


def avg_ps_large_n(d: int, n: int, m: int = 1, dim_scale: int = 1) -> float:
    """Large-n limit of avg_ps: 1 - exp(-m (n+1) / d^dim_scale)."""
    _check_counts(d, n)
    space = d**dim_scale
    if not 1 <= m <= space:
        raise ValueError(f"m must lie in [1, {space}], got {m}")
    return 1.0 - math.exp(-m * (n + 1) / space)


def ps_multi_target(d: int, m: int, target_mass: float, n: int) -> float:
    """1 - (1 - target_mass) * (1 - m/d)^n for m orthogonal targets."""
    _check_counts(d, n)
    if not 1 <= m <= d:
        raise ValueError(f"m must lie in [1, {d}], got {m}")
    target_mass = _check_unit_interval("target_mass", target_mass)
    return 1.0 - (1.0 - target_mass) * (1.0 - m / d) ** n


def ps_copies(d: int, l: int, m: int, overlaps: Sequence[float], n: int) -> float:
    """Probability of steering l factorized copies onto one of m product
    targets: 1 - (1 - sum_k overlaps[k]^l) * (1 - m/d^l)^n.

    overlaps[k] is the single-copy overlap of the initial state with target
    state k.
    """
    _check_counts(d, n)
    if l < 1:
        raise ValueError(f"copy count must be >= 1, got {l}")
    if not 1 <= m <= d**l:
        raise ValueError(f"m must lie in [1, {d**l}], got {m}")
    if len(overlaps) != m:
        raise ValueError(f"expected {m} overlaps, got {len(overlaps)}")
    mass = sum(_check_unit_interval("overlap", o) ** l for o in overlaps)
    if mass > 1.0 + AMPLITUDE_TOL:
        raise ValueError(f"summed overlap mass {mass} exceeds 1")
    return 1.0 - (1.0 - mass) * (1.0 - m / d**l) ** n


@dataclass(frozen=True)
class BipartiteTargetSpec:
    """Entangled two-party target alpha |psi>|psi_perp> + beta |psi_perp>|psi>
    over two d-dimensional subsystems."""

    alpha: complex
    beta: complex
    d: int
    psi: PureState
    psi_perp: PureState

    def __post_init__(self) -> None:
        weight = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(weight - 1.0) > AMPLITUDE_TOL:
            raise ValueError(f"|alpha|^2 + |beta|^2 must be 1, got {weight}")
        if self.d < 2:
            raise ValueError(f"subsystem dimension must be at least 2, got {self.d}")
        if self.psi.dim != self.d or self.psi_perp.dim != self.d:
            raise ValueError("psi and psi_perp must live in the subsystem dimension")
        overlap = abs(np.vdot(self.psi.amplitudes, self.psi_perp.amplitudes))
        if overlap > AMPLITUDE_TOL:
            raise ValueError(f"psi and psi_perp must be orthogonal: |<psi|psi_perp>| = {overlap:.3e}")

    def target_state(self) -> PureState:
        """The target as an explicit d^2-dimensional vector."""
        v = (
            self.alpha * tensor(self.psi, self.psi_perp).amplitudes
            + self.beta * tensor(self.psi_perp, self.psi).amplitudes
        )
        return PureState(v / np.linalg.norm(v))


def ps_bipartite(spec: BipartiteTargetSpec, p: float, gamma: complex, n: int) -> float:
    """Success probability for a factorized initial state rho x rho, where
    rho has population p on psi and decoherence factor gamma:
    1 - [1 - p(1-p)(1 + 2 Re(alpha beta*) |gamma|^2)] * (1 - 1/d^2)^n.
    """
    p = _check_unit_interval("p", p)
    if abs(gamma) > 1.0 + AMPLITUDE_TOL:
        raise ValueError(f"|gamma| must be <= 1, got {abs(gamma)}")
    if n < 0:
        raise ValueError(f"round count must be >= 0, got {n}")
    overlap = p * (1.0 - p) * (1.0 + 2.0 * (spec.alpha * np.conj(spec.beta)).real * abs(gamma) ** 2)
    return 1.0 - (1.0 - overlap) * (1.0 - 1.0 / spec.d**2) ** n


def ps_bipartite_bound(spec: BipartiteTargetSpec, gamma: complex, n: int) -> float:
    """Upper bound over p of ps_bipartite, attained at p = 1/2:
    1 - [1 - (1 + 2 Re(alpha beta*) |gamma|^2)/4] * (1 - 1/d^2)^n.
    """
    if abs(gamma) > 1.0 + AMPLITUDE_TOL:
        raise ValueError(f"|gamma| must be <= 1, got {abs(gamma)}")
    if n < 0:
        raise ValueError(f"round count must be >= 0, got {n}")
    overlap = 0.25 * (1.0 + 2.0 * (spec.alpha * np.conj(spec.beta)).real * abs(gamma) ** 2)
    return 1.0 - (1.0 - overlap) * (1.0 - 1.0 / spec.d**2) ** n
