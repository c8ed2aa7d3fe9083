"""Dense complex-matrix representation of quantum states.

Pure states are unit-norm complex vectors, mixed states are density
matrices. Everything is validated at construction and immutable afterwards,
so instances can be shared freely across threads.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
# Slightly negative eigenvalues are admitted so that tensor products and
# dephasing round-off do not reject physically valid states.
EIGENVALUE_FLOOR = -1e-10


class PureState:
    """Unit-norm complex vector of dimension d >= 2."""

    __slots__ = ("_amplitudes",)

    def __init__(self, amplitudes) -> None:
        a = np.array(amplitudes, dtype=np.complex128)
        if a.ndim != 1:
            raise ValueError(f"amplitudes must be a 1-D vector, got shape {a.shape}")
        if a.shape[0] < 2:
            raise ValueError(f"dimension must be at least 2, got {a.shape[0]}")
        norm = np.linalg.norm(a)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
        a.setflags(write=False)
        self._amplitudes = a

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amplitudes

    @property
    def dim(self) -> int:
        return self._amplitudes.shape[0]

    @classmethod
    def basis_vector(cls, d: int, index: int) -> "PureState":
        """Computational basis vector |index> in dimension d."""
        if not 0 <= index < d:
            raise ValueError(f"index {index} out of range for dimension {d}")
        v = np.zeros(d, dtype=np.complex128)
        v[index] = 1.0
        return cls(v)

    def to_density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self._amplitudes, self._amplitudes.conj()))

    def __repr__(self) -> str:
        return f"PureState(dim={self.dim})"


class DensityMatrix:
    """Hermitian, positive-semidefinite, unit-trace complex matrix."""

    __slots__ = ("_matrix",)

    def __init__(self, entries) -> None:
        m = np.array(entries, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if m.shape[0] < 2:
            raise ValueError(f"dimension must be at least 2, got {m.shape[0]}")
        herm_defect = np.max(np.abs(m - m.conj().T))
        if herm_defect > HERMITICITY_TOL:
            raise ValueError(f"matrix is not Hermitian: max |rho - rho^dag| = {herm_defect:.3e}")
        trace_defect = abs(np.trace(m) - 1.0)
        if trace_defect > TRACE_TOL:
            raise ValueError(f"trace must be 1: |tr - 1| = {trace_defect:.3e}")
        min_eig = np.linalg.eigvalsh(m)[0]
        if min_eig < EIGENVALUE_FLOOR:
            raise ValueError(f"matrix is not positive semidefinite: min eigenvalue = {min_eig:.3e}")
        m.setflags(write=False)
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @classmethod
    def from_pure(cls, state: PureState) -> "DensityMatrix":
        return state.to_density()

    def purity(self) -> float:
        """tr(rho^2), computed as the squared Frobenius norm."""
        return float(np.vdot(self._matrix, self._matrix).real)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


@dataclass(frozen=True)
class QubitLikeSpec:
    """State supported on span{psi, psi_perp}, parametrized by population p
    and complex decoherence factor gamma.

    The off-diagonal coherence is <psi|rho|psi_perp> = gamma * sqrt(p(1-p));
    |gamma| <= 1 guarantees positivity, gamma = 0 is fully dephased and
    |gamma| = 1 is pure.
    """

    p: float
    gamma: complex
    psi: PureState
    psi_perp: PureState

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if abs(self.gamma) > 1.0 + NORM_TOL:
            raise ValueError(f"|gamma| must be <= 1, got {abs(self.gamma)}")
        if self.psi.dim != self.psi_perp.dim:
            raise ValueError("psi and psi_perp must have equal dimension")
        overlap = abs(np.vdot(self.psi.amplitudes, self.psi_perp.amplitudes))
        if overlap > NORM_TOL:
            raise ValueError(f"psi and psi_perp must be orthogonal: |<psi|psi_perp>| = {overlap:.3e}")


def target_overlap(rho: DensityMatrix, phi: PureState) -> float:
    """<phi|rho|phi>, the probability of projecting rho onto phi."""
    if rho.dim != phi.dim:
        raise ValueError(f"dimension mismatch: rho is {rho.dim}, phi is {phi.dim}")
    a = phi.amplitudes
    value = np.vdot(a, rho.matrix @ a)
    if abs(value.imag) > NORM_TOL:
        raise ValueError(f"overlap has non-negligible imaginary part {value.imag:.3e}")
    return float(value.real)


def maximally_mixed(d: int) -> DensityMatrix:
    """The maximally mixed state I/d."""
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    return DensityMatrix(np.eye(d, dtype=np.complex128) / d)


def hs_distance_sq(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Squared Hilbert-Schmidt distance tr[(rho-sigma)^dag (rho-sigma)]."""
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    delta = rho.matrix - sigma.matrix
    return float(np.vdot(delta, delta).real)


def tensor(a, b):
    """Kronecker product of two PureStates or two DensityMatrices."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.matrix, b.matrix))
    raise TypeError(f"operands must be two PureStates or two DensityMatrices, got {type(a).__name__} and {type(b).__name__}")


def haar_random_pure(d: int, rng: np.random.Generator) -> PureState:
    """Draw a pure state uniformly from the Haar measure on the unit sphere.

    A column of complex standard Gaussians normalized to unit length is
    Haar-distributed by unitary invariance of the Gaussian ensemble.
    """
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(v / np.linalg.norm(v))


def qubit_like_density(spec: QubitLikeSpec) -> DensityMatrix:
    """Build the d x d density matrix described by a QubitLikeSpec."""
    psi = spec.psi.amplitudes
    perp = spec.psi_perp.amplitudes
    p = spec.p
    coherence = spec.gamma * np.sqrt(p * (1.0 - p))
    rho = (
        p * np.outer(psi, psi.conj())
        + (1.0 - p) * np.outer(perp, perp.conj())
        + coherence * np.outer(psi, perp.conj())
        + np.conj(coherence) * np.outer(perp, psi.conj())
    )
    return DensityMatrix(rho)
