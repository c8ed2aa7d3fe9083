"""Measurement bases: construction, unbiasedness certification, overlap
matrices between basis pairs, and basis dephasing."""
from __future__ import annotations

from typing import NamedTuple, Sequence, Union

import numpy as np

from .states import DensityMatrix, PureState, hs_distance_sq

UNITARITY_TOL = 1e-12
STOCHASTICITY_TOL = 1e-10
TIE_TOL = 1e-12


class OrthonormalBasis:
    """Ordered orthonormal basis of C^d, stored as the columns of a unitary."""

    __slots__ = ("_matrix",)

    def __init__(self, matrix) -> None:
        m = np.array(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"basis matrix must be square, got shape {m.shape}")
        if m.shape[0] < 2:
            raise ValueError(f"dimension must be at least 2, got {m.shape[0]}")
        defect = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if defect > UNITARITY_TOL:
            raise ValueError(f"columns are not orthonormal: unitarity defect = {defect:.3e}")
        m.setflags(write=False)
        self._matrix = m

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def state(self, index: int) -> PureState:
        """Basis element |index> as a PureState."""
        return PureState(self._matrix[:, index])

    @classmethod
    def computational(cls, d: int) -> "OrthonormalBasis":
        return cls(np.eye(d, dtype=np.complex128))

    @classmethod
    def from_columns(cls, states: Sequence[PureState]) -> "OrthonormalBasis":
        return cls(np.column_stack([s.amplitudes for s in states]))

    def __len__(self) -> int:
        return self.dim

    def __repr__(self) -> str:
        return f"OrthonormalBasis(dim={self.dim})"


class OverlapMatrix:
    """One-round transition probabilities p[k, j] between the outcomes of two
    bases, p[k, j] = sum_i |<i|phi_k>|^2 |<phi_j|i>|^2.

    Symmetric and doubly stochastic for every basis pair.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries) -> None:
        p = np.array(entries, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError(f"overlap matrix must be square, got shape {p.shape}")
        if np.min(p) < -1e-12 or np.max(p) > 1.0 + 1e-12:
            raise ValueError("entries must lie in [0, 1]")
        row_defect = np.max(np.abs(p.sum(axis=1) - 1.0))
        col_defect = np.max(np.abs(p.sum(axis=0) - 1.0))
        if max(row_defect, col_defect) > STOCHASTICITY_TOL:
            raise ValueError(f"matrix is not doubly stochastic: defect = {max(row_defect, col_defect):.3e}")
        p.setflags(write=False)
        self._entries = p

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def dim(self) -> int:
        return self._entries.shape[0]


class ScanResult(NamedTuple):
    best_index: int
    distances: np.ndarray


def basis_2d(theta: float, phi: float = 0.0, reference: OrthonormalBasis | None = None) -> OrthonormalBasis:
    """Two-dimensional basis rotated by (theta, phi) away from a reference pair.

    Columns are cos(theta)|r0> + e^{i phi} sin(theta)|r1> and
    -e^{-i phi} sin(theta)|r0> + cos(theta)|r1>. theta = 0 reproduces the
    reference basis; theta = pi/4 is unbiased with respect to it.
    """
    if reference is None:
        reference = OrthonormalBasis.computational(2)
    if reference.dim != 2:
        raise ValueError(f"reference basis must have dimension 2, got {reference.dim}")
    c, s = np.cos(theta), np.sin(theta)
    rotation = np.array(
        [[c, -np.exp(-1j * phi) * s],
         [np.exp(1j * phi) * s, c]],
        dtype=np.complex128,
    )
    return OrthonormalBasis(reference.matrix @ rotation)


def fourier_basis(reference: OrthonormalBasis) -> OrthonormalBasis:
    """Discrete Fourier transform of a basis: column j is
    (1/sqrt(d)) sum_k omega^{jk} |r_k> with omega = exp(2 pi i / d).

    The result is mutually unbiased with respect to the reference.
    """
    d = reference.dim
    indices = np.arange(d)
    f = np.exp(2j * np.pi * np.outer(indices, indices) / d) / np.sqrt(d)
    return OrthonormalBasis(reference.matrix @ f)


def unbiasedness_defect(b1: OrthonormalBasis, b2: OrthonormalBasis) -> float:
    """max over (i, k) of | |<b1_i|b2_k>|^2 - 1/d |; zero iff mutually unbiased."""
    if b1.dim != b2.dim:
        raise ValueError(f"dimension mismatch: {b1.dim} vs {b2.dim}")
    gram = b1.matrix.conj().T @ b2.matrix
    return float(np.max(np.abs(np.abs(gram) ** 2 - 1.0 / b1.dim)))


def overlap_matrix(b_phi: OrthonormalBasis, b_theta: OrthonormalBasis) -> OverlapMatrix:
    """Transition matrix p[k, j] = sum_i |<i|phi_k>|^2 |<phi_j|i>|^2, with |i>
    from b_theta and |phi_k> from b_phi."""
    if b_phi.dim != b_theta.dim:
        raise ValueError(f"dimension mismatch: {b_phi.dim} vs {b_theta.dim}")
    # m[k, i] = |<theta_i|phi_k>|^2; rows are the per-state probability vectors.
    m = np.abs(b_theta.matrix.conj().T @ b_phi.matrix).T ** 2
    return OverlapMatrix(m @ m.T)


def squared_overlaps(b_phi: OrthonormalBasis, b_theta: OrthonormalBasis) -> np.ndarray:
    """Per-pair Born probabilities |<theta_i|phi_k>|^2 as a (k, i) array."""
    if b_phi.dim != b_theta.dim:
        raise ValueError(f"dimension mismatch: {b_phi.dim} vs {b_theta.dim}")
    return np.abs(b_theta.matrix.conj().T @ b_phi.matrix).T ** 2


def dephase_in_basis(state: Union[PureState, DensityMatrix], b: OrthonormalBasis) -> DensityMatrix:
    """Non-selective measurement in b: sum_i <i|rho|i> |i><i|."""
    if state.dim != b.dim:
        raise ValueError(f"dimension mismatch: state is {state.dim}, basis is {b.dim}")
    if isinstance(state, PureState):
        probs = np.abs(b.matrix.conj().T @ state.amplitudes) ** 2
    else:
        probs = np.einsum("ij,jk,ki->i", b.matrix.conj().T, state.matrix, b.matrix).real
    out = (b.matrix * probs) @ b.matrix.conj().T
    return DensityMatrix((out + out.conj().T) / 2.0)


def hs_optimality_scan(
    target: PureState,
    failure: Union[PureState, DensityMatrix],
    candidates: Sequence[OrthonormalBasis],
) -> ScanResult:
    """Rank candidate intermediate bases by the squared Hilbert-Schmidt
    distance between the failure state dephased in the candidate and the
    target projector. Returns the argmin (first index on ties) and all
    distances.

    The failure state may be pure (one concrete failed outcome) or mixed
    (e.g. the uniform state on the target's orthocomplement, describing an
    unknown failed outcome)."""
    if len(candidates) == 0:
        raise ValueError("candidate list must not be empty")
    target_proj = target.to_density()
    distances = np.empty(len(candidates))
    for i, b in enumerate(candidates):
        distances[i] = hs_distance_sq(dephase_in_basis(failure, b), target_proj)
    best = int(np.flatnonzero(distances <= distances.min() + TIE_TOL)[0])
    return ScanResult(best, distances)


def extend_to_basis(phi: PureState) -> OrthonormalBasis:
    """Deterministically complete phi to an orthonormal basis with phi as
    column 0 (Gram-Schmidt against the identity columns, dropping the axis
    most parallel to phi)."""
    d = phi.dim
    cols = [phi.amplitudes.astype(np.complex128)]
    skip = int(np.argmax(np.abs(phi.amplitudes)))
    for j in range(d):
        if j == skip:
            continue
        v = np.zeros(d, dtype=np.complex128)
        v[j] = 1.0
        # Two projection passes keep orthogonality at machine precision.
        for _ in range(2):
            for c in cols:
                v = v - np.vdot(c, v) * c
        cols.append(v / np.linalg.norm(v))
    return OrthonormalBasis(np.column_stack(cols))


def haar_random_basis(d: int, rng: np.random.Generator) -> OrthonormalBasis:
    """Haar-distributed random basis via QR of a complex Ginibre matrix with
    the R-diagonal phase fix."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))
    return OrthonormalBasis(q)
