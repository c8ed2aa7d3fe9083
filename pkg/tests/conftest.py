import numpy as np

from qsteer import DensityMatrix


def random_density(d: int, rng: np.random.Generator) -> DensityMatrix:
    """Random full-rank mixed state from a normalized Ginibre square."""
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)
