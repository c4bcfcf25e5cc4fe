"""Analytic closed forms and brute-force quadrature references.

Every estimator in the package is checked against something here: Gaussian
entropies and copula entropies have exact closed forms, and tiny periodic
particle systems (2 or 3 particles on a 1-d ring) are integrated exactly
on a grid, which serves as the ground truth for the Monte Carlo pathway.
"""

from dataclasses import dataclass

import numpy as np

from .entropy import SampleMatrix
from .errors import DataValidationError, MatrixError, ParameterError
from .simulate import BoxSpec, PotentialSpec, pair_energy

LN_2PI_E = float(np.log(2.0 * np.pi) + 1.0)

# 3-particle grids are capped to stay desk-scale (128**3 cells)
MAX_GRID_M_3P = 128


@dataclass
class CorrelationMatrix:
    """A symmetric positive-definite matrix with unit diagonal."""

    entries: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.entries, dtype=float)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise MatrixError("correlation matrix must be square")
        if not np.isfinite(r).all():
            raise MatrixError("correlation matrix has non-finite entries")
        if not np.allclose(r, r.T, atol=1e-10):
            raise MatrixError("correlation matrix must be symmetric")
        if not np.allclose(np.diag(r), 1.0, atol=1e-12):
            raise MatrixError("correlation matrix must have unit diagonal")
        try:
            np.linalg.cholesky(r)
        except np.linalg.LinAlgError:
            raise MatrixError("correlation matrix must be positive-definite")
        self.entries = r

    @property
    def d(self) -> int:
        return self.entries.shape[0]


def equicorrelated(d: int, rho: float) -> CorrelationMatrix:
    """d-by-d correlation matrix with every off-diagonal equal to rho."""
    r = np.full((d, d), float(rho))
    np.fill_diagonal(r, 1.0)
    return CorrelationMatrix(r)


def _logdet_spd(m: np.ndarray, what: str) -> float:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise MatrixError(f"{what} must be square")
    if not np.isfinite(m).all():
        raise MatrixError(f"{what} has non-finite entries")
    if not np.allclose(m, m.T, atol=1e-10):
        raise MatrixError(f"{what} must be symmetric")
    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        raise MatrixError(f"{what} must be positive-definite")
    return 2.0 * float(np.sum(np.log(np.diag(chol))))


def gaussian_entropy(covariance) -> float:
    """Exact entropy of a multivariate Gaussian: 0.5*ln((2*pi*e)^d det S)."""
    cov = np.asarray(covariance, dtype=float)
    logdet = _logdet_spd(cov, "covariance")
    d = cov.shape[0]
    return 0.5 * (d * LN_2PI_E + logdet)


def gaussian_ce(correlation) -> float:
    """Exact Gaussian copula entropy: 0.5*ln(det R), always <= 0."""
    r = correlation if isinstance(correlation, CorrelationMatrix) \
        else CorrelationMatrix(np.asarray(correlation))
    return 0.5 * _logdet_spd(r.entries, "correlation matrix")


def sample_gaussian(correlation, n: int, seed: int) -> SampleMatrix:
    """Draw n correlated standard-Gaussian rows, deterministic per seed.

    Uses the lower-triangular Cholesky factor of the correlation matrix
    and numpy's PCG64 generator, so identical (R, n, seed) always yield
    identical samples.
    """
    r = correlation if isinstance(correlation, CorrelationMatrix) \
        else CorrelationMatrix(np.asarray(correlation))
    if n < 2:
        raise ParameterError(f"need n >= 2 samples, got {n}")
    chol = np.linalg.cholesky(r.entries)
    z = np.random.default_rng(seed).standard_normal((n, r.d))
    return SampleMatrix(z @ chol.T)


@dataclass
class DensityGrid:
    """A normalized probability density on a regular periodic grid.

    One array axis per particle, each with the same number of points;
    ``cell_measure`` is the coordinate-space volume of one cell, so
    values.sum() * cell_measure == 1 after normalization.
    """

    values: np.ndarray
    box_length: float
    cell_measure: float
    dimension: int = 1  # spatial coordinates per particle slot

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if (v < 0).any():
            raise DataValidationError("density grid has negative cells")
        total = float(v.sum()) * self.cell_measure
        if abs(total - 1.0) > 1e-9:
            raise DataValidationError(
                f"density grid not normalized: integral = {total!r}"
            )
        self.values = v

    @property
    def n_particles(self) -> int:
        return self.values.ndim

    @property
    def grid_points(self) -> int:
        return self.values.shape[0]


def grid_boltzmann(potential: PotentialSpec, beta: float, box: BoxSpec,
                   particles: int = 2, grid_m: int = 256) -> DensityGrid:
    """Exact discretized canonical position density for a tiny 1-d system.

    Evaluates exp(-beta * sum of pair energies) on a midpoint grid with
    ``grid_m`` points per particle and normalizes it.  Smooth periodic
    potentials make the midpoint rule spectrally accurate, so doubling
    grid_m is a stringent convergence check.
    """
    if box.dimension != 1:
        raise ParameterError("grid densities support 1-d boxes only")
    if particles not in (2, 3):
        raise ParameterError(f"particles must be 2 or 3, got {particles}")
    if grid_m < 64:
        raise ParameterError(f"grid_m must be >= 64, got {grid_m}")
    if particles == 3 and grid_m > MAX_GRID_M_3P:
        raise ParameterError(
            f"3-particle grids are capped at grid_m={MAX_GRID_M_3P}"
        )
    if beta < 0:
        raise ParameterError(f"beta must be >= 0, got {beta}")

    L = box.side_length
    centers = (np.arange(grid_m) + 0.5) * (L / grid_m)
    sep = centers[:, None] - centers[None, :]
    sep = np.abs(sep - L * np.round(sep / L))
    u2 = pair_energy(potential, sep, L)
    if particles == 2:
        energy = u2
    else:
        energy = u2[:, :, None] + u2[:, None, :] + u2[None, :, :]
    if np.isneginf(energy).any():
        raise DataValidationError(
            "pair potential diverges to -infinity; Boltzmann weight is "
            "not integrable"
        )
    # subtract the minimum before exponentiating to avoid overflow
    w = np.exp(-beta * (energy - energy.min()))
    cell = (L / grid_m) ** particles
    values = w / (w.sum() * cell)
    return DensityGrid(values=values, box_length=L, cell_measure=cell)


def grid_correlation_entropy(grid: DensityGrid) -> float:
    """Correlation entropy of a grid density with uniform marginals, in nats.

    Rescales the density against the product of uniform position marginals
    (exact for translation-invariant densities on a periodic box) and
    integrates -c*ln(c) over the unit hypercube by the midpoint rule.
    By Jensen's inequality the result is <= 0 up to quadrature error.
    """
    axes = grid.n_particles
    m = grid.grid_points
    c = grid.values * grid.box_length ** axes
    cell_u = 1.0 / float(m) ** axes
    nz = c > 0.0
    # fixed-order summation keeps the result bit-stable
    s = float(np.sum(c[nz] * np.log(c[nz]))) * cell_u
    return -s


def grid_marginalize(grid: DensityGrid, keep) -> DensityGrid:
    """Integrate out every particle axis not listed in ``keep``.

    Axes of the result follow ascending particle index.  The output is
    renormalized to absorb float round-off.
    """
    keep = sorted(set(int(i) for i in keep))
    axes = grid.n_particles
    if not keep:
        raise ParameterError("keep must name at least one particle")
    if keep[0] < 0 or keep[-1] >= axes:
        raise ParameterError(
            f"keep indices must lie in [0, {axes - 1}], got {keep}"
        )
    drop = tuple(i for i in range(axes) if i not in keep)
    if not drop:
        return DensityGrid(values=grid.values.copy(),
                           box_length=grid.box_length,
                           cell_measure=grid.cell_measure,
                           dimension=grid.dimension)
    m = grid.grid_points
    step = grid.box_length / m
    v = grid.values.sum(axis=drop) * step ** len(drop)
    cell = step ** len(keep)
    v = v / (v.sum() * cell)
    return DensityGrid(values=v, box_length=grid.box_length,
                       cell_measure=cell, dimension=grid.dimension)
