"""Rank-based copula transform and k-nearest-neighbor entropy estimation.

Differential entropy is estimated with the Kozachenko-Leonenko k-NN
estimator.  Copula entropy (the negative of multivariate mutual
information) is the same estimator applied to rank-transformed
pseudo-observations, which makes it exactly invariant under strictly
increasing transformations of each column.  All values are in nats.
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma, gammaln
from scipy.stats import rankdata

from .errors import DataValidationError, DegenerateSampleError, ParameterError

TIE_POLICIES = ("average", "dense", "jitter")
METRICS = ("chebyshev", "euclidean")
ESTIMATE_METHODS = ("knn_kl", "analytic", "quadrature")

# distance floor for coincident points; keeps log(eps_i) finite
EPS_FLOOR = 1e-12

LN2 = float(np.log(2.0))


@dataclass
class SampleMatrix:
    """An n-by-d table of finite real observations.

    Rows are samples, columns are variables.  Rejects anything that is
    not a finite 2-d float array with n >= 2 rows.
    """

    values: np.ndarray
    column_names: list[str] | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if v.ndim != 2:
            raise DataValidationError(
                f"sample matrix must be 2-d, got {v.ndim}-d input"
            )
        n, d = v.shape
        if n < 2:
            raise DataValidationError(f"need at least 2 rows, got {n}")
        if d < 1:
            raise DataValidationError("need at least 1 column")
        bad = ~np.isfinite(v)
        if bad.any():
            i, j = map(int, np.argwhere(bad)[0])
            label = self.column_names[j] if self.column_names else str(j)
            raise DataValidationError(
                f"non-finite value at row {i}, column {label!r}"
            )
        if self.column_names is not None and len(self.column_names) != d:
            raise DataValidationError(
                f"{len(self.column_names)} column names for {d} columns"
            )
        self.values = v

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


@dataclass
class PseudoObservations:
    """Rank-transformed samples, strictly inside the open unit hypercube."""

    values: np.ndarray
    tie_policy: str = "average"
    jitter_seed: int | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2:
            raise DataValidationError("pseudo-observations must be 2-d")
        if not ((v > 0.0).all() and (v < 1.0).all()):
            raise DataValidationError(
                "pseudo-observations must lie strictly inside (0, 1)"
            )
        self.values = v

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class EntropyEstimate:
    """An entropy value in nats plus the settings that produced it."""

    value: float
    k: int
    n: int
    d: int
    method: str = "knn_kl"
    floored_pairs: int = 0

    def __post_init__(self):
        if self.method not in ESTIMATE_METHODS:
            raise ParameterError(f"unknown method {self.method!r}")
        if not (1 <= self.k < self.n):
            raise ParameterError(
                f"need 1 <= k < n, got k={self.k}, n={self.n}"
            )

    @property
    def bits(self) -> float:
        return self.value / LN2


@dataclass
class DecompositionReport:
    """Joint entropy split into marginal entropies plus copula entropy.

    ``residual`` is computed once from the three stored estimates
    (joint - sum(marginals) - copula, evaluated left to right in float64)
    and stored; it is never recomputed behind the caller's back.
    """

    joint_entropy: float
    marginal_entropies: list[float]
    copula_entropy: float
    residual: float = field(init=False)

    def __post_init__(self):
        self.residual = (
            self.joint_entropy
            - sum(self.marginal_entropies)
            - self.copula_entropy
        )


def _as_sample_matrix(samples) -> SampleMatrix:
    if isinstance(samples, SampleMatrix):
        return samples
    return SampleMatrix(np.asarray(samples))


def _column_jitter(col: np.ndarray, seed: int) -> np.ndarray:
    """Seeded sub-resolution noise for one column.

    The noise amplitude is far below the smallest gap between distinct
    values, so only tied entries can change order.  The per-column RNG is
    keyed on (seed, column content), so identical columns always receive
    identical noise.
    """
    distinct = np.unique(col)
    if distinct.size == col.size:
        return np.zeros_like(col)
    if distinct.size > 1:
        amp = float(np.diff(distinct).min()) * 1e-6
    else:
        amp = max(1.0, abs(float(distinct[0]))) * 1e-9
    content = int.from_bytes(hashlib.sha256(col.tobytes()).digest()[:8], "big")
    rng = np.random.default_rng(np.random.SeedSequence([seed, content]))
    return rng.uniform(0.0, amp, size=col.size)


def rank_transform(samples, tie_policy: str = "average",
                   jitter_seed: int = 0) -> PseudoObservations:
    """Map each column to its scaled ranks on (0, 1).

    Ranks are divided by n+1 so the output stays strictly inside the
    open unit interval.  Tie handling:

    - ``average``: tied entries share the mean of their ranks.
    - ``dense``: ties share a rank and the next distinct value follows
      immediately (output is no longer a permutation of i/(n+1)).
    - ``jitter``: deterministic seeded noise smaller than the smallest
      inter-value gap breaks ties before ranking; tie-free columns are
      left untouched, so this agrees bit-for-bit with ``average`` on
      tie-free data.

    Parameters
    ----------
    samples : SampleMatrix or array-like, shape (n, d)
    tie_policy : {"average", "dense", "jitter"}
    jitter_seed : int
        Only used by the jitter policy.

    Returns
    -------
    PseudoObservations
    """
    sm = _as_sample_matrix(samples)
    if tie_policy not in TIE_POLICIES:
        raise ParameterError(
            f"tie_policy must be one of {TIE_POLICIES}, got {tie_policy!r}"
        )
    n = sm.n
    out = np.empty_like(sm.values)
    for j in range(sm.d):
        col = sm.values[:, j]
        if tie_policy == "jitter":
            col = col + _column_jitter(col, jitter_seed)
            ranks = rankdata(col, method="average")
        else:
            ranks = rankdata(col, method=tie_policy)
        out[:, j] = ranks / (n + 1)
    return PseudoObservations(
        out,
        tie_policy=tie_policy,
        jitter_seed=jitter_seed if tie_policy == "jitter" else None,
    )


def _log_unit_ball_volume(d: int, metric: str) -> float:
    if metric == "chebyshev":
        return d * LN2
    # euclidean: pi^(d/2) / Gamma(d/2 + 1)
    return 0.5 * d * float(np.log(np.pi)) - float(gammaln(0.5 * d + 1.0))


def knn_entropy(points, k: int = 3, metric: str = "chebyshev") -> EntropyEstimate:
    """Kozachenko-Leonenko differential entropy estimate in nats.

    H_hat = psi(n) - psi(k) + log c_d + (d/n) * sum_i log eps_i, where
    eps_i is the distance from point i to its k-th nearest neighbor and
    c_d the unit-ball volume of the chosen metric.  Coincident points
    produce eps_i = 0; those are floored at 1e-12 and counted in
    ``floored_pairs``.

    Parameters
    ----------
    points : array-like, shape (n, d) or (n,)
    k : int
        Neighbor order, 1 <= k < n.
    metric : {"chebyshev", "euclidean"}

    Returns
    -------
    EntropyEstimate
    """
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if x.ndim != 2:
        raise DataValidationError("points must be a 1-d or 2-d array")
    if not np.isfinite(x).all():
        raise DataValidationError("points contain non-finite values")
    n, d = x.shape
    if metric not in METRICS:
        raise ParameterError(f"metric must be one of {METRICS}, got {metric!r}")
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    if k >= n:
        raise ParameterError(f"need k < n, got k={k} with n={n} samples")

    p = np.inf if metric == "chebyshev" else 2
    tree = cKDTree(x)
    dist, _ = tree.query(x, k=k + 1, p=p)
    eps = dist[:, -1]

    floored = int((eps < EPS_FLOOR).sum())
    if floored == n:
        raise DegenerateSampleError(
            "every k-th neighbor distance is zero; the sample is degenerate "
            "(too many duplicate points for the requested k)"
        )
    eps = np.maximum(eps, EPS_FLOOR)
    value = (
        float(digamma(n))
        - float(digamma(k))
        + _log_unit_ball_volume(d, metric)
        + d * float(np.mean(np.log(eps)))
    )
    return EntropyEstimate(value=value, k=k, n=n, d=d, method="knn_kl",
                           floored_pairs=floored)


def copula_entropy(samples, k: int = 3, tie_policy: str = "average",
                   jitter_seed: int = 0) -> EntropyEstimate:
    """Copula entropy of a d >= 2 sample in nats (non-positive in theory).

    Two-step estimator: rank-transform each column to pseudo-observations,
    then apply the k-NN entropy estimator (Chebyshev metric) on the unit
    hypercube.  The result depends on the data only through its column
    ranks, hence is bit-identical under strictly increasing per-column
    transformations of tie-free input.

    Raises
    ------
    ParameterError
        If the input has fewer than two columns.
    DegenerateSampleError
        If ties collapse the pseudo-observations so far that every k-th
        neighbor distance is zero; use tie_policy="jitter" for such data.
    """
    sm = _as_sample_matrix(samples)
    if sm.d < 2:
        raise ParameterError(
            "copula entropy requires at least 2 columns; it is not defined "
            "as a dependence measure for a single variable"
        )
    u = rank_transform(sm, tie_policy=tie_policy, jitter_seed=jitter_seed)
    try:
        return knn_entropy(u.values, k=k, metric="chebyshev")
    except DegenerateSampleError as err:
        raise DegenerateSampleError(
            f"{err}; for data with exact duplicates use tie_policy='jitter'"
        ) from err


def mutual_information(samples, k: int = 3, tie_policy: str = "average",
                       jitter_seed: int = 0) -> EntropyEstimate:
    """Multivariate mutual information in nats: the negative copula entropy."""
    ce = copula_entropy(samples, k=k, tie_policy=tie_policy,
                        jitter_seed=jitter_seed)
    return EntropyEstimate(value=-ce.value, k=ce.k, n=ce.n, d=ce.d,
                           method=ce.method, floored_pairs=ce.floored_pairs)


def entropy_decomposition_check(samples, k: int = 3,
                                tie_policy: str = "average",
                                jitter_seed: int = 0) -> DecompositionReport:
    """Estimate joint entropy, marginal entropies, and copula entropy.

    The three pieces are estimated independently (joint k-NN on the raw
    samples, k-NN per column, rank-based copula entropy), so the residual
    joint - sum(marginals) - copula measures estimator consistency: it is
    zero for the underlying distribution and small for good estimates.
    """
    sm = _as_sample_matrix(samples)
    if sm.d < 2:
        raise ParameterError("decomposition requires at least 2 columns")
    joint = knn_entropy(sm.values, k=k)
    marginals = [
        knn_entropy(sm.values[:, j], k=k).value for j in range(sm.d)
    ]
    ce = copula_entropy(sm, k=k, tie_policy=tie_policy,
                        jitter_seed=jitter_seed)
    return DecompositionReport(
        joint_entropy=joint.value,
        marginal_entropies=marginals,
        copula_entropy=ce.value,
    )
