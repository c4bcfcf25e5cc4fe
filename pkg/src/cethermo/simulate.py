"""Seeded Metropolis Monte Carlo for small periodic particle systems.

Samples the position factor of the canonical distribution with
single-particle random-walk moves (uniform cube proposals, acceptance
min(1, exp(-beta*dV))).  Momenta are never simulated: they factorize
exactly into independent Gaussians and are drawn analytically.

All randomness comes from numpy's PCG64 generator seeded explicitly, so
runs are reproducible across platforms.
"""

import csv
import hashlib
import json
import warnings
from dataclasses import dataclass, field, asdict

import numpy as np

from .errors import (
    ConsistencyError,
    DataValidationError,
    ParameterError,
)

POTENTIAL_KINDS = ("ideal", "cosine_well", "lennard_jones")

# pair distances below this are floored before evaluating the potential
OVERLAP_FLOOR = 1e-9

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class BoxSpec:
    """Periodic simulation box in reduced length units."""

    dimension: int = 1
    side_length: float = 1.0
    periodic: bool = True

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise ParameterError(f"dimension must be 1, 2, or 3, got {self.dimension}")
        if not self.side_length > 0:
            raise ParameterError(f"side_length must be > 0, got {self.side_length}")
        if not self.periodic:
            raise ParameterError("only periodic boxes are supported")

    @property
    def volume(self) -> float:
        return self.side_length ** self.dimension


@dataclass(frozen=True)
class UnitsSpec:
    """Reduced units: k_B = h = 1, particle mass m defaults to 1."""

    k_B: float = 1.0
    h: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        for name in ("k_B", "h", "m"):
            if not getattr(self, name) > 0:
                raise ParameterError(f"{name} must be positive")


@dataclass(frozen=True)
class PotentialSpec:
    """Pairwise-additive potential: ideal, cosine well, or Lennard-Jones.

    - ideal: zero energy for every configuration.
    - cosine_well: u(r) = -epsilon * cos(2*pi*r/L), periodic by design.
    - lennard_jones: 4*epsilon*((sigma/r)**12 - (sigma/r)**6), truncated
      at r_cut and, when ``shift`` is set, shifted so u(r_cut) = 0.
    """

    kind: str = "ideal"
    epsilon: float = 1.0
    sigma: float = 1.0
    r_cut: float = 2.5
    shift: bool = True

    def __post_init__(self):
        if self.kind not in POTENTIAL_KINDS:
            raise ParameterError(
                f"kind must be one of {POTENTIAL_KINDS}, got {self.kind!r}"
            )
        if self.kind == "lennard_jones":
            if not (self.sigma > 0 and self.r_cut > 0):
                raise ParameterError("lennard_jones needs sigma > 0 and r_cut > 0")

    @classmethod
    def ideal(cls) -> "PotentialSpec":
        return cls(kind="ideal")

    @classmethod
    def cosine_well(cls, epsilon: float = 1.0) -> "PotentialSpec":
        return cls(kind="cosine_well", epsilon=epsilon)

    @classmethod
    def lennard_jones(cls, epsilon: float = 1.0, sigma: float = 1.0,
                      r_cut: float | None = None, shift: bool = True) -> "PotentialSpec":
        if r_cut is None:
            r_cut = 2.5 * sigma
        return cls(kind="lennard_jones", epsilon=epsilon, sigma=sigma,
                   r_cut=r_cut, shift=shift)


@dataclass(frozen=True)
class SimParams:
    """Run-control parameters for a canonical Monte Carlo chain."""

    N: int
    beta: float
    sweeps: int
    burn_in: int = 0
    thinning: int = 1
    max_displacement: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.N < 1:
            raise ParameterError(f"N must be >= 1, got {self.N}")
        if not self.beta > 0:
            raise ParameterError(f"beta must be > 0, got {self.beta}")
        if self.burn_in < 0 or self.burn_in >= self.sweeps:
            raise ParameterError("need 0 <= burn_in < sweeps")
        if self.thinning < 1:
            raise ParameterError(f"thinning must be >= 1, got {self.thinning}")
        if not self.max_displacement > 0:
            raise ParameterError("max_displacement must be > 0")

    @property
    def n_samples(self) -> int:
        # integer division: sweep t is recorded iff t > burn_in and
        # (t - burn_in) % thinning == 0
        return (self.sweeps - self.burn_in) // self.thinning


@dataclass
class Trajectory:
    """Recorded configurations from one chain, plus run provenance."""

    configurations: np.ndarray  # (samples, N, dimension), wrapped to [0, L)
    acceptance_rate: float
    params: SimParams
    potential: PotentialSpec
    box: BoxSpec
    units: UnitsSpec
    diagnostics: dict = field(default_factory=dict)

    @property
    def n_samples(self) -> int:
        return self.configurations.shape[0]


def minimum_image(delta, length: float):
    """Shift coordinate differences to the nearest periodic image."""
    delta = np.asarray(delta, dtype=float)
    return delta - length * np.round(delta / length)


def pair_energy(potential: PotentialSpec, r, box_length: float):
    """Pair energy at separation(s) r; vectorized over r."""
    r = np.asarray(r, dtype=float)
    if potential.kind == "ideal":
        return np.zeros_like(r)
    if potential.kind == "cosine_well":
        return -potential.epsilon * np.cos(2.0 * np.pi * r / box_length)
    # lennard_jones; floor tiny separations so the energy stays finite
    rr = np.maximum(r, OVERLAP_FLOOR)
    inv6 = (potential.sigma / rr) ** 6
    u = 4.0 * potential.epsilon * (inv6 * inv6 - inv6)
    if potential.shift:
        inv6c = (potential.sigma / potential.r_cut) ** 6
        u = u - 4.0 * potential.epsilon * (inv6c * inv6c - inv6c)
    return np.where(rr <= potential.r_cut, u, 0.0)


def total_potential(config, potential: PotentialSpec, box: BoxSpec,
                    diagnostics: dict | None = None) -> float:
    """Total energy: sum over unordered pairs with minimum-image distances."""
    x = np.asarray(config, dtype=float)
    if x.ndim != 2 or x.shape[1] != box.dimension:
        raise DataValidationError(
            f"config must have shape (N, {box.dimension})"
        )
    n = x.shape[0]
    if n < 2 or potential.kind == "ideal":
        return 0.0
    iu, ju = np.triu_indices(n, k=1)
    delta = minimum_image(x[iu] - x[ju], box.side_length)
    r = np.sqrt((delta * delta).sum(axis=-1))
    if diagnostics is not None:
        diagnostics["overlap_floored"] = (
            diagnostics.get("overlap_floored", 0) + int((r < OVERLAP_FLOOR).sum())
        )
    return float(pair_energy(potential, r, box.side_length).sum())


def run_canonical(params: SimParams, potential: PotentialSpec, box: BoxSpec,
                  units: UnitsSpec = UnitsSpec()) -> Trajectory:
    """Run a single-particle-move Metropolis chain and record configurations.

    Deterministic given ``params.seed``.  Incremental per-move energy
    deltas are cross-checked against a full recomputation every 1000
    sweeps; the largest discrepancy is reported in
    ``diagnostics["max_energy_drift"]``.

    The initial configuration is drawn uniformly in the box from the same
    seeded generator that drives the chain.
    """
    rng = np.random.default_rng(params.seed)
    N, dim, L = params.N, box.dimension, box.side_length
    dmax = params.max_displacement
    beta = params.beta
    ideal = potential.kind == "ideal"

    pos = rng.uniform(0.0, L, size=(N, dim))
    others = [np.array([j for j in range(N) if j != i]) for i in range(N)]

    def one_particle_energy(xi, i):
        if N < 2:
            return 0.0, 0
        delta = minimum_image(pos[others[i]] - xi, L)
        r = np.sqrt((delta * delta).sum(axis=-1))
        floored = int((r < OVERLAP_FLOOR).sum())
        return float(pair_energy(potential, r, L).sum()), floored

    running = 0.0 if ideal else total_potential(pos, potential, box)
    n_out = params.n_samples
    configs = np.empty((n_out, N, dim))
    out = 0
    accepted = 0
    proposed = 0
    accepted_burn_in = 0
    max_drift = 0.0
    overlap_floored = 0

    for sweep in range(1, params.sweeps + 1):
        steps = rng.uniform(-dmax, dmax, size=(N, dim))
        accept_draws = None if ideal else rng.random(N)
        for i in range(N):
            proposed += 1
            new = (pos[i] + steps[i]) % L
            new[new >= L] -= L  # float mod can land exactly on L
            if ideal:
                ok = True
                dv = 0.0
            else:
                e_old, fl_old = one_particle_energy(pos[i], i)
                e_new, fl_new = one_particle_energy(new, i)
                overlap_floored += fl_old + fl_new
                dv = e_new - e_old
                ok = dv <= 0.0 or accept_draws[i] < np.exp(-beta * dv)
            if ok:
                pos[i] = new
                running += dv
                accepted += 1
                if sweep <= params.burn_in:
                    accepted_burn_in += 1
        if not ideal and sweep % 1000 == 0:
            full = total_potential(pos, potential, box)
            max_drift = max(max_drift, abs(full - running))
            running = full
        if sweep > params.burn_in and (sweep - params.burn_in) % params.thinning == 0:
            configs[out] = pos
            out += 1

    if params.burn_in > 0 and accepted_burn_in == 0:
        warnings.warn(
            "no proposals accepted during burn-in; the chain is not mixing "
            "(max_displacement may be too large for this potential)",
            RuntimeWarning,
        )

    return Trajectory(
        configurations=configs,
        acceptance_rate=accepted / proposed,
        params=params,
        potential=potential,
        box=box,
        units=units,
        diagnostics={
            "max_energy_drift": max_drift,
            "overlap_floored": overlap_floored,
        },
    )


def sample_momenta(n_samples: int, n_particles: int, dimension: int,
                   beta: float, units: UnitsSpec = UnitsSpec(),
                   seed: int = 0) -> np.ndarray:
    """Draw Maxwell-Boltzmann momenta: i.i.d. Gaussians, variance m/beta.

    Returns an (n_samples, n_particles, dimension) array, deterministic
    given the seed.
    """
    if n_samples < 1 or n_particles < 1:
        raise ParameterError("n_samples and n_particles must be >= 1")
    if dimension not in (1, 2, 3):
        raise ParameterError(f"dimension must be 1, 2, or 3, got {dimension}")
    if not beta > 0:
        raise ParameterError(f"beta must be > 0, got {beta}")
    scale = np.sqrt(units.m / beta)
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, scale, size=(n_samples, n_particles, dimension))


# ---------------------------------------------------------------------------
# trajectory files: CSV of coordinates plus a JSON metadata sidecar

def _trajectory_csv_bytes(traj: Trajectory) -> bytes:
    lines = ["sample,particle,axis,coordinate"]
    s, n, dim = traj.configurations.shape
    for a in range(s):
        for i in range(n):
            for ax in range(dim):
                lines.append(f"{a},{i},{ax},{traj.configurations[a, i, ax]!r}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def trajectory_metadata(traj: Trajectory, csv_sha256: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "params": asdict(traj.params),
        "potential": asdict(traj.potential),
        "box": asdict(traj.box),
        "units": asdict(traj.units),
        "acceptance_rate": traj.acceptance_rate,
        "seed": traj.params.seed,
        "n_samples": traj.n_samples,
        "diagnostics": traj.diagnostics,
        "trajectory_sha256": csv_sha256,
    }


def write_trajectory(traj: Trajectory, csv_path, meta_path) -> None:
    """Write the trajectory CSV and its JSON metadata sidecar.

    Output is byte-identical for identical trajectories: coordinates are
    serialized with repr (full round-trip precision) and the JSON is
    emitted with sorted keys and fixed indentation.
    """
    payload = _trajectory_csv_bytes(traj)
    with open(csv_path, "wb") as fh:
        fh.write(payload)
    digest = hashlib.sha256(payload).hexdigest()
    meta = trajectory_metadata(traj, digest)
    with open(meta_path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_trajectory(csv_path, meta_path, verify_hash: bool = True) -> Trajectory:
    """Load a trajectory written by ``write_trajectory``.

    Raises ConsistencyError when the metadata hash does not match the
    CSV contents (the pair comes from different runs or was edited).
    """
    with open(csv_path, "rb") as fh:
        payload = fh.read()
    with open(meta_path, "r", encoding="utf-8") as fh:
        meta = json.load(fh)
    if verify_hash:
        digest = hashlib.sha256(payload).hexdigest()
        expected = meta.get("trajectory_sha256")
        if digest != expected:
            raise ConsistencyError(
                "trajectory CSV does not match metadata: sha256 "
                f"{digest} != {expected}"
            )

    text = payload.decode("utf-8").splitlines()
    reader = csv.reader(text)
    header = next(reader, None)
    if header != ["sample", "particle", "axis", "coordinate"]:
        raise DataValidationError(
            "trajectory CSV must start with header sample,particle,axis,coordinate"
        )
    params = SimParams(**meta["params"])
    potential = PotentialSpec(**meta["potential"])
    box = BoxSpec(**meta["box"])
    units = UnitsSpec(**meta["units"])
    s, n, dim = meta["n_samples"], params.N, box.dimension
    configs = np.empty((s, n, dim))
    count = 0
    for row in reader:
        if not row:
            continue
        try:
            a, i, ax = int(row[0]), int(row[1]), int(row[2])
            configs[a, i, ax] = float(row[3])
        except (IndexError, ValueError) as err:
            raise DataValidationError(
                f"bad trajectory CSV row {count + 2}: {row!r}"
            ) from err
        count += 1
    if count != s * n * dim:
        raise DataValidationError(
            f"trajectory CSV has {count} coordinate rows, expected {s * n * dim}"
        )
    return Trajectory(
        configurations=configs,
        acceptance_rate=meta["acceptance_rate"],
        params=params,
        potential=potential,
        box=box,
        units=units,
        diagnostics=meta.get("diagnostics", {}),
    )
