"""Parallel ensemble simulation with mergeable streaming statistics.

``simulate_ensemble`` runs the numba kernels and returns per-trial arrays at
the requested checkpoints; ``run_ensemble`` reduces those into per-checkpoint
:class:`EnsembleStats`.  The reduction folds fixed-size chunks of trials and
merges them in a deterministic order, so results are independent of thread
count and, up to float round-off, of merge order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numba
import numpy as np

from . import kernels
from .params import ModelParams
from .rng import MASK64, TrialStream

DEFAULT_MEMORY_BUDGET = 2**31  # bytes of checkpoint output storage
_CHUNK = 4096  # trials per leaf accumulator in the deterministic fold


class ResourceLimitError(RuntimeError):
    """Requested run would exceed the configured output memory budget."""


@dataclass(frozen=True)
class SeedSpec:
    """Addresses one trial's random stream: (master_seed, trial_index)."""

    master_seed: int
    trial_index: int = 0

    def __post_init__(self):
        if not (0 <= self.master_seed <= MASK64):
            raise ValueError("master_seed must fit in 64 bits")
        if self.trial_index < 0:
            raise ValueError("trial_index must be >= 0")

    def stream(self) -> TrialStream:
        return TrialStream(self.master_seed, self.trial_index)


@dataclass
class Histogram:
    """Fixed-bin counts; mergeable only with an identical bin spec."""

    edges: np.ndarray
    counts: np.ndarray

    @classmethod
    def from_values(cls, values: np.ndarray, edges: np.ndarray) -> "Histogram":
        counts, _ = np.histogram(values, bins=edges)
        return cls(edges=np.asarray(edges, dtype=np.float64), counts=counts)

    def merge(self, other: "Histogram") -> "Histogram":
        if not np.array_equal(self.edges, other.edges):
            raise ValueError("histogram bin specs differ")
        return Histogram(edges=self.edges, counts=self.counts + other.counts)


@dataclass
class EnsembleStats:
    """Streaming accumulator: count, mean, M2 (sum of squared deviations), extrema.

    ``merge`` uses the pairwise (Chan) update, so per-worker accumulators can
    be folded in any order; ``variance`` follows the n-1 convention with the
    single-sample value defined as 0.
    """

    count: int = 0
    mean: float = 0.0
    M2: float = 0.0
    min: float = float("inf")
    max: float = float("-inf")
    histogram: Optional[Histogram] = None

    @classmethod
    def from_values(
        cls, values: np.ndarray, histogram_edges: Optional[np.ndarray] = None
    ) -> "EnsembleStats":
        values = np.asarray(values, dtype=np.float64)
        if values.size == 0:
            return cls()
        mean = float(values.mean())
        hist = None
        if histogram_edges is not None:
            hist = Histogram.from_values(values, histogram_edges)
        return cls(
            count=int(values.size),
            mean=mean,
            M2=float(np.sum((values - mean) ** 2)),
            min=float(values.min()),
            max=float(values.max()),
            histogram=hist,
        )

    @property
    def variance(self) -> float:
        if self.count <= 1:
            return 0.0
        return self.M2 / (self.count - 1)

    @property
    def stderr(self) -> float:
        if self.count <= 1:
            return 0.0
        return (self.variance / self.count) ** 0.5

    def merge(self, other: "EnsembleStats") -> "EnsembleStats":
        if self.count == 0:
            return other
        if other.count == 0:
            return self
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / n
        m2 = self.M2 + other.M2 + delta * delta * self.count * other.count / n
        hist = None
        if self.histogram is not None and other.histogram is not None:
            hist = self.histogram.merge(other.histogram)
        return EnsembleStats(
            count=n,
            mean=mean,
            M2=m2,
            min=min(self.min, other.min),
            max=max(self.max, other.max),
            histogram=hist,
        )


@dataclass
class EnsembleArrays:
    """Per-trial checkpoint values (rows = trials, cols = checkpoints)."""

    checkpoints: np.ndarray
    T: np.ndarray
    S: np.ndarray
    sign_changes: Optional[np.ndarray] = None
    M: Optional[np.ndarray] = None
    A: Optional[np.ndarray] = None
    V2: Optional[np.ndarray] = None
    U2: Optional[np.ndarray] = None
    max_abs_R: Optional[np.ndarray] = None
    max_resid_gap: Optional[np.ndarray] = None
    max_doob_gap: Optional[np.ndarray] = None


@dataclass
class EnsembleResult:
    """Per-checkpoint statistics over all trials."""

    params: ModelParams
    n_max: int
    trials: int
    master_seed: int
    checkpoints: np.ndarray
    stats: dict = field(default_factory=dict)  # name -> list[EnsembleStats] per checkpoint


def geometric_checkpoints(n_max: int, count: int = 20, start: int = 100) -> list[int]:
    """About ``count`` geometrically spaced integers ending exactly at n_max."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    lo = min(start, n_max)
    pts = np.unique(np.round(np.geomspace(lo, n_max, count)).astype(np.int64))
    return [int(p) for p in pts]


def set_threads(n: Optional[int]) -> None:
    """Cap the numba worker count (None leaves the default)."""
    if n is not None:
        numba.set_num_threads(max(1, int(n)))


def simulate_ensemble(
    params: ModelParams,
    n_max: int,
    trials: int,
    checkpoints: Optional[Sequence[int]] = None,
    seed: int = 0,
    include_decomposition: bool = False,
    trial_offset: int = 0,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> EnsembleArrays:
    """Run ``trials`` independent paths, recording values at the checkpoints.

    Trial ``i`` uses the stream of ``SeedSpec(seed, trial_offset + i)``; the
    result is a pure function of those pairs, independent of threading.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    cps = list(checkpoints) if checkpoints is not None else geometric_checkpoints(n_max)
    if any(cps[i] >= cps[i + 1] for i in range(len(cps) - 1)):
        raise ValueError("checkpoints must be strictly increasing")
    if cps[0] < 1 or cps[-1] > n_max:
        raise ValueError("checkpoints must lie in [1, n_max]")

    ncp = len(cps)
    ncols = 7 if include_decomposition else 3
    needed = trials * ncp * 8 * ncols
    if needed > memory_budget:
        raise ResourceLimitError(
            f"{trials} trials x {ncp} checkpoints needs {needed} output bytes "
            f"(> budget {memory_budget}); raise the budget or coarsen checkpoints"
        )

    master = np.uint64(seed)
    cps_arr = np.asarray(cps, dtype=np.int64)
    w, inv_hist = kernels.step_tables(params.gamma, n_max)
    T = np.empty((trials, ncp))
    S = np.empty((trials, ncp))
    if include_decomposition:
        M = np.empty((trials, ncp))
        A = np.empty((trials, ncp))
        V2 = np.empty((trials, ncp))
        U2 = np.empty((trials, ncp))
        max_abs_R = np.empty(trials)
        max_resid_gap = np.empty(trials)
        max_doob_gap = np.empty(trials)
        kernels.decomposition_ensemble(
            params.alpha, params.beta, params.gamma, n_max, w, inv_hist,
            master, trial_offset, cps_arr,
            T, S, M, A, V2, U2, max_abs_R, max_resid_gap, max_doob_gap,
        )
        return EnsembleArrays(
            checkpoints=cps_arr, T=T, S=S, M=M, A=A, V2=V2, U2=U2,
            max_abs_R=max_abs_R, max_resid_gap=max_resid_gap,
            max_doob_gap=max_doob_gap,
        )
    cross = np.empty((trials, ncp), dtype=np.int64)
    kernels.walk_ensemble(
        params.alpha, params.beta, n_max, w, inv_hist,
        master, trial_offset, cps_arr, T, S, cross,
    )
    return EnsembleArrays(checkpoints=cps_arr, T=T, S=S, sign_changes=cross)


def fold_stats(values: np.ndarray, chunk: int = _CHUNK) -> EnsembleStats:
    """Deterministic chunked fold of per-trial values into one accumulator."""
    acc = EnsembleStats()
    for lo in range(0, values.shape[0], chunk):
        acc = acc.merge(EnsembleStats.from_values(values[lo : lo + chunk]))
    return acc


def run_ensemble(
    params: ModelParams,
    n_max: int,
    trials: int,
    checkpoints: Optional[Sequence[int]] = None,
    seed: int = 0,
    include_decomposition: bool = False,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> EnsembleResult:
    """Ensemble statistics per checkpoint; deterministic given ``seed``."""
    arrays = simulate_ensemble(
        params, n_max, trials,
        checkpoints=checkpoints, seed=seed,
        include_decomposition=include_decomposition,
        memory_budget=memory_budget,
    )
    stats: dict[str, list[EnsembleStats]] = {}
    columns = {"T": arrays.T, "S": arrays.S}
    if arrays.sign_changes is not None:
        columns["sign_changes"] = arrays.sign_changes
    if include_decomposition:
        columns.update({"M": arrays.M, "A": arrays.A, "V2": arrays.V2, "U2": arrays.U2})
    for name, mat in columns.items():
        stats[name] = [fold_stats(mat[:, j]) for j in range(mat.shape[1])]
    if include_decomposition:
        stats["max_abs_R"] = [fold_stats(arrays.max_abs_R)]
        stats["max_resid_gap"] = [fold_stats(arrays.max_resid_gap)]
        stats["max_doob_gap"] = [fold_stats(arrays.max_doob_gap)]
    return EnsembleResult(
        params=params, n_max=n_max, trials=trials, master_seed=seed,
        checkpoints=arrays.checkpoints, stats=stats,
    )
