"""Streaming Monte Carlo for the window argmin chain of a random walk.

Long increment streams are turned into chain trajectories block by block:
each block's partial sums are appended to the retained window tail, the
sliding last-argmin runs over the concatenation, and the buffer is
re-anchored by subtracting its minimum (the argmin is shift invariant, so
this only protects float precision on long runs).
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from ._sampling import derive_rng, sample_stable_increments
from .chain import ArgminChainKernel, ssrw_kernel, theta_kernel
from .stable import StableLaw
from .window import sliding_last_argmin

_BLOCK = 1 << 20
_ROW_THRESHOLD = 1000


@dataclass(frozen=True)
class WalkModel:
    """Increment law of the simulated walk.

    kind: "ssrw" (+-1 fair steps), "gaussian", or "stable" with (alpha,
    beta).  theta is the constant positivity P(S_n > 0) when one exists
    (None for the lattice walk, whose sign probabilities vary with n).
    """

    kind: str
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("ssrw", "gaussian", "stable"):
            raise ValueError(f"unsupported model {self.kind!r}")
        if self.kind == "stable":
            if self.alpha is None or self.beta is None:
                raise ValueError("stable model needs alpha and beta")
            object.__setattr__(self, "_law", StableLaw(self.alpha, self.beta))
        elif self.alpha is not None or self.beta is not None:
            raise ValueError(f"{self.kind} takes no (alpha, beta)")

    @property
    def law(self) -> StableLaw | None:
        return getattr(self, "_law", None)

    @property
    def theta(self) -> float | None:
        if self.kind == "gaussian":
            return 0.5
        if self.kind == "stable":
            return self.law.rho
        return None

    def label(self) -> str:
        if self.kind == "stable":
            return f"stable({self.alpha:g},{self.beta:g})"
        return self.kind


@dataclass
class SimulationReport:
    """Empirical chain statistics and their comparison against exact values."""

    model: str
    N: int
    steps: int
    seed: int
    replicas: int
    row_counts: np.ndarray
    trans_counts: np.ndarray
    pi_hat: np.ndarray
    P_hat: np.ndarray
    tv_pi: float = float("nan")
    max_row_dev: float = float("nan")
    dev_threshold: int = _ROW_THRESHOLD
    band: float = float("nan")
    verdict: str = "unchecked"
    failed_cells: list[tuple[int, int, float]] = field(default_factory=list)

    def to_json(self, path: str | Path) -> None:
        payload = dataclasses.asdict(self)
        for key in ("row_counts", "trans_counts", "pi_hat", "P_hat"):
            payload[key] = payload[key].tolist()
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")

    def write_matrix_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            import csv

            w = csv.writer(fh)
            w.writerow(["row", "col", "value"])
            for i in range(self.N + 1):
                for j in range(self.N + 1):
                    w.writerow([i, j, f"{self.P_hat[i, j]:.17g}"])


def _increment_sampler(
    model: WalkModel, rng: np.random.Generator
) -> Callable[[int], np.ndarray]:
    if model.kind == "ssrw":
        return lambda m: (
            rng.integers(0, 2, size=m, dtype=np.int64) * 2 - 1
        ).astype(np.float64)
    if model.kind == "gaussian":
        return lambda m: rng.standard_normal(m)
    law = model.law
    return lambda m: sample_stable_increments(law, rng, m)


def chain_states_from_increments(increments: Sequence[float], N: int) -> np.ndarray:
    """Chain states A(0), A(1), ... read off a concrete increment sequence.

    The walk starts at S_0 = 0; window n covers partial sums S_n..S_{n+N}
    and the state is the offset of the last window minimum.
    """
    inc = np.asarray(increments, dtype=np.float64)
    if len(inc) < N:
        raise ValueError("need at least N increments for one window")
    values = np.concatenate(([0.0], np.cumsum(inc)))
    return sliding_last_argmin(values, N + 1)


def run_replica(
    model: WalkModel, N: int, steps: int, seed: int, replica: int = 0
) -> SimulationReport:
    """One replica: steps counted transitions after an N-step warm-up."""
    if N < 1 or steps < 1:
        raise ValueError("N and steps must be >= 1")
    rng = derive_rng(seed, replica)
    sample = _increment_sampler(model, rng)
    width = N + 1
    n_trans = steps + N
    total_windows = n_trans + 1
    n1 = N + 1

    row_counts = np.zeros(n1, dtype=np.int64)
    trans_counts = np.zeros((n1, n1), dtype=np.int64)
    block = max(_BLOCK, 4 * width)

    produced = 0
    prev_state = -1
    tail: np.ndarray | None = None
    while produced < total_windows:
        if tail is None:
            m = min(block, total_windows - 1 + N)
            values = np.empty(m + 1)
            values[0] = 0.0
            np.cumsum(sample(m), out=values[1:])
        else:
            m = min(block, total_windows - produced)
            values = np.empty(N + m)
            values[:N] = tail
            values[N:] = tail[-1] + np.cumsum(sample(m))
        states = sliding_last_argmin(values, width)
        take = min(len(states), total_windows - produced)
        states = states[:take]

        frm = np.empty(take, dtype=np.int64)
        frm[0] = prev_state
        frm[1:] = states[:-1]
        idx = np.arange(produced - 1, produced - 1 + take)
        mask = (idx >= N) & (idx < n_trans)
        np.add.at(trans_counts, (frm[mask], states[mask]), 1)
        np.add.at(row_counts, frm[mask], 1)

        prev_state = int(states[-1])
        produced += take
        tail = values[-N:].copy()
        tail -= tail.min()

    pi_hat = row_counts / steps
    P_hat = np.zeros((n1, n1))
    nz = row_counts > 0
    P_hat[nz] = trans_counts[nz] / row_counts[nz, None]
    return SimulationReport(
        model=model.label(),
        N=N,
        steps=steps,
        seed=seed,
        replicas=1,
        row_counts=row_counts,
        trans_counts=trans_counts,
        pi_hat=pi_hat,
        P_hat=P_hat,
    )


def merge_reports(reports: Sequence[SimulationReport]) -> SimulationReport:
    """Combine replica reports by adding counts; order independent."""
    if not reports:
        raise ValueError("nothing to merge")
    first = reports[0]
    for r in reports[1:]:
        if r.model != first.model or r.N != first.N or r.seed != first.seed:
            raise ValueError("reports come from different runs")
    row_counts = sum(r.row_counts for r in reports)
    trans_counts = sum(r.trans_counts for r in reports)
    steps = sum(r.steps for r in reports)
    n1 = first.N + 1
    pi_hat = row_counts / steps
    P_hat = np.zeros((n1, n1))
    nz = row_counts > 0
    P_hat[nz] = trans_counts[nz] / row_counts[nz, None]
    return SimulationReport(
        model=first.model,
        N=first.N,
        steps=steps,
        seed=first.seed,
        replicas=sum(r.replicas for r in reports),
        row_counts=row_counts,
        trans_counts=trans_counts,
        pi_hat=pi_hat,
        P_hat=P_hat,
    )


def exact_kernel_for(model: WalkModel, N: int) -> ArgminChainKernel:
    """The exact kernel a simulation of this model should reproduce."""
    if model.kind == "ssrw":
        return ssrw_kernel(N)
    return theta_kernel(model.theta, N)


def empirical_vs_exact(
    report: SimulationReport, kernel: ArgminChainKernel, band: float
) -> SimulationReport:
    """Attach TV distance, row deviations, and a pass/fail verdict.

    Rows with fewer than the visit threshold are skipped for the matrix
    deviation (their conditional frequencies are too noisy to judge).
    """
    if kernel.N != report.N:
        raise ValueError("kernel and report have different N")
    tv = 0.5 * float(np.abs(report.pi_hat - kernel.pi).sum())
    max_dev = 0.0
    failed: list[tuple[int, int, float]] = []
    for i in range(report.N + 1):
        if report.row_counts[i] < report.dev_threshold:
            continue
        devs = np.abs(report.P_hat[i] - kernel.P[i])
        max_dev = max(max_dev, float(devs.max()))
        for j in np.nonzero(devs > band)[0]:
            failed.append((i, int(j), float(devs[j])))
    if tv > band:
        failed.append((-1, -1, tv))
    verdict = "pass" if not failed else "fail"
    return dataclasses.replace(
        report,
        tv_pi=tv,
        max_row_dev=max_dev,
        band=band,
        verdict=verdict,
        failed_cells=failed,
    )


def run_chain(
    model: WalkModel,
    N: int,
    steps: int,
    seed: int,
    *,
    band: float = 0.01,
    replicas: int = 1,
) -> SimulationReport:
    """Simulate, tally, and compare against the exact kernel."""
    per = steps // replicas
    counts = [per + (1 if i < steps % replicas else 0) for i in range(replicas)]
    reports = [
        run_replica(model, N, c, seed, replica=i)
        for i, c in enumerate(counts)
        if c > 0
    ]
    merged = merge_reports(reports) if len(reports) > 1 else reports[0]
    return empirical_vs_exact(merged, exact_kernel_for(model, N), band)


def run_kernel_chain(
    kernel: ArgminChainKernel, steps: int, seed: int
) -> SimulationReport:
    """Sample the kernel's own Markov chain; self-consistency oracle.

    Starts from the stationary law, so no warm-up is discarded.
    """
    rng = derive_rng(seed, 0)
    n1 = kernel.N + 1
    cum = np.cumsum(kernel.P, axis=1)
    cum[:, -1] = 1.0
    row_counts = np.zeros(n1, dtype=np.int64)
    trans_counts = np.zeros((n1, n1), dtype=np.int64)
    state = int(np.searchsorted(np.cumsum(kernel.pi), rng.random()))
    u = rng.random(steps)
    for k in range(steps):
        nxt = int(np.searchsorted(cum[state], u[k], side="right"))
        row_counts[state] += 1
        trans_counts[state, nxt] += 1
        state = nxt
    pi_hat = row_counts / steps
    P_hat = np.zeros((n1, n1))
    nz = row_counts > 0
    P_hat[nz] = trans_counts[nz] / row_counts[nz, None]
    return SimulationReport(
        model="kernel-resample",
        N=kernel.N,
        steps=steps,
        seed=seed,
        replicas=1,
        row_counts=row_counts,
        trans_counts=trans_counts,
        pi_hat=pi_hat,
        P_hat=P_hat,
    )
