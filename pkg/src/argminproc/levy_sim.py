"""Discretized stable paths and the empirical law of their window argmin.

A path is simulated on a mesh h with increments scaled by h^(1/alpha)
(self-similarity), the argmin location over the trailing unit window is
extracted with the shared sliding-window kernel, and the resulting
occupation and transition statistics are compared against the exact
semigroup quantities.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ._sampling import derive_rng, sample_stable_increments
from .stable import StableLaw, arcsine_cdf, atom_weight, transition_density
from .window import sliding_last_argmin


@dataclass(frozen=True)
class PathGrid:
    """One simulated path: values[k] = X(k * mesh), values[0] = 0."""

    mesh: float
    horizon: float
    values: np.ndarray
    law: StableLaw

    def __post_init__(self) -> None:
        expect = round(self.horizon / self.mesh) + 1
        if len(self.values) != expect:
            raise ValueError("values length must be horizon/mesh + 1")


def sample_stable_increment(law: StableLaw, rng: np.random.Generator) -> float:
    """One standardized stable variate (see _sampling for the transform)."""
    return float(sample_stable_increments(law, rng, 1)[0])


def simulate_path(
    law: StableLaw, mesh: float, horizon: float, seed: int, replica: int = 0
) -> PathGrid:
    if mesh <= 0.0 or horizon < 1.0 + mesh:
        raise ValueError("need mesh > 0 and horizon >= 1 + mesh")
    n = round(horizon / mesh)
    rng = derive_rng(seed, replica)
    inc = sample_stable_increments(law, rng, n) * mesh ** (1.0 / law.alpha)
    values = np.empty(n + 1)
    values[0] = 0.0
    np.cumsum(inc, out=values[1:])
    return PathGrid(mesh=mesh, horizon=horizon, values=values, law=law)


def extract_argmin_path(path: PathGrid) -> tuple[np.ndarray, np.ndarray]:
    """Times and argmin locations over the unit window starting at each time.

    The window at time t covers [t, t+1] inclusive on the grid (1/mesh + 1
    points); ties keep the latest index.  Returns (times, alphas) with
    alphas[k] = offset / (1/mesh), exact multiples of the mesh in [0, 1].
    """
    steps_per_unit = round(1.0 / path.mesh)
    width = steps_per_unit + 1
    if len(path.values) < width:
        raise ValueError("horizon too short for one unit window")
    offsets = sliding_last_argmin(path.values, width)
    times = np.arange(len(offsets)) * path.mesh
    return times, offsets / steps_per_unit


@dataclass
class InvariantReport:
    """Occupation statistics of the argmin path vs the arcsine law."""

    rho: float
    n_samples: int
    ks: float
    bin_edges: np.ndarray
    histogram: np.ndarray

    def to_json(self, path: str | Path) -> None:
        payload = dataclasses.asdict(self)
        payload["bin_edges"] = payload["bin_edges"].tolist()
        payload["histogram"] = payload["histogram"].tolist()
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def empirical_invariant(
    paths: Sequence[PathGrid], bins: int = 64, spacing: float | None = None
) -> InvariantReport:
    """KS distance between the occupation law of the argmin and the arcsine CDF.

    With spacing None the full grid occupation is used (samples are
    dependent but the KS value then measures the occupation measure itself,
    which is what the invariance statement concerns); a positive spacing
    subsamples at that time separation instead.
    """
    if not paths:
        raise ValueError("no paths given")
    rho = paths[0].law.rho
    sampled_time = 0.0
    chunks = []
    for p in paths:
        if p.law.rho != rho:
            raise ValueError("paths mix different laws")
        _, alphas = extract_argmin_path(p)
        sampled_time += (len(alphas) - 1) * p.mesh
        if spacing is not None:
            stride = max(1, round(spacing / p.mesh))
            alphas = alphas[::stride]
        chunks.append(alphas)
    if sampled_time < 100.0:
        raise ValueError("insufficient samples: need >= 100 time units")
    sample = np.sort(np.concatenate(chunks))
    n = len(sample)
    cdf = np.asarray(
        [arcsine_cdf(rho, float(v)) for v in sample]
        if n <= 4096
        else _vector_cdf(rho, sample)
    )
    grid = np.arange(1, n + 1) / n
    ks = float(max(np.max(grid - cdf), np.max(cdf - (grid - 1.0 / n))))
    hist, edges = np.histogram(sample, bins=bins, range=(0.0, 1.0))
    return InvariantReport(
        rho=rho, n_samples=n, ks=ks, bin_edges=edges, histogram=hist
    )


def _vector_cdf(rho: float, sample: np.ndarray) -> np.ndarray:
    from scipy.special import betainc

    out = betainc(1.0 - rho, rho, np.clip(sample, 0.0, 1.0))
    return np.asarray(out, dtype=np.float64)


@dataclass
class TransitionBin:
    x_lo: float
    x_hi: float
    pairs: int
    atom_hits: int
    atom_freq: float
    atom_weight_center: float
    cdf_dev_max: float


@dataclass
class TransitionReport:
    """Per-source-bin comparison of empirical transitions against Q_t."""

    rho: float
    t: float
    band_mesh_steps: int
    bins: list[TransitionBin]
    y_probe: list[float]

    def to_json(self, path: str | Path) -> None:
        payload = {
            "rho": self.rho,
            "t": self.t,
            "band_mesh_steps": self.band_mesh_steps,
            "y_probe": list(self.y_probe),
            "bins": [dataclasses.asdict(b) for b in self.bins],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def empirical_transition(
    paths: Sequence[PathGrid],
    t: float,
    x_bins: Sequence[tuple[float, float]],
    y_probe: Sequence[float],
    spacing: float | None = None,
) -> TransitionReport:
    """Atom frequencies and conditional CDF probes for lag-t transitions.

    Pairs (alpha(s), alpha(s+t)) are sampled at time spacing 2 + t so
    consecutive pairs share no window.  The atom event is detected in
    integer mesh offsets: the argmin drifted exactly t down, within a
    2-mesh band (each endpoint carries up to one mesh of discretization).
    For t >= 1 the windows are disjoint, no atom exists, and the
    conditional law is the arcsine density regardless of the source bin.
    """
    if not paths:
        raise ValueError("no paths given")
    if t <= 0.0:
        raise ValueError("t must be positive")
    rho = paths[0].law.rho
    if spacing is None:
        spacing = 2.0 + t
    nb = len(x_bins)
    pair_counts = np.zeros(nb, dtype=np.int64)
    atom_counts = np.zeros(nb, dtype=np.int64)
    cont_samples: list[list[float]] = [[] for _ in range(nb)]
    band = 2

    for p in paths:
        steps_per_unit = round(1.0 / p.mesh)
        _, alphas = extract_argmin_path(p)
        offsets = np.rint(alphas * steps_per_unit).astype(np.int64)
        t_idx = round(t / p.mesh)
        stride = max(1, round(spacing / p.mesh))
        starts = np.arange(0, len(offsets) - t_idx, stride)
        x_off = offsets[starts]
        y_off = offsets[starts + t_idx]
        is_atom = np.abs(y_off - (x_off - t_idx)) <= band
        x_val = x_off / steps_per_unit
        y_val = y_off / steps_per_unit
        for b, (lo, hi) in enumerate(x_bins):
            sel = (x_val >= lo) & (x_val < hi)
            pair_counts[b] += int(sel.sum())
            atom_counts[b] += int((sel & is_atom).sum())
            cont_samples[b].extend(y_val[sel & ~is_atom].tolist())

    bins_out = []
    for b, (lo, hi) in enumerate(x_bins):
        center = 0.5 * (lo + hi)
        w = atom_weight(rho, t, center)
        n_pairs = int(pair_counts[b])
        freq = atom_counts[b] / n_pairs if n_pairs else float("nan")
        dev = float("nan")
        if n_pairs and cont_samples[b]:
            ys = np.sort(np.asarray(cont_samples[b]))
            dev = 0.0
            total = _continuous_mass(rho, t, center)
            for yp in y_probe:
                emp = float(np.searchsorted(ys, yp, side="right")) / len(ys)
                if yp >= 1.0:
                    exact = 1.0
                else:
                    exact = _continuous_cdf(rho, t, center, yp) / total
                dev = max(dev, abs(emp - exact))
        bins_out.append(
            TransitionBin(
                x_lo=lo,
                x_hi=hi,
                pairs=n_pairs,
                atom_hits=int(atom_counts[b]),
                atom_freq=float(freq),
                atom_weight_center=w,
                cdf_dev_max=dev,
            )
        )
    return TransitionReport(
        rho=rho, t=t, band_mesh_steps=band, bins=bins_out, y_probe=list(y_probe)
    )


def _continuous_mass(rho: float, t: float, x: float) -> float:
    from .stable import _pieces_target, _sum_piece_integrals

    return _sum_piece_integrals(_pieces_target(rho, t, x))


def _continuous_cdf(rho: float, t: float, x: float, y: float) -> float:
    """Unnormalized mass of the density part of Q_t(x, .) below y."""
    from .stable import _integrate_power, _pieces_target, _piece_value

    total = 0.0
    for piece in _pieces_target(rho, t, x):
        if y <= piece.lo:
            continue
        hi = min(piece.hi, y)
        # a clipped upper end keeps the piece's own top power inside the
        # smooth factor; at the true end it moves into the integrator
        full = hi == piece.hi
        total += _integrate_power(
            lambda z, p=piece, f=full: _piece_value(p, z, True, f),
            piece.lo,
            hi,
            piece.pow_lo,
            piece.pow_hi if full else 0.0,
        )
    return total


def path_structure_violations(path: PathGrid) -> tuple[int, int]:
    """Count steps breaking the drift-down-or-renew dichotomy.

    From an interior argmin location the next grid state must be one mesh
    lower or land within one mesh of the window end.  Transitions out of
    offset 0 are excluded: there the minimum falls off the window's
    trailing edge, a mesh-boundary effect with no continuous counterpart.
    Returns (violations, considered).
    """
    steps_per_unit = round(1.0 / path.mesh)
    _, alphas = extract_argmin_path(path)
    offs = np.rint(alphas * steps_per_unit).astype(np.int64)
    cur, nxt = offs[:-1], offs[1:]
    considered = cur > 0
    ok = (nxt == cur - 1) | (nxt >= steps_per_unit - 1)
    violations = int((considered & ~ok).sum())
    return violations, int(considered.sum())
