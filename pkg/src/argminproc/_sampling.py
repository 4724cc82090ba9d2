"""Random number plumbing shared by the walk and path simulators."""

from __future__ import annotations

import math

import numpy as np

from .stable import StableLaw


def derive_rng(seed: int, replica: int = 0) -> np.random.Generator:
    """Counter-based generator for (seed, replica); replicas are independent.

    Philox keyed by a SeedSequence with the replica index as spawn key, so
    any subset of replicas can run in any order or in parallel and still
    produce identical streams.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(replica,))
    return np.random.Generator(np.random.Philox(ss))


def sample_stable_increments(
    law: StableLaw, rng: np.random.Generator, size: int
) -> np.ndarray:
    """Standardized stable variates via the Chambers-Mallows-Stuck transform.

    The returned law has P(X > 0) equal to law.rho.  At alpha = 2 the
    formula collapses to 2 sin(U) sqrt(W), a centered Gaussian with
    variance 2 (not 1); only the sign probabilities matter downstream, so
    the scale is left as the transform produces it.
    """
    alpha = law.alpha
    u = rng.uniform(-math.pi / 2.0, math.pi / 2.0, size)
    if alpha == 1.0:
        # law construction guarantees beta == 0 here: standard Cauchy
        return np.tan(u)
    w = rng.exponential(1.0, size)
    zeta = 0.0 if alpha == 2.0 else law.beta * math.tan(math.pi * alpha / 2.0)
    b = math.atan(zeta) / alpha
    s = (1.0 + zeta * zeta) ** (1.0 / (2.0 * alpha))
    return (
        s
        * np.sin(alpha * (u + b))
        / np.cos(u) ** (1.0 / alpha)
        * (np.cos(u - alpha * (u + b)) / w) ** ((1.0 - alpha) / alpha)
    )
