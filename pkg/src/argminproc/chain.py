"""Exact transition kernel and stationary law of the window argmin chain.

State k of the chain means: within the current window of N+1 consecutive
partial sums, the minimum is attained last at offset k.  The stationary law
and the one-step kernel are products and ratios of two persistence
sequences, one for each direction of the walk:

* forward strict persistence  p_tilde[n] = P(S_1 > 0, ..., S_n > 0)
* backward weak persistence   b[n] = P(S_1 <= 0, ..., S_n <= 0)

with

    pi[k]      = b[k] * p_tilde[N-k]
    P[i, i-1]  = p_tilde[N+1-i] / p_tilde[N-i]          (i >= 1)
    P[i, N]    = 1 - P[i, i-1]
    P[0, j]    = (b[j] - b[j+1]) * p_tilde[N-j] / p_tilde[N]   (j < N)
    P[0, N]    = 1 - sum of the rest of row 0

The product pi always sums to one: the generating functions satisfy
b(s) * p_tilde(s) = 1/(1-s) because the exponents q_le[n]/n and q_gt[n]/n
add up to 1/n.  For walks symmetric about zero b equals the forward weak
persistence p, so a single ladder suffices; that is the default in
:func:`build_kernel`.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .ladder import (
    LadderSequences,
    SignProbabilities,
    closed_form_ssrw,
    closed_form_theta,
    descending_from_signs,
    persistence_from_signs,
    pochhammer_ratio,
)

_CLAMP = 1e-15
_SUM_TOL = 1e-12
_STAT_TOL = 1e-10


class DegenerateWalkError(ValueError):
    """The persistence input cannot come from a two-sided walk."""


@dataclass
class ArgminChainKernel:
    """Stationary vector pi (length N+1) and row-stochastic matrix P."""

    N: int
    pi: np.ndarray
    P: np.ndarray

    def validate(self) -> "ArgminChainKernel":
        n1 = self.N + 1
        if self.pi.shape != (n1,) or self.P.shape != (n1, n1):
            raise ValueError("shape mismatch with N")
        for arr in (self.pi, self.P):
            neg = arr < 0.0
            if np.any(arr[neg] < -_CLAMP):
                raise ValueError("negative probability beyond round-off")
            arr[neg] = 0.0
        if abs(self.pi.sum() - 1.0) > _SUM_TOL:
            raise DegenerateWalkError(
                f"stationary vector sums to {self.pi.sum():.17g}, not 1"
            )
        rows = self.P.sum(axis=1)
        if np.max(np.abs(rows - 1.0)) > _SUM_TOL:
            raise ValueError("transition matrix rows must sum to 1")
        for i in range(1, n1):
            allowed = {i - 1, self.N}
            for j in range(n1):
                if j not in allowed and self.P[i, j] != 0.0:
                    raise ValueError(f"row {i} has support outside {{i-1, N}}")
        resid = np.max(np.abs(self.pi @ self.P - self.pi))
        if resid > _STAT_TOL:
            raise ValueError(f"pi is not stationary (residual {resid:.3g})")
        return self

    def write_csv(self, pi_path: str | Path, P_path: str | Path) -> None:
        with open(pi_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "value"])
            for k, v in enumerate(self.pi):
                w.writerow([k, f"{v:.17g}"])
        with open(P_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["row", "col", "value"])
            for i in range(self.N + 1):
                for j in range(self.N + 1):
                    w.writerow([i, j, f"{self.P[i, j]:.17g}"])

    def write_json(self, path: str | Path) -> None:
        payload = {"N": self.N, "pi": self.pi.tolist(), "P": self.P.tolist()}
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def read_csv(
        cls, pi_path: str | Path, P_path: str | Path
    ) -> "ArgminChainKernel":
        with open(pi_path, newline="") as fh:
            rows = list(csv.reader(fh))[1:]
        pi = np.empty(len(rows))
        for k, v in rows:
            pi[int(k)] = float(v)
        N = len(pi) - 1
        P = np.empty((N + 1, N + 1))
        with open(P_path, newline="") as fh:
            for i, j, v in list(csv.reader(fh))[1:]:
                P[int(i), int(j)] = float(v)
        return cls(N=N, pi=pi, P=P)

    @classmethod
    def read_json(cls, path: str | Path) -> "ArgminChainKernel":
        with open(path) as fh:
            payload = json.load(fh)
        return cls(
            N=payload["N"],
            pi=np.asarray(payload["pi"], dtype=np.float64),
            P=np.asarray(payload["P"], dtype=np.float64),
        )


def build_kernel(
    ls: LadderSequences, N: int, *, backward: LadderSequences | None = None
) -> ArgminChainKernel:
    """Kernel of the window argmin chain from persistence sequences.

    ``ls`` carries the forward ladder (its strict component drives every
    downward transition).  ``backward`` is the weak ladder of the negated
    walk; when omitted ``ls`` is reused, which is exact precisely for
    increment laws symmetric about zero.  For an asymmetric walk pass the
    descending ladder explicitly or use
    :func:`kernel_from_sign_probabilities`.

    Requires ls.M >= N+1 so every ratio p_tilde[N+1-i]/p_tilde[N-i] exists.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if ls.M <= N:
        raise ValueError("horizon too short: need ls.M >= N+1")
    if backward is None:
        backward = ls
    elif backward.M <= N:
        raise ValueError("horizon too short: need backward.M >= N+1")

    pt = ls.p_tilde
    b = backward.p
    for n in range(N + 1):
        if pt[n] <= 0.0:
            raise DegenerateWalkError(
                "strict persistence vanishes; the negated walk never goes up"
            )

    n1 = N + 1
    pi = np.array([b[k] * pt[N - k] for k in range(n1)])
    P = np.zeros((n1, n1))
    for i in range(1, n1):
        down = pt[N + 1 - i] / pt[N - i]
        P[i, i - 1] = down
        P[i, N] += 1.0 - down
    for j in range(N):
        P[0, j] = (b[j] - b[j + 1]) * pt[N - j] / pt[N]
    P[0, N] = 1.0 - P[0, :N].sum()
    return ArgminChainKernel(N=N, pi=pi, P=P).validate()


def kernel_from_sign_probabilities(sp: SignProbabilities, N: int) -> ArgminChainKernel:
    """Kernel for an arbitrary walk given P(S_n >= 0), P(S_n > 0), P(S_n < 0)."""
    return build_kernel(
        persistence_from_signs(sp), N, backward=descending_from_signs(sp)
    )


def theta_kernel(theta: float, N: int) -> ArgminChainKernel:
    """Closed-form kernel for a continuous walk with P(S_n > 0) = theta.

    Writing (a)_n for the rising factorial, the persistence sequences are
    p_tilde[n] = (theta)_n / n! and b[n] = (1-theta)_n / n!, which collapse
    the general construction to:

        pi[k]     = (1-theta)_k (theta)_{N-k} / (k! (N-k)!)
        P[i, N]   = (1-theta) / (N+1-i)                        (i >= 1)
        P[0, j]   = theta/(j+1) * C(N,j) * (1-theta)_j (theta)_{N-j} / (theta)_N
    """
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    if N < 1:
        raise ValueError("N must be >= 1")
    n1 = N + 1
    pi = np.array(
        [
            pochhammer_ratio(1.0 - theta, k) * pochhammer_ratio(theta, N - k)
            for k in range(n1)
        ]
    )
    P = np.zeros((n1, n1))
    for i in range(1, n1):
        up = (1.0 - theta) / (N + 1 - i)
        P[i, N] += up
        P[i, i - 1] = 1.0 - up
    ratio_N = pochhammer_ratio(theta, N)
    for j in range(N):
        P[0, j] = (
            theta
            / (j + 1)
            * pochhammer_ratio(1.0 - theta, j)
            * pochhammer_ratio(theta, N - j)
            / ratio_N
        )
    P[0, N] = 1.0 - P[0, :N].sum()
    return ArgminChainKernel(N=N, pi=pi, P=P).validate()


def theta_corner_value(theta: float, N: int) -> float:
    """Closed form for P[0, N] of :func:`theta_kernel`, used as a cross-check.

    Equals (1-theta)/(N+1) + theta*(1-theta)_N / ((N+1)*(theta)_N); at
    theta = 1/2 this is 1/(N+1).
    """
    return (1.0 - theta) / (N + 1) + theta * pochhammer_ratio(
        1.0 - theta, N
    ) / ((N + 1) * pochhammer_ratio(theta, N))


def _ssrw_fraction_ladders(M: int) -> tuple[list[Fraction], list[Fraction]]:
    """Exact dyadic (p, p_tilde) for the simple symmetric walk up to index M."""
    central = [Fraction(math.comb(2 * m, m), 4**m) for m in range(M // 2 + 2)]
    p = [Fraction(1)] + [central[(n + 1) // 2] for n in range(1, M + 1)]
    pt = [Fraction(1)] + [central[n // 2] / 2 for n in range(1, M + 1)]
    return p, pt


def ssrw_kernel(N: int) -> ArgminChainKernel:
    """Exact kernel for the simple symmetric +-1 walk.

    All entries are dyadic rationals; the computation runs in exact rational
    arithmetic and converts to float once at the end, so results are
    bit-identical to the enumeration oracle.  The parity closed forms are

        P[i, N]   = 1/2 if i = N; 1/(N-i+1) if N-i odd; 0 if N-i even >= 2
        P[0, j]   = 0 for odd j; a central-binomial ratio for even j
        P[0, N]   = 1/(N+1) for odd N, 2/(N+2) for even N
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    p, pt = _ssrw_fraction_ladders(N + 1)
    n1 = N + 1
    pi_f = [p[k] * pt[N - k] for k in range(n1)]
    P_f = [[Fraction(0)] * n1 for _ in range(n1)]
    for i in range(1, n1):
        down = pt[N + 1 - i] / pt[N - i]
        P_f[i][i - 1] = down
        P_f[i][N] += 1 - down
    for j in range(N):
        P_f[0][j] = (p[j] - p[j + 1]) * pt[N - j] / pt[N]
    P_f[0][N] = 1 - sum(P_f[0][:N])

    pi = np.array([float(x) for x in pi_f])
    P = np.array([[float(x) for x in row] for row in P_f])
    return ArgminChainKernel(N=N, pi=pi, P=P).validate()


def symmetric_continuous_kernel(N: int) -> ArgminChainKernel:
    """Central-binomial closed forms for a symmetric continuous walk.

    pi[k] = C(2k,k) C(2N-2k,N-k) / 4^N, P[0,j] = C(N,j)^2 / (2(j+1) C(2N,2j))
    for j < N, P[0,N] = 1/(N+1), and P[i,N] = 1/(2(N+1-i)) for i >= 1.
    Must coincide with theta_kernel(0.5, N).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    n1 = N + 1
    pi = np.array(
        [
            math.comb(2 * k, k) * math.comb(2 * (N - k), N - k) / 4.0**N
            for k in range(n1)
        ]
    )
    P = np.zeros((n1, n1))
    for i in range(1, n1):
        up = 1.0 / (2 * (N + 1 - i))
        P[i, N] += up
        P[i, i - 1] = 1.0 - up
    for j in range(N):
        P[0, j] = math.comb(N, j) ** 2 / (2.0 * (j + 1) * math.comb(2 * N, 2 * j))
    P[0, N] = 1.0 - P[0, :N].sum()
    return ArgminChainKernel(N=N, pi=pi, P=P).validate()


def last_argmin(window: list[int]) -> int:
    """Largest offset attaining the minimum of the window."""
    m = min(window)
    return max(i for i, v in enumerate(window) if v == m)


def brute_force_ssrw(N: int) -> ArgminChainKernel:
    """Enumeration oracle: exact chain law from all +-1 paths of length N+1.

    For each of the 2^(N+1) equally likely sign patterns, computes the
    argmin state of the first window (S_0, ..., S_N) and of the shifted
    window (S_1, ..., S_{N+1}); tallies give pi and the conditional
    transition frequencies as exact dyadic rationals, converted to float.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > 14:
        raise ValueError("N > 14 would enumerate more than 2^15 paths")
    n1 = N + 1
    state_counts = [0] * n1
    trans_counts = [[0] * n1 for _ in range(n1)]
    total = 2 ** (N + 1)
    for mask in range(total):
        s = 0
        path = [0]
        for step in range(N + 1):
            s += 1 if (mask >> step) & 1 else -1
            path.append(s)
        a0 = last_argmin(path[: N + 1])
        a1 = last_argmin(path[1 : N + 2])
        state_counts[a0] += 1
        trans_counts[a0][a1] += 1

    pi = np.array([float(Fraction(c, total)) for c in state_counts])
    P = np.zeros((n1, n1))
    for i in range(n1):
        row_total = state_counts[i]
        for j in range(n1):
            if trans_counts[i][j]:
                P[i, j] = float(Fraction(trans_counts[i][j], row_total))
    return ArgminChainKernel(N=N, pi=pi, P=P).validate()


def verify_lemma_identities(model: float | str, N_max: int) -> float:
    """Max residual over N <= N_max of the telescoped convolution identities.

    For each N the left side is

        sum_{j=0}^{N-1} p[j] p_tilde[N-j]  -  sum_{j=0}^{N-1} p[j+1] p_tilde[N-j].

    For the continuous model with constant positivity theta (where
    p = p_tilde) the right side is

        ((N + 2*theta - 1) (theta)_N + (1 - 2*theta) (2*theta)_N) / (N+1)!

    and for the simple symmetric walk it is N/(N+1) * p_tilde[N] for odd N,
    N/(N+2) * p_tilde[N] for even N.
    """
    if isinstance(model, str):
        if model != "ssrw":
            raise ValueError("model must be a theta in (0,1) or 'ssrw'")
        ls = closed_form_ssrw(N_max + 1)
    else:
        ls = closed_form_theta(float(model), N_max + 1)

    worst = 0.0
    for N in range(1, N_max + 1):
        lhs = sum(ls.p[j] * ls.p_tilde[N - j] for j in range(N)) - sum(
            ls.p[j + 1] * ls.p_tilde[N - j] for j in range(N)
        )
        if isinstance(model, str):
            if N % 2 == 1:
                rhs = N / (N + 1) * ls.p_tilde[N]
            else:
                rhs = N / (N + 2) * ls.p_tilde[N]
        else:
            th = float(model)
            # bracket/(N+1)! expressed through (a)_N/N! ratios to avoid factorials
            rhs = (
                (N + 2 * th - 1) * pochhammer_ratio(th, N)
                + (1 - 2 * th) * pochhammer_ratio(2 * th, N)
            ) / (N + 1)
        worst = max(worst, abs(lhs - rhs))
    return worst
