"""Persistence sequences of a random walk and their closed forms.

For a walk S_n = X_1 + ... + X_n three families of probabilities drive
everything downstream:

* ``p[n]``  = P(S_1 >= 0, ..., S_n >= 0)   (weak ascending persistence)
* ``p_tilde[n]`` = P(S_1 > 0, ..., S_n > 0) (strict ascending persistence)
* ``tau[n]`` = p[n-1] - p[n]                (first entry into the strictly
  negative half-line at step n)

All are recovered from the one-dimensional sign probabilities
q_ge[n] = P(S_n >= 0), q_gt[n] = P(S_n > 0) through the exponential
generating identity

    sum_n p[n] s^n = exp( sum_n q_ge[n] s^n / n ),

and the same with q_gt for the strict variant.  Descending persistence is
the ascending persistence of the negated walk, so no separate machinery is
needed for it.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

_TOL = 1e-12


class NotApplicableError(ValueError):
    """A check or formula whose hypotheses the given walk does not satisfy."""


def series_exp(log_coeffs: Sequence[float], M: int | None = None) -> list[float]:
    """Coefficients c_0..c_M of exp(A(s)) where A(s) = sum_{n>=1} a_n s^n.

    ``log_coeffs`` holds a_1..a_M (the constant term is implicitly zero).
    Uses the derivative recursion n*c_n = sum_{k=1}^{n} k*a_k*c_{n-k}, which
    stays in plain arithmetic (no factorials, no overflow).
    """
    if M is None:
        M = len(log_coeffs)
    if M < 0:
        raise ValueError("M must be >= 0")
    if M > len(log_coeffs):
        raise ValueError("need at least M exponent coefficients")
    out = [1.0] + [0.0] * M
    for n in range(1, M + 1):
        acc = 0.0
        for k in range(1, n + 1):
            acc += k * log_coeffs[k - 1] * out[n - k]
        out[n] = acc / n
    return out


@dataclass(frozen=True)
class SignProbabilities:
    """One-dimensional sign probabilities q_ge[n] = P(S_n >= 0) etc. for n = 1..M.

    Tuples are indexed from n = 1, so ``q_ge[0]`` is the value at n = 1.
    """

    q_ge: tuple[float, ...]
    q_gt: tuple[float, ...]
    q_lt: tuple[float, ...]

    def __post_init__(self) -> None:
        if not (len(self.q_ge) == len(self.q_gt) == len(self.q_lt)):
            raise ValueError("sign probability tuples must share a length")
        for n, (ge, gt, lt) in enumerate(zip(self.q_ge, self.q_gt, self.q_lt), 1):
            if not (0.0 <= gt <= ge <= 1.0):
                raise ValueError(f"need 0 <= q_gt <= q_ge <= 1 at n={n}")
            if not (0.0 <= lt <= 1.0) or ge + lt > 1.0 + _TOL:
                raise ValueError(f"need q_ge + q_lt <= 1 at n={n}")

    @property
    def M(self) -> int:
        return len(self.q_ge)

    def negated(self) -> "SignProbabilities":
        """Sign probabilities of the walk with every increment negated.

        P(-S_n >= 0) = P(S_n <= 0) = 1 - q_gt[n], and the strict/weak roles
        swap accordingly.
        """
        return SignProbabilities(
            q_ge=tuple(1.0 - g for g in self.q_gt),
            q_gt=tuple(lt for lt in self.q_lt),
            q_lt=tuple(gt for gt in self.q_gt),
        )

    def has_zero_atoms(self) -> bool:
        """Whether some S_n puts positive mass on the point 0."""
        return any(gt + lt < 1.0 - _TOL for gt, lt in zip(self.q_gt, self.q_lt))


@dataclass(frozen=True)
class LadderSequences:
    """Persistence probabilities p, p_tilde and first-passage mass tau.

    Indexed from n = 0: ``p[0] = p_tilde[0] = 1`` and ``tau[0] = 0``.
    """

    p: tuple[float, ...]
    p_tilde: tuple[float, ...]
    tau: tuple[float, ...]

    def __post_init__(self) -> None:
        if not (len(self.p) == len(self.p_tilde) == len(self.tau)):
            raise ValueError("sequences must share a length")
        if not self.p or abs(self.p[0] - 1.0) > _TOL or abs(self.p_tilde[0] - 1.0) > _TOL:
            raise ValueError("sequences must start at p[0] = p_tilde[0] = 1")
        if abs(self.tau[0]) > _TOL:
            raise ValueError("tau[0] must be 0")
        for n in range(1, len(self.p)):
            if self.p[n] > self.p[n - 1] + _TOL or self.p_tilde[n] > self.p_tilde[n - 1] + _TOL:
                raise ValueError(f"persistence must be nonincreasing (n={n})")
            if self.p_tilde[n] > self.p[n] + _TOL:
                raise ValueError(f"strict persistence cannot exceed weak (n={n})")
            if abs(self.tau[n] - (self.p[n - 1] - self.p[n])) > 1e-9:
                raise ValueError(f"tau[n] must equal p[n-1] - p[n] (n={n})")

    @property
    def M(self) -> int:
        return len(self.p) - 1


def persistence_from_signs(sp: SignProbabilities) -> LadderSequences:
    """Ladder sequences from one-dimensional sign probabilities.

    Exponentiates sum q_ge[n] s^n / n for the weak sequence and the q_gt
    analogue for the strict one.
    """
    weak = series_exp([g / n for n, g in enumerate(sp.q_ge, 1)])
    strict = series_exp([g / n for n, g in enumerate(sp.q_gt, 1)])
    tau = [0.0] + [weak[n - 1] - weak[n] for n in range(1, len(weak))]
    return LadderSequences(p=tuple(weak), p_tilde=tuple(strict), tau=tuple(tau))


def descending_from_signs(sp: SignProbabilities) -> LadderSequences:
    """Persistence of the negated walk: p[n] = P(S_1 <= 0, ..., S_n <= 0)."""
    return persistence_from_signs(sp.negated())


def first_passage_gf_check(sp: SignProbabilities, ls: LadderSequences) -> float:
    """Max deviation between tau and its generating-function representation.

    For walks whose one-dimensional laws put no mass at zero,

        sum_n tau[n] s^n = 1 - exp( - sum_n q_lt[n] s^n / n ).

    Raises :class:`NotApplicableError` when the walk has zero atoms, since
    the identity needs P(S_n = 0) = 0.
    """
    if sp.has_zero_atoms():
        raise NotApplicableError(
            "first-passage generating identity requires atomless S_n"
        )
    ref = series_exp([-lt / n for n, lt in enumerate(sp.q_lt, 1)])
    worst = 0.0
    for n in range(1, min(len(ref), len(ls.tau))):
        worst = max(worst, abs(ls.tau[n] - (-ref[n])))
    return worst


def _pochhammer_ratio(a: float, n: int) -> float:
    """(a)_n / n! computed stably through log-gamma."""
    if n == 0:
        return 1.0
    if a <= 0.0:
        # integer-shifted poles collapse the product to zero for a <= 0
        prod = 1.0
        for k in range(n):
            prod *= (a + k) / (k + 1)
        return prod
    return math.exp(math.lgamma(a + n) - math.lgamma(a) - math.lgamma(n + 1.0))


def pochhammer_ratio(a: float, n: int) -> float:
    return _pochhammer_ratio(a, n)


def closed_form_theta(theta: float, M: int) -> LadderSequences:
    """Ladder sequences of a continuous walk with P(S_n > 0) = theta for all n.

    Both persistence flavours coincide (no zero atoms) and equal
    (theta)_n / n! by the exponential identity with constant coefficient.
    """
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    if M < 0:
        raise ValueError("M must be >= 0")
    p = tuple(_pochhammer_ratio(theta, n) for n in range(M + 1))
    tau = (0.0,) + tuple(p[n - 1] - p[n] for n in range(1, M + 1))
    return LadderSequences(p=p, p_tilde=p, tau=tau)


def closed_form_ssrw(M: int) -> LadderSequences:
    """Ladder sequences of the simple symmetric random walk.

    p[2m-1] = p[2m] = C(2m, m) / 4^m, while the strict sequence lags a step:
    p_tilde[n] = C(2m, m) / (2 * 4^m) with m = floor(n / 2), n >= 1.
    """
    if M < 0:
        raise ValueError("M must be >= 0")
    central = [1.0]
    for m in range(1, M + 1):
        central.append(central[-1] * (2 * m - 1) / (2 * m))  # C(2m,m)/4^m
    p = [1.0]
    for n in range(1, M + 1):
        p.append(central[(n + 1) // 2])
    pt = [1.0]
    for n in range(1, M + 1):
        pt.append(central[n // 2] / 2.0)
    tau = [0.0] + [p[n - 1] - p[n] for n in range(1, M + 1)]
    return LadderSequences(p=tuple(p), p_tilde=tuple(pt), tau=tuple(tau))


def ssrw_sign_probabilities(M: int) -> SignProbabilities:
    """Exact sign probabilities of the simple symmetric random walk."""
    q_ge, q_gt, q_lt = [], [], []
    for n in range(1, M + 1):
        total = Fraction(0)
        atom = Fraction(0)
        for k in range(n + 1):  # S_n = 2k - n with k up-steps
            w = Fraction(math.comb(n, k), 2**n)
            if 2 * k - n > 0:
                total += w
            elif 2 * k - n == 0:
                atom = w
        q_gt.append(float(total))
        q_ge.append(float(total + atom))
        q_lt.append(float(1 - total - atom))
    return SignProbabilities(q_ge=tuple(q_ge), q_gt=tuple(q_gt), q_lt=tuple(q_lt))


def read_sign_probabilities_json(path: str | Path) -> SignProbabilities:
    """Load ``{"q_ge": [...], "q_gt": [...], "q_lt": [...]}`` from a file."""
    with open(path) as fh:
        payload = json.load(fh)
    return SignProbabilities(
        q_ge=tuple(payload["q_ge"]),
        q_gt=tuple(payload["q_gt"]),
        q_lt=tuple(payload["q_lt"]),
    )


def write_ladder_csv(ls: LadderSequences, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "p", "p_tilde", "tau"])
        for n in range(len(ls.p)):
            w.writerow([n, f"{ls.p[n]:.17g}", f"{ls.p_tilde[n]:.17g}", f"{ls.tau[n]:.17g}"])


def read_ladder_csv(path: str | Path) -> LadderSequences:
    p, pt, tau = [], [], []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            p.append(float(row["p"]))
            pt.append(float(row["p_tilde"]))
            tau.append(float(row["tau"]))
    return LadderSequences(p=tuple(p), p_tilde=tuple(pt), tau=tuple(tau))


def write_ladder_json(ls: LadderSequences, path: str | Path) -> None:
    payload = {"p": list(ls.p), "p_tilde": list(ls.p_tilde), "tau": list(ls.tau)}
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_ladder_json(path: str | Path) -> LadderSequences:
    with open(path) as fh:
        payload = json.load(fh)
    return LadderSequences(
        p=tuple(payload["p"]),
        p_tilde=tuple(payload["p_tilde"]),
        tau=tuple(payload["tau"]),
    )
