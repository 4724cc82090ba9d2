"""Stable laws and the transition semigroup of the windowed argmin process.

For a strictly stable process, the location of the last infimum over a
sliding unit window is again a Markov process on [0,1].  Its transition
kernel Q_t(x, .) depends on the law only through the positivity parameter
rho = P(X_1 > 0) and has three regimes:

* t > 1: the window has fully refreshed; Q_t(x, .) is the generalized
  arcsine law with density f(y) = sin(pi rho)/pi * y^(-rho) (1-y)^(rho-1),
  independent of x.
* 0 < t <= x <= 1: the old minimum may still rule, so Q_t(x, .) carries an
  atom at x - t of weight ((1-x)/(1-x+t))^(1-rho) plus a density supported
  on (1-t, 1) for the case where a new minimum appeared near the window's
  trailing edge:

      q_t(x, y) = sin(pi rho)/pi * (1-y)^(rho-1) (y+t-1)^(1-rho) / (y+t-x).

* 0 <= x < t <= 1: the old minimum has been flushed; the density on (0,1) is

      q_t(x, y) = sin(pi rho)/(pi (y+t-x)) * y^(-rho) (1-y)^(rho-1)
                  * [ (t-x)^rho (1-x)^(1-rho) + y^rho ((y+t-1)_+)^(1-rho) ].

Every density is a finite sum of pieces of the form
(y-lo)^a (hi-y)^b * smooth(y); quadrature routines below exploit that shape
by substituting away the endpoint powers before handing the integral to
adaptive Gauss-Kronrod.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import betainc


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach its target accuracy."""

    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (achieved error estimate {estimate:.3g})")
        self.estimate = estimate


def positivity(alpha: float, beta: float) -> float:
    """P(X_1 > 0) for a strictly stable law with the given index and skew.

    rho = 1/2 + arctan(beta * tan(pi alpha / 2)) / (pi alpha).  Laws with
    rho in {0, 1} are monotone processes with no two-sided argmin and are
    rejected, as is the ill-defined alpha = 1 with skew.
    """
    if not 0.0 < alpha <= 2.0:
        raise ValueError("alpha must lie in (0, 2]")
    if not -1.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [-1, 1]")
    if alpha == 1.0 and beta != 0.0:
        raise ValueError("alpha=1 with skew unsupported")
    if alpha == 2.0:
        return 0.5
    rho = 0.5 + math.atan(beta * math.tan(math.pi * alpha / 2.0)) / (math.pi * alpha)
    if not 0.0 < rho < 1.0 or alpha < 1.0 and abs(beta) == 1.0:
        raise ValueError("subordinator excluded: positivity parameter not in (0,1)")
    return rho


@dataclass(frozen=True)
class StableLaw:
    """Stable index alpha, skew beta, and the derived positivity parameter."""

    alpha: float
    beta: float
    rho: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "rho", positivity(self.alpha, self.beta))

    @classmethod
    def from_positivity(cls, rho: float) -> "StableLaw":
        """A representative (alpha, beta) pair realizing the given rho.

        alpha = 3/2 covers rho in [1/3, 2/3]; a heavier-tailed alpha = 0.9
        covers the rest of (0, 1).
        """
        if not 0.0 < rho < 1.0:
            raise ValueError("rho must lie in (0, 1)")
        if rho == 0.5:
            return cls(2.0, 0.0)
        alpha = 1.5 if 1.0 / 3.0 <= rho <= 2.0 / 3.0 else 0.9
        beta = math.tan(alpha * math.pi * (rho - 0.5)) / math.tan(math.pi * alpha / 2.0)
        return cls(alpha, min(1.0, max(-1.0, beta)))


def arcsine_density(rho: float, y: float) -> float:
    """Generalized arcsine density sin(pi rho)/pi * y^(-rho) (1-y)^(rho-1)."""
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    if not 0.0 < y < 1.0:
        raise ValueError("y must lie in (0, 1)")
    return math.sin(math.pi * rho) / math.pi * y ** (-rho) * (1.0 - y) ** (rho - 1.0)


def arcsine_cdf(rho: float, y: float) -> float:
    """CDF of the generalized arcsine law (regularized incomplete beta)."""
    if not 0.0 < rho < 1.0:
        raise ValueError("rho must lie in (0, 1)")
    if y <= 0.0:
        return 0.0
    if y >= 1.0:
        return 1.0
    return float(betainc(1.0 - rho, rho, y))


def atom_weight(rho: float, t: float, x: float) -> float:
    """Weight of the point mass at x - t; zero unless 0 < t <= x <= 1."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if t > x:
        return 0.0
    return ((1.0 - x) / (1.0 - x + t)) ** (1.0 - rho)


def _density_no_top(rho: float, t: float, x: float, y: float) -> float:
    """q_t(x, y) with its universal (1-y)^(rho-1) factor stripped.

    Every branch of the density carries that factor; removing it leaves a
    function finite up to and including y = 1, which lets products like
    q_s(x, u) * atom_weight(t, u) at u = 1 be evaluated by exact power
    cancellation instead of 0 * inf.
    """
    if y <= 0.0 or y > 1.0:
        return 0.0
    c = math.sin(math.pi * rho) / math.pi
    if t > 1.0:
        return c * y ** (-rho)
    if t <= x:
        tail = y + t - 1.0
        if tail <= 0.0:
            return 0.0
        if x == 1.0:
            return c * tail ** (-rho)
        return c * tail ** (1.0 - rho) / (y + t - x)
    plus = max(y + t - 1.0, 0.0)
    bracket = (t - x) ** rho * (1.0 - x) ** (1.0 - rho) + y**rho * plus ** (1.0 - rho)
    return c / (y + t - x) * y ** (-rho) * bracket


def transition_density(rho: float, t: float, x: float, y: float) -> float:
    """Density part of Q_t(x, .) at y in (0, 1); zero outside its support."""
    if not 0.0 < y < 1.0:
        return 0.0
    return _density_no_top(rho, t, x, y) * (1.0 - y) ** (rho - 1.0)


class _Piece(NamedTuple):
    """One additive component (z-lo)^pow_lo (hi-z)^pow_hi * g(z) on (lo, hi)."""

    lo: float
    hi: float
    pow_lo: float
    pow_hi: float
    g: Callable[[float], float]


def _piece_value(
    piece: _Piece, z: float, skip_lo: bool = False, skip_hi: bool = False
) -> float:
    """Piece value at z; skip flags omit an endpoint power the caller
    accounts for analytically (see _integrate_power)."""
    v = piece.g(z)
    if piece.pow_lo != 0.0 and not skip_lo:
        v *= (z - piece.lo) ** piece.pow_lo
    if piece.pow_hi != 0.0 and not skip_hi:
        v *= (piece.hi - z) ** piece.pow_hi
    return v


def _pieces_target(rho: float, t: float, x: float) -> list[_Piece]:
    """Additive pieces of y -> q_t(x, y), the density in its target variable."""
    c = math.sin(math.pi * rho) / math.pi
    if t > 1.0:
        return [_Piece(0.0, 1.0, -rho, rho - 1.0, lambda y: c)]
    if t <= x:
        if x == 1.0:
            # denominator y+t-x collapses into the lower endpoint power
            return [_Piece(1.0 - t, 1.0, -rho, rho - 1.0, lambda y: c)]
        return [_Piece(1.0 - t, 1.0, 1.0 - rho, rho - 1.0, lambda y: c / (y + t - x))]
    pieces = [
        _Piece(
            0.0,
            1.0,
            -rho,
            rho - 1.0,
            lambda y: c
            * (t - x) ** rho
            * (1.0 - x) ** (1.0 - rho)
            / (y + t - x),
        ),
        # the y^rho (y+t-1)_+^{1-rho} part cancels y^{-rho} and matches the
        # transport shape, supported on (1-t, 1)
        _Piece(1.0 - t, 1.0, 1.0 - rho, rho - 1.0, lambda y: c / (y + t - x)),
    ]
    return pieces


def _pieces_source(rho: float, t: float, y: float) -> list[_Piece]:
    """Additive pieces of z -> q_t(z, y), the density in its source variable."""
    c = math.sin(math.pi * rho) / math.pi
    if t > 1.0:
        fy = c * y ** (-rho) * (1.0 - y) ** (rho - 1.0)
        return [_Piece(0.0, 1.0, 0.0, 0.0, lambda z: fy)]
    pieces = []
    tail = y + t - 1.0
    if tail > 0.0:
        # the transport density for z >= t and the second renewal term for
        # z < t coincide, so one piece covers all of (0, 1)
        top = c * (1.0 - y) ** (rho - 1.0) * tail ** (1.0 - rho)
        pieces.append(_Piece(0.0, 1.0, 0.0, 0.0, lambda z: top / (y + t - z)))
    base = c * y ** (-rho) * (1.0 - y) ** (rho - 1.0)
    pieces.append(
        _Piece(
            0.0,
            t,
            0.0,
            rho,
            lambda z: base * (1.0 - z) ** (1.0 - rho) / (y + t - z),
        )
    )
    return pieces


_QUAD_LIMIT = 300
_ERR_CAP = 1e-9


def _quad(h: Callable[[float], float], a: float, b: float, eps: float) -> tuple[float, float]:
    val, err, *_ = quad(
        h, a, b, epsabs=eps, epsrel=1e-10, limit=_QUAD_LIMIT, full_output=1
    )
    if err > _ERR_CAP:
        raise QuadratureError(f"quadrature did not converge on [{a:.6g}, {b:.6g}]", err)
    return val, err


def _integrate_power(
    g: Callable[[float], float],
    a: float,
    b: float,
    pow_a: float,
    pow_b: float,
    eps: float = 1e-10,
) -> float:
    """Integrate (z-a)^pow_a * (b-z)^pow_b * g(z) over (a, b), g bounded.

    Substituting z = a + u^(1/(1+pow_a)) (mirrored at b) cancels the endpoint
    power against the Jacobian exactly, so the singular factor is never formed
    from a rounded endpoint distance; powers must exceed -1 for integrability.
    """
    if pow_a <= -1.0 or pow_b <= -1.0:
        raise ValueError("endpoint powers must be > -1 for an integrable density")
    mid = 0.5 * (a + b)
    total = 0.0
    worst = 0.0
    if pow_a != 0.0:
        cexp = 1.0 / (1.0 + pow_a)
        u_hi = (mid - a) ** (1.0 + pow_a)

        def left(u: float) -> float:
            z = a + u**cexp
            rest = g(z) if pow_b == 0.0 else g(z) * (b - z) ** pow_b
            return cexp * rest

        val, err = _quad(left, 0.0, u_hi, eps)
    else:
        val, err = _quad(
            g if pow_b == 0.0 else lambda z: g(z) * (b - z) ** pow_b, a, mid, eps
        )
    total += val
    worst = max(worst, err)
    if pow_b != 0.0:
        cexp = 1.0 / (1.0 + pow_b)
        v_hi = (b - mid) ** (1.0 + pow_b)

        def right(v: float) -> float:
            z = b - v**cexp
            rest = g(z) if pow_a == 0.0 else g(z) * (z - a) ** pow_a
            return cexp * rest

        val, err = _quad(right, 0.0, v_hi, eps)
    else:
        val, err = _quad(
            g if pow_a == 0.0 else lambda z: g(z) * (z - a) ** pow_a, mid, b, eps
        )
    total += val
    worst = max(worst, err)
    if worst > _ERR_CAP:
        raise QuadratureError("endpoint-substituted quadrature inaccurate", worst)
    return total


def _sum_piece_integrals(pieces: Sequence[_Piece], eps: float = 1e-10) -> float:
    total = 0.0
    for piece in pieces:
        if piece.hi <= piece.lo:
            continue
        total += _integrate_power(
            piece.g, piece.lo, piece.hi, piece.pow_lo, piece.pow_hi, eps
        )
    return total


def _product_integral(
    pieces_a: Sequence[_Piece], pieces_b: Sequence[_Piece], eps: float = 1e-10
) -> float:
    """Integral of (sum of pieces_a)(z) * (sum of pieces_b)(z) dz.

    Each pairwise product is again of power-endpoint form on the overlap of
    the two supports; powers at a shared endpoint add.
    """
    total = 0.0
    for pa in pieces_a:
        for pb in pieces_b:
            lo = max(pa.lo, pb.lo)
            hi = min(pa.hi, pb.hi)
            if hi <= lo:
                continue
            pow_lo = (pa.pow_lo if pa.lo == lo else 0.0) + (
                pb.pow_lo if pb.lo == lo else 0.0
            )
            pow_hi = (pa.pow_hi if pa.hi == hi else 0.0) + (
                pb.pow_hi if pb.hi == hi else 0.0
            )

            # endpoint powers absorbed into pow_lo/pow_hi are skipped in the
            # smooth factor so they are only applied once, analytically
            def rest(
                z: float,
                left: _Piece = pa,
                right: _Piece = pb,
                llo: bool = pa.lo == lo,
                lhi: bool = pa.hi == hi,
                rlo: bool = pb.lo == lo,
                rhi: bool = pb.hi == hi,
            ) -> float:
                return _piece_value(left, z, llo, lhi) * _piece_value(right, z, rlo, rhi)

            total += _integrate_power(rest, lo, hi, pow_lo, pow_hi, eps)
    return total


def _arcsine_pieces(rho: float) -> list[_Piece]:
    c = math.sin(math.pi * rho) / math.pi
    return [_Piece(0.0, 1.0, -rho, rho - 1.0, lambda z: c)]


@dataclass(frozen=True)
class SemigroupEvaluation:
    """Atom and density of Q_t(x, .) for one (t, x)."""

    rho: float
    t: float
    x: float
    atom_location: float | None
    atom_weight: float
    support: tuple[float, float]
    density: Callable[[float], float]


def semigroup(law: StableLaw, t: float, x: float) -> SemigroupEvaluation:
    """Evaluate Q_t(x, .): branch selection, atom, and density callable."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    rho = law.rho
    w = atom_weight(rho, t, x)
    loc = x - t if (t <= x and t <= 1.0) else None
    support = (1.0 - t, 1.0) if (t <= x and t <= 1.0) else (0.0, 1.0)
    return SemigroupEvaluation(
        rho=rho,
        t=t,
        x=x,
        atom_location=loc,
        atom_weight=w,
        support=support,
        density=lambda y: transition_density(rho, t, x, y),
    )


def kernel_mass(law: StableLaw, t: float, x: float, eps: float = 1e-10) -> float:
    """Atom weight plus quadrature of the density; must equal 1."""
    ev = semigroup(law, t, x)
    return ev.atom_weight + _sum_piece_integrals(_pieces_target(law.rho, t, x), eps)


def stationarity_residual(
    law: StableLaw, t: float, y_grid: Sequence[float] | None = None
) -> float:
    """Max relative deviation of integral f(x) Q_t(x, dy) from f(y) on a grid.

    The atom of Q_t(x, .) transports arcsine mass from x = y + t down to y;
    that contribution has the closed form

        f(y+t) * w_t(y+t) = sin(pi rho)/pi * (y+t)^(-rho) (1-y)^(rho-1)

    valid whenever y + t <= 1 (the (1-y-t) powers cancel exactly).
    """
    if t <= 0.0:
        raise ValueError("t must be positive")
    rho = law.rho
    if y_grid is None:
        y_grid = np.linspace(0.05, 0.95, 19)
    c = math.sin(math.pi * rho) / math.pi
    f_pieces = _arcsine_pieces(rho)
    worst = 0.0
    for y in y_grid:
        y = float(y)
        target = arcsine_density(rho, y)
        if t >= 1.0:
            # every source already relaxed to f; residual is the quadrature
            # error of the total mass
            total = target * _sum_piece_integrals(f_pieces)
        else:
            total = _product_integral(f_pieces, _pieces_source(rho, t, y))
            if y + t <= 1.0:
                total += c * (y + t) ** (-rho) * (1.0 - y) ** (rho - 1.0)
        worst = max(worst, abs(total - target) / target)
    return worst


def chapman_kolmogorov_residual(
    law: StableLaw,
    s: float,
    t: float,
    x: float,
    y_grid: Sequence[float] | None = None,
) -> float:
    """Max absolute gap between the composed density of Q_s Q_t and Q_{s+t}.

    The composed density at y has three parts: the s-atom at x-s feeding
    q_t(x-s, .), the z-density hitting the t-atom (z = y+t), and the
    double-density convolution integral.  The composed atom telescopes to
    the (s+t)-atom algebraically and is not re-checked here.

    The t-atom term q_s(x, y+t) * w_t(y+t) is an indeterminate 0 * inf at
    y = 1 - t; its (1-y-t) powers cancel exactly, leaving
    _density_no_top(s, x, y+t) / (1-y)^(1-rho), which is used throughout.
    """
    if s <= 0.0 or t <= 0.0:
        raise ValueError("s and t must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    rho = law.rho
    if y_grid is None:
        y_grid = np.linspace(0.1, 0.9, 9)
    qs_pieces = _pieces_target(rho, s, x)
    worst = 0.0
    for y in y_grid:
        y = float(y)
        comp = 0.0
        if s <= 1.0 and s <= x:
            comp += atom_weight(rho, s, x) * transition_density(rho, t, x - s, y)
        if y + t <= 1.0 and t <= 1.0:
            comp += _density_no_top(rho, s, x, y + t) / (1.0 - y) ** (1.0 - rho)
        comp += _product_integral(qs_pieces, _pieces_source(rho, t, y))
        direct = transition_density(rho, s + t, x, y)
        worst = max(worst, abs(comp - direct))
    return worst


def jump_rate(law: StableLaw, x: float) -> float:
    """Rate (1-rho)/(1-x) at which the argmin at x is displaced to the top.

    Matches the small-t expansion of the transport atom:
    1 - atom_weight(t, x) = jump_rate(x) * t + o(t).
    """
    if not 0.0 < x < 1.0:
        raise ValueError("x must lie in (0, 1)")
    return (1.0 - law.rho) / (1.0 - x)
