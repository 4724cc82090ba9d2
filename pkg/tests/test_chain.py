import math
from fractions import Fraction

import numpy as np
import pytest

from argminproc.chain import (
    ArgminChainKernel,
    DegenerateWalkError,
    brute_force_ssrw,
    build_kernel,
    kernel_from_sign_probabilities,
    last_argmin,
    ssrw_kernel,
    symmetric_continuous_kernel,
    theta_corner_value,
    theta_kernel,
    verify_lemma_identities,
)
from argminproc.ladder import (
    LadderSequences,
    SignProbabilities,
    closed_form_ssrw,
    closed_form_theta,
)


def test_ssrw_equals_brute_force_exactly():
    for N in range(1, 9):
        a = ssrw_kernel(N)
        b = brute_force_ssrw(N)
        assert np.array_equal(a.pi, b.pi), N
        assert np.array_equal(a.P, b.P), N


def test_ssrw_small_values():
    k2 = ssrw_kernel(2)
    assert k2.P[0, 2] == pytest.approx(0.5, abs=1e-15)
    assert k2.P[1, 2] == pytest.approx(0.5, abs=1e-15)
    assert k2.P[2, 2] == pytest.approx(0.5, abs=1e-15)
    k3 = ssrw_kernel(3)
    assert k3.P[0, 3] == pytest.approx(0.25, abs=1e-15)
    k1 = ssrw_kernel(1)
    assert k1.pi == pytest.approx([0.5, 0.5])


def test_theta_kernel_small_values():
    k = theta_kernel(0.5, 3)
    assert k.P[0, 3] == pytest.approx(0.25, abs=1e-13)
    # N=1 rows are both (theta, 1-theta): state is irrelevant one step out
    for theta in (1 / 3, 0.5, 0.77):
        k1 = theta_kernel(theta, 1)
        assert k1.P[0] == pytest.approx([theta, 1 - theta], abs=1e-14)
        assert k1.P[1] == pytest.approx([theta, 1 - theta], abs=1e-14)
        assert k1.P[1, 1] == pytest.approx(1 - theta, abs=1e-14)


def test_symmetric_continuous_values():
    k1 = symmetric_continuous_kernel(1)
    assert k1.pi == pytest.approx([0.5, 0.5])
    k2 = symmetric_continuous_kernel(2)
    assert k2.pi[1] == pytest.approx(0.25)


def test_constructors_cross_agree():
    for theta in (0.1, 0.3, 0.5, 0.7, 0.9):
        for N in (1, 2, 5, 17, 40):
            a = theta_kernel(theta, N)
            b = build_kernel(
                closed_form_theta(theta, N + 1),
                N,
                backward=closed_form_theta(1.0 - theta, N + 1),
            )
            assert np.abs(a.pi - b.pi).max() <= 1e-12
            assert np.abs(a.P - b.P).max() <= 1e-12
            if theta == 0.5:
                c = symmetric_continuous_kernel(N)
                assert np.abs(a.pi - c.pi).max() <= 1e-12
                assert np.abs(a.P - c.P).max() <= 1e-12


def test_ssrw_series_construction_agrees():
    for N in (1, 2, 7, 25, 40):
        a = ssrw_kernel(N)
        b = build_kernel(closed_form_ssrw(N + 1), N)
        assert np.abs(a.pi - b.pi).max() <= 1e-12
        assert np.abs(a.P - b.P).max() <= 1e-12


def test_corner_closed_form_matches_complement():
    for theta in (0.15, 1 / 3, 0.5, 0.82):
        for N in (1, 2, 3, 9, 24):
            k = theta_kernel(theta, N)
            assert k.P[0, N] == pytest.approx(
                theta_corner_value(theta, N), abs=1e-12
            )


def _enumerate_bernoulli(N: int, u: float) -> ArgminChainKernel:
    """Weighted exhaustive oracle for the +-1 walk with up-probability u."""
    n1 = N + 1
    uf = Fraction(u).limit_denominator(10**6)
    pi = [Fraction(0)] * n1
    P = [[Fraction(0)] * n1 for _ in range(n1)]
    for mask in range(1 << (N + 1)):
        s = 0
        path = [0]
        weight = Fraction(1)
        for b in range(N + 1):
            step = 1 if (mask >> b) & 1 else -1
            weight *= uf if step == 1 else 1 - uf
            s += step
            path.append(s)
        a0 = last_argmin(path[: N + 1])
        a1 = last_argmin(path[1 : N + 2])
        pi[a0] += weight
        P[a0][a1] += weight
    kern = np.zeros((n1, n1))
    for i in range(n1):
        if pi[i]:
            for j in range(n1):
                kern[i, j] = float(P[i][j] / pi[i])
    return ArgminChainKernel(
        N=N, pi=np.array([float(v) for v in pi]), P=kern
    ).validate()


def test_asymmetric_walk_matches_enumeration():
    # drifted lattice walk: exercises distinct ascending/descending ladders
    for u in (1 / 3, 2 / 3):
        sp_rows = []
        for n in range(1, 6):
            gt = ge = lt = Fraction(0)
            uf = Fraction(u).limit_denominator(10**6)
            for k in range(n + 1):
                w = math.comb(n, k) * uf**k * (1 - uf) ** (n - k)
                s = 2 * k - n
                if s > 0:
                    gt += w
                if s >= 0:
                    ge += w
                if s < 0:
                    lt += w
            sp_rows.append((float(ge), float(gt), float(lt)))
        sp = SignProbabilities(
            q_ge=tuple(r[0] for r in sp_rows),
            q_gt=tuple(r[1] for r in sp_rows),
            q_lt=tuple(r[2] for r in sp_rows),
        )
        for N in (2, 3, 4):
            a = kernel_from_sign_probabilities(sp, N)
            b = _enumerate_bernoulli(N, u)
            assert np.abs(a.pi - b.pi).max() <= 1e-12, (u, N)
            assert np.abs(a.P - b.P).max() <= 1e-12, (u, N)


def test_lemma_identities():
    assert verify_lemma_identities(0.5, 50) <= 1e-10
    assert verify_lemma_identities(1 / 3, 50) <= 1e-10
    assert verify_lemma_identities("ssrw", 50) <= 1e-10


def test_stationarity_fixed_point():
    for theta in (0.1, 0.25, 0.5, 0.75, 0.9):
        for N in (1, 5, 20, 40):
            k = theta_kernel(theta, N)
            assert np.abs(k.pi @ k.P - k.pi).max() <= 1e-10
    for N in (1, 5, 20, 40):
        k = ssrw_kernel(N)
        assert np.abs(k.pi @ k.P - k.pi).max() <= 1e-10


def test_structural_support():
    k = theta_kernel(0.37, 12)
    for i in range(1, 13):
        off = [j for j in range(13) if k.P[i, j] > 0 and j not in (i - 1, 12)]
        assert off == []


def test_symmetry_at_half():
    for N in (1, 6, 15):
        k = theta_kernel(0.5, N)
        assert np.abs(k.pi - k.pi[::-1]).max() <= 1e-14


def test_rows_sum_to_one():
    for k in (theta_kernel(0.2, 9), ssrw_kernel(9), symmetric_continuous_kernel(9)):
        assert np.abs(k.P.sum(axis=1) - 1.0).max() <= 1e-12
        assert k.pi.sum() == pytest.approx(1.0, abs=1e-12)


def test_never_negative_walk_rejected():
    ls = LadderSequences(p=(1.0,) * 6, p_tilde=(1.0,) * 6, tau=(0.0,) * 6)
    with pytest.raises(DegenerateWalkError):
        build_kernel(ls, 3)


def test_never_positive_walk_rejected():
    sp = SignProbabilities(q_ge=(0.0,) * 5, q_gt=(0.0,) * 5, q_lt=(1.0,) * 5)
    with pytest.raises(DegenerateWalkError):
        kernel_from_sign_probabilities(sp, 3)


def test_horizon_too_short():
    ls = closed_form_theta(0.5, 3)
    with pytest.raises(ValueError, match="horizon"):
        build_kernel(ls, 3)


def test_brute_force_guard():
    with pytest.raises(ValueError):
        brute_force_ssrw(15)


def test_csv_round_trip_bit_exact(tmp_path):
    k = ssrw_kernel(5)
    k.write_csv(tmp_path / "pi.csv", tmp_path / "P.csv")
    back = ArgminChainKernel.read_csv(tmp_path / "pi.csv", tmp_path / "P.csv")
    assert np.array_equal(back.pi, k.pi)
    assert np.array_equal(back.P, k.P)


def test_json_round_trip_bit_exact(tmp_path):
    k = theta_kernel(0.41, 7)
    k.write_json(tmp_path / "k.json")
    back = ArgminChainKernel.read_json(tmp_path / "k.json")
    assert np.array_equal(back.pi, k.pi)
    assert np.array_equal(back.P, k.P)


def test_validate_rejects_bad_shapes():
    k = theta_kernel(0.5, 2)
    with pytest.raises(ValueError):
        ArgminChainKernel(N=2, pi=k.pi[:2], P=k.P).validate()
    bad = k.P.copy()
    bad[1, 1] = 0.3
    with pytest.raises(ValueError):
        ArgminChainKernel(N=2, pi=k.pi, P=bad).validate()