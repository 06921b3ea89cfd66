"""Collision scans, inverse moduli, and decoding."""

import math

import numpy as np
import pytest

from projlab.embedding import (collision_probability, collision_scan,
                               inverse_continuity_modulus,
                               log_lipschitz_defect, nearest_point_decode,
                               perturbed_preimage_search, pointwise_holder,
                               set_diameter, transversality_fraction)
from projlab.linalg import LinearOperator, sample_e


def test_scan_modes_agree():
    rng = np.random.default_rng(0)
    pts = rng.uniform(-1, 1, (300, 3))
    op = sample_e(3, 2, seed=1)
    for eps in (0.05, 0.02):
        exact = collision_scan(pts, op, eps=eps, delta=0.5, mode="exact")
        bucket = collision_scan(pts, op, eps=eps, delta=0.5, mode="bucketed")
        assert exact.count == bucket.count > 0
        # distances may differ in the last ulp between the two norm paths
        for pe, pb in zip(exact.pairs, bucket.pairs):
            assert pe[:2] == pb[:2]
            assert pe[2] == pytest.approx(pb[2], rel=1e-12)
            assert pe[3] == pytest.approx(pb[3], rel=1e-9, abs=1e-15)


def test_scan_exact_collisions_at_eps_zero():
    pts = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
    op = LinearOperator([[1.0, 0.0]])  # kills the second coordinate
    rep = collision_scan(pts, op, eps=0.0, delta=0.5)
    assert rep.pairs == [(0, 1, 1.0, 0.0)]
    assert rep.mode == "exact"
    assert rep.in_regime


def test_scan_regime_flag_and_validation():
    pts = np.random.default_rng(1).uniform(0, 1, (20, 2))
    rep = collision_scan(pts, None, eps=0.4, delta=0.5)
    assert not rep.in_regime  # 2 eps > delta
    with pytest.raises(ValueError):
        collision_scan(pts, None, eps=-0.1, delta=0.5)
    with pytest.raises(ValueError):
        collision_scan(pts, None, eps=0.1, delta=0.0)
    with pytest.raises(ValueError):
        collision_scan(pts, None, eps=0.0, delta=0.5, mode="bucketed")
    with pytest.raises(ValueError):
        collision_scan(pts, None, eps=0.1, delta=0.5, mode="sorted")


def test_collision_probability_fields_and_monotonicity():
    rng = np.random.default_rng(2)
    pts = rng.uniform(-1, 1, (150, 3))
    out = collision_probability(pts, base_index=0, delta=0.25,
                                eps_grid=[2.0**-3, 2.0**-4, 2.0**-5],
                                k=2, n_maps=400, seed=7)
    counts = [c for _, c in out["table"]]
    eps = [e for e, _ in out["table"]]
    assert eps == sorted(eps, reverse=True)
    assert counts == sorted(counts, reverse=True)  # events shrink with eps
    assert out["n_maps"] == 400 and out["k"] == 2
    assert out["sampler"] == "unit-ball-rows"
    again = collision_probability(pts, base_index=0, delta=0.25,
                                  eps_grid=[2.0**-3, 2.0**-4, 2.0**-5],
                                  k=2, n_maps=400, seed=7)
    assert again["table"] == out["table"]


def test_transversality_event_scaling():
    # event |L e1| <= eps over ball-row maps: fraction scales like eps^k
    out = transversality_fraction([1.0, 0.0, 0.0], [0.0, 0.0],
                                  eps_grid=[2.0**-2, 2.0**-3, 2.0**-4],
                                  k=2, n_maps=40_000, seed=3)
    assert abs(out["fit"]["slope"] - 2.0) < 0.3
    assert math.isfinite(out["c_hat"]) and out["c_hat"] > 0
    fracs = [c / out["n_maps"] for _, c in out["table"]]
    assert fracs == sorted(fracs, reverse=True)


def test_transversality_scale_equivariance():
    # doubling |x| halves the eps needed for the same event count
    big = transversality_fraction([2.0, 0.0, 0.0], [0.0, 0.0],
                                  eps_grid=[2.0**-2], k=2, n_maps=20_000, seed=5)
    small = transversality_fraction([1.0, 0.0, 0.0], [0.0, 0.0],
                                    eps_grid=[2.0**-3], k=2, n_maps=20_000,
                                    seed=5)
    big_frac = big["table"][0][1] / big["n_maps"]
    small_frac = small["table"][0][1] / small["n_maps"]
    assert big_frac == pytest.approx(small_frac, rel=0.15)


def test_modulus_identity_map():
    rng = np.random.default_rng(4)
    pts = rng.uniform(0, 1, (200, 2))
    table = inverse_continuity_modulus(pts, None, [0.1, 0.3, 0.5])
    assert len(table) == 3
    for delta, eps in table:
        assert eps >= delta - 1e-7  # identity never contracts
    # nondecreasing in delta
    eps_vals = [eps for _, eps in table]
    assert eps_vals == sorted(eps_vals)


def test_modulus_detects_collision():
    pts = np.array([[0.0, 0.0], [0.0, 1.0], [3.0, 0.0]])
    op = LinearOperator([[1.0, 0.0]])
    table = inverse_continuity_modulus(pts, op, [0.5])
    assert table[0][1] <= 1e-7  # the vertical pair collides


def test_modulus_no_pairs_raises():
    pts = np.array([[0.0], [1.0]])
    with pytest.raises(ValueError):
        inverse_continuity_modulus(pts, None, [5.0])


def test_modulus_truncates_unreachable_scales():
    pts = np.array([[0.0], [1.0], [2.0]])
    table = inverse_continuity_modulus(pts, None, [0.5, 1.5, 10.0])
    assert [d for d, _ in table] == [0.5, 1.5]  # no pair at distance 10


def test_pointwise_holder_hand_example():
    pts = np.array([[0.0], [1.0], [4.0]])
    op = LinearOperator([[0.5]])
    est = pointwise_holder(pts, op, base_index=1, m_const=1.0)
    # normalizer 4: pd = (1/4, 3/4), im = (1/8, 3/8); the second pair binds
    # hardest: log2(3/4) / log2(3/8)
    expect = math.log2(0.75) / math.log2(0.375)
    assert est.alpha_hat == pytest.approx(expect, abs=1e-12)
    assert est.witness == 2
    assert est.n_binding == 2


def test_pointwise_holder_monotone_in_m():
    rng = np.random.default_rng(6)
    pts = rng.uniform(-1, 1, (60, 3))
    op = sample_e(3, 2, seed=9)
    last = -1.0
    for m in (1.0, 2.0, 4.0, 8.0):
        est = pointwise_holder(pts, op, base_index=0, m_const=m)
        assert est.alpha_hat >= last
        last = est.alpha_hat


def test_pointwise_holder_collision_and_identity():
    pts = np.array([[0.0, 0.0], [0.0, 2.0], [1.0, 0.0]])
    op = LinearOperator([[1.0, 0.0]])
    est = pointwise_holder(pts, op, base_index=0, m_const=4.0)
    assert est.alpha_hat == 0.0  # exact collision kills every exponent
    ident = pointwise_holder(pts, None, base_index=0, m_const=1.0)
    assert ident.alpha_hat == math.inf  # nothing binds at M = 1
    with pytest.raises(ValueError):
        pointwise_holder(pts, None, base_index=0, m_const=0.5)


def test_set_diameter_paths():
    pts = np.array([[0.0], [2.0], [7.0]])
    assert set_diameter(pts) == 7.0
    rng = np.random.default_rng(8)
    cloud = rng.uniform(0, 1, (9000, 2))
    cloud[0] = [0.0, 0.0]
    cloud[1] = [1.0, 1.0]
    # large input takes the hull shortcut; the diagonal is the diameter
    assert set_diameter(cloud) == pytest.approx(math.sqrt(2.0), abs=1e-12)
    flat = np.zeros((9000, 2))
    flat[:, 0] = np.linspace(0, 3, 9000)  # degenerate hull falls back
    assert set_diameter(flat) == pytest.approx(3.0, abs=1e-12)


def test_log_lipschitz_identity_floor():
    rng = np.random.default_rng(10)
    pts = rng.uniform(0, 1, (50, 2))
    out = log_lipschitz_defect(pts, None, base_index=0, big_r=None,
                               eta=2.0, theta=1.0)
    assert out["c_hat"] >= 1.0  # log factor only helps the identity
    assert out["R"] == pytest.approx(set_diameter(pts))


def test_log_lipschitz_collision_and_validation():
    pts = np.array([[0.0, 0.0], [0.0, 1.0], [2.0, 0.0]])
    op = LinearOperator([[1.0, 0.0]])
    out = log_lipschitz_defect(pts, op, base_index=0, big_r=4.0,
                               eta=2.0, theta=1.0)
    assert out["c_hat"] == 0.0
    assert out["witness"] == 1
    with pytest.raises(ValueError):
        log_lipschitz_defect(pts, op, 0, big_r=4.0, eta=1.0, theta=1.0)
    with pytest.raises(ValueError):
        log_lipschitz_defect(pts, op, 0, big_r=4.0, eta=2.0, theta=0.0)
    with pytest.raises(ValueError):
        log_lipschitz_defect(pts, op, 0, big_r=0.5, eta=2.0, theta=1.0)


def test_nearest_point_decode_ties_to_lowest_index():
    atoms = np.array([[0.0, 1.0], [0.0, -1.0], [5.0, 0.0]])
    op = LinearOperator([[1.0, 0.0]])  # both first atoms map to 0
    assert nearest_point_decode(atoms, op, [0.0]) == 0
    assert nearest_point_decode(atoms, op, [4.9]) == 2


def test_preimage_search_exact_kernel_branch():
    op = sample_e(3, 2, seed=12)
    out = perturbed_preimage_search(op, None, J=(0, 1, 2), radius=0.5, seed=0)
    assert out["exact"]
    assert out["found"]
    assert out["residual"] < 0.5 * 1e-4
    assert np.linalg.norm(out["y"]) == pytest.approx(0.5, rel=1e-9)


def test_preimage_search_mesh_branch():
    op = sample_e(3, 2, seed=13)
    out = perturbed_preimage_search(op, lambda pts: np.zeros((len(pts), 2)),
                                    J=(0, 1, 2), radius=0.5, seed=1)
    assert not out["exact"]
    assert out["found"]  # zero perturbation still has the kernel preimage


def test_preimage_search_resolution_guard():
    op = sample_e(3, 2, seed=14)
    with pytest.raises(ValueError):
        perturbed_preimage_search(op, None, J=(0, 1, 2), radius=0.5,
                                  resolution=0.1)
