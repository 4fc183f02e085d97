"""Monte Carlo walk sampling: exactness, determinism, and limit behaviour."""

import math

import numpy as np
import pytest

from hmix import walks


class TestWalkSample:
    def test_zero_steps_is_the_identity(self):
        assert walks.sample_walk(0) == walks.WalkSample(0, 0, 0, 0)

    def test_invariants_hold_across_seeds(self):
        for seed in range(50):
            s = walks.sample_walk(31, seed=seed)
            assert abs(s.x) + abs(s.y) <= 31
            assert (s.x + s.y - 31) % 2 == 0

    def test_invariant_violations_raise(self):
        with pytest.raises(ValueError):
            walks.WalkSample(2, 3, 0, 0)  # size beyond step count
        with pytest.raises(ValueError):
            walks.WalkSample(2, 1, 0, 0)  # parity mismatch

    def test_modular_reduction(self):
        s = walks.sample_walk(100, modulus=7, seed=1)
        assert 0 <= s.x < 7 and 0 <= s.y < 7 and 0 <= s.z < 7
        assert s.modulus == 7

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            walks.sample_walk(-1)
        with pytest.raises(ValueError):
            walks.sample_walk(5, modulus=0)


class TestCoordinateFormulas:
    def test_thousand_walks_match_group_products(self):
        for seed in range(1000):
            walks.sample_walk(23, seed=seed, validate=True)

    def test_batch_matches_group_products(self):
        seeds, sizes = walks._batches(41, 64, seed=9)
        x, y, z = walks._endpoint_batch(seeds[0], sizes[0], 41)
        rng = np.random.default_rng(seeds[0])
        codes = rng.integers(0, 4, size=(64, 41), dtype=np.uint8)
        for t in range(64):
            assert walks.endpoint_via_products(codes[t]) == (x[t], y[t], z[t])

    def test_modular_product_route(self):
        codes = np.array([0, 2, 1, 3, 0, 0, 2], dtype=np.uint8)
        full = walks.endpoint_via_products(codes)
        red = walks.endpoint_via_products(codes, modulus=5)
        assert red == tuple(c % 5 for c in full)


class TestBatching:
    def test_batch_size_is_a_fixed_function_of_k(self):
        assert walks._batch_trials(1) == 65536
        assert walks._batch_trials(1000) == 65536
        assert walks._batch_trials(10**4) == 6710
        assert walks._batch_trials(1 << 26) == 256

    def test_worker_count_never_changes_estimates(self):
        serial = walks.return_probability(100, 200000, seed=42, jobs=1)
        threaded = walks.return_probability(100, 200000, seed=42, jobs=4)
        assert serial == threaded


class TestReturnProbability:
    def test_two_step_return_is_one_quarter(self):
        est, se = walks.return_probability(2, 10**6, seed=3)
        assert abs(est - 0.25) <= 3.0 * se

    def test_two_step_center_law(self):
        # in the 16-path enumeration exactly 2 paths land on z = 1
        counts = walks._map_batches(
            lambda x, y, z: int(np.count_nonzero(z == 1)), 2, 10**6, 11, 1
        )
        est = sum(counts) / 10**6
        se = math.sqrt(est * (1.0 - est) / 10**6)
        assert abs(est - 0.125) <= 3.0 * se

    def test_central_second_moment(self):
        # E[Z_k^2] = k*(k-1)/8 exactly
        k, trials = 40, 400000
        totals = walks._map_batches(
            lambda x, y, z: float(np.sum(z.astype(np.float64) ** 2)), k, trials, 7, 2
        )
        mean = sum(totals) / trials
        assert mean == pytest.approx(k * (k - 1) / 8.0, rel=0.05)

    def test_xy_return_matches_local_limit(self):
        # P{(X,Y)=(0,0)} at even k is asymptotically 2/(pi*k)
        k, trials = 40, 200000
        est, se = walks.xy_return_probability(k, trials, seed=13)
        target = 2.0 / (math.pi * k)
        assert abs(est - target) <= 3.0 * se + 0.1 * target

    def test_rejects_odd_or_tiny_step_counts(self):
        with pytest.raises(ValueError):
            walks.return_probability(101, 1000)
        with pytest.raises(ValueError):
            walks.return_probability(0, 1000)
        with pytest.raises(ValueError):
            walks.xy_return_probability(7, 1000)
        with pytest.raises(ValueError):
            walks.return_probability(4, 0)


class TestLimitLaw:
    def test_requires_diffusive_depth(self):
        with pytest.raises(ValueError):
            walks.zn_limit_test(999, 1000)

    def test_half_area_reading_fits(self):
        rep = walks.zn_limit_test(1000, 20000, seed=5)
        assert rep.preferred == "half_area"
        assert rep.ks == rep.ks_half_area < 0.03
        assert rep.ks_plain_area > 0.05  # the unhalved reading is clearly worse
        assert abs(rep.median) < 0.02
        assert rep.second_moment == pytest.approx((1.0 - 1.0 / 1000) / 8.0, rel=0.05)

    def test_deterministic_across_workers(self):
        one = walks.zn_limit_test(1000, 8192, seed=21, jobs=1)
        four = walks.zn_limit_test(1000, 8192, seed=21, jobs=4)
        assert one == four
