import math

import numpy as np
import pytest

from conftest import random_instance
from src.core.clipping import (
    abs_pow, clip, effective_norm, max_effective_norm, perturb, saturation_thresholds, unconstrained_eta,
)
from src.core.oracle import naive_effective_norm
from src.models.domain import DomainBounds, ProblemInstance
from src.models.exceptions import InvalidInstance, ZeroDelta


class TestClip:

    @pytest.mark.parametrize('v, a, b, expected', [
        ([-0.5, 0.5, 1.5], 0.0, 1.0, [0.0, 0.5, 1.0]),
        ([0.2, 0.8], 0.0, 1.0, [0.2, 0.8]),
        ([3.0, -3.0], -1.0, 1.0, [1.0, -1.0]),
    ])
    def test_examples(self, v, a, b, expected):
        np.testing.assert_array_equal(clip(v, DomainBounds(a, b)), expected)

    def test_result_inside_box(self):
        rng = np.random.default_rng(0)
        bounds = DomainBounds(-0.25, 2.0)
        out = clip(rng.normal(scale=10.0, size=1000), bounds)
        assert np.all(out >= bounds.a) and np.all(out <= bounds.b)


class TestProblemInstance:

    def test_rejects_degenerate_bounds(self):
        with pytest.raises(InvalidInstance):
            DomainBounds(1.0, 1.0)
        with pytest.raises(InvalidInstance):
            DomainBounds(0.0, math.inf)

    @pytest.mark.parametrize('x, delta, eps, p', [
        ([0.5], [1.0, 1.0], 0.1, 2.0),
        ([], [], 0.1, 2.0),
        ([1.5], [1.0], 0.1, 2.0),
        ([-1e-300], [1.0], 0.1, 2.0),
        ([0.5], [math.nan], 0.1, 2.0),
        ([0.5], [1.0], -0.1, 2.0),
        ([0.5], [1.0], 0.1, 0.5),
        ([0.5], [1.0], 0.1, math.inf),
    ])
    def test_rejects_invalid(self, x, delta, eps, p):
        with pytest.raises(InvalidInstance):
            ProblemInstance(x, delta, eps, p)

    def test_rejects_zero_delta(self):
        with pytest.raises(ZeroDelta):
            ProblemInstance([0.5, 0.5], [0.0, 0.0], 0.1)

    def test_x_on_faces_is_valid(self):
        inst = ProblemInstance([0.0, 1.0], [1.0, -1.0], 0.1)
        assert inst.n == 2

    def test_vectors_are_read_only(self, worked_instance):
        with pytest.raises(ValueError):
            worked_instance.x[0] = 0.0


class TestAbsPow:

    @pytest.mark.parametrize('p', [1.0, 1.5, 2.0, 3.0, 7.0, 2.5])
    def test_matches_power(self, p):
        v = np.array([-2.0, -0.3, 0.0, 0.7, 4.0])
        np.testing.assert_allclose(abs_pow(v, p), np.abs(v) ** p, rtol=1e-14)

    def test_zero_with_fractional_p(self):
        assert abs_pow(0.0, 1.5) == 0.0


class TestEffectiveNorm:

    def test_zero_eta(self, worked_instance):
        assert effective_norm(worked_instance, 0.0) == 0.0

    def test_no_clipping(self):
        inst = ProblemInstance([0.5], [1.0], 0.3, 2.0)
        assert effective_norm(inst, 0.3) == pytest.approx(0.3, rel=1e-15)

    def test_saturates_at_upper_face(self):
        inst = ProblemInstance([0.9], [1.0], 0.5, 2.0)
        assert effective_norm(inst, 0.5) == pytest.approx(0.1, rel=1e-12)

    def test_negative_eta_rejected(self, worked_instance):
        with pytest.raises(ValueError):
            effective_norm(worked_instance, -1.0)

    def test_zero_delta_coordinates_do_not_contribute(self):
        with_zero = ProblemInstance([0.3, 0.9, 0.1], [1.0, 0.0, -2.0], 0.1, 3.0)
        without = ProblemInstance([0.3, 0.1], [1.0, -2.0], 0.1, 3.0)
        for eta in (0.01, 0.1, 1.0, 100.0):
            assert effective_norm(with_zero, eta) == effective_norm(without, eta)

    def test_matches_naive_evaluation(self):
        """1e5 (instance, eta) pairs, n up to 256, p in {1, 1.5, 2, 3, 7}"""
        rng = np.random.default_rng(20240501)
        checked = 0
        for _ in range(10_000):
            inst = random_instance(rng, n_max=256, p_values=(1.0, 1.5, 2.0, 3.0, 7.0))
            finite = saturation_thresholds(inst)
            finite = finite[np.isfinite(finite)]
            eta_max = float(np.max(finite)) ** (1.0 / inst.p)
            if eta_max == 0:
                continue
            # x + eta * delta - x loses digits when the perturbation is tiny next to x
            floor = 1e-3 * inst.n ** (1.0 / inst.p) * max(abs(inst.bounds.a), abs(inst.bounds.b), 1.0)
            for u in rng.uniform(0.05, 1.5, 10):
                eta = u * eta_max
                expected = naive_effective_norm(inst, eta)
                if expected < floor:
                    continue
                assert effective_norm(inst, eta) == pytest.approx(expected, rel=1e-12)
                checked += 1
        assert checked > 50_000

    def test_properties_on_eta_grid(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            inst = random_instance(rng)
            grid = np.concatenate([[0.0], np.geomspace(1e-4, 1e4, 60)])
            values = np.array([effective_norm(inst, eta) for eta in grid])
            delta_norm = np.sum(np.abs(inst.delta) ** inst.p) ** (1.0 / inst.p)

            # Non-decreasing in eta
            assert np.all(np.diff(values) >= -1e-12 * np.maximum(1.0, values[1:]))
            # Clipping never increases the norm
            assert np.all(values <= grid * delta_norm * (1 + 1e-12))
            # Bounded by the fully saturated norm
            assert np.all(values <= max_effective_norm(inst) * (1 + 1e-12))

    def test_equals_max_beyond_last_threshold(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            inst = random_instance(rng)
            thresholds = saturation_thresholds(inst)
            eta_last = float(np.max(thresholds[np.isfinite(thresholds)])) ** (1.0 / inst.p)
            for eta in (eta_last * 1.001, eta_last * 10.0, 1e9):
                if eta > 0:
                    assert effective_norm(inst, eta) == max_effective_norm(inst)


class TestUnconstrainedEta:

    @pytest.mark.parametrize('delta, p, eps, expected', [
        ([3.0, 4.0], 2.0, 1.0, 0.2),
        ([1.0, 1.0, 1.0, 1.0], 1.0, 2.0, 0.5),
        ([3.0, 4.0], 2.0, 0.0, 0.0),
    ])
    def test_examples(self, delta, p, eps, expected):
        inst = ProblemInstance([0.5] * len(delta), delta, eps, p)
        assert unconstrained_eta(inst) == pytest.approx(expected, rel=1e-15)

    @pytest.mark.parametrize('magnitude', [1e-200, 1e160])
    def test_extreme_delta_magnitudes(self, magnitude):
        # |delta_i|^2 leaves the float64 range, the norm itself does not
        inst = ProblemInstance([0.5, 0.5], [magnitude, magnitude], 0.1, 2.0)
        assert unconstrained_eta(inst) == pytest.approx(0.1 / (magnitude * math.sqrt(2.0)), rel=1e-14)


class TestMaxEffectiveNorm:

    def test_sum_of_face_distances(self):
        inst = ProblemInstance([0.9, 0.5], [1.0, 1.0], 0.1, 2.0)
        assert max_effective_norm(inst) == pytest.approx(math.sqrt(0.26), rel=1e-14)

    def test_distance_to_lower_face(self):
        inst = ProblemInstance([0.5], [-1.0], 0.1, 1.0)
        assert max_effective_norm(inst) == pytest.approx(0.5, rel=1e-15)

    def test_full_box_traversal(self):
        n = 7
        inst = ProblemInstance([-1.0] * n, [0.5] * n, 0.1, 1.0, DomainBounds(-1.0, 2.0))
        assert max_effective_norm(inst) == pytest.approx(n * 3.0, rel=1e-15)

    def test_ignores_zero_delta(self):
        inst = ProblemInstance([0.2, 0.2], [1.0, 0.0], 0.1, 2.0)
        assert max_effective_norm(inst) == pytest.approx(0.8, rel=1e-15)


def test_perturb_stays_in_box(worked_instance):
    np.testing.assert_allclose(perturb(worked_instance, 0.5), [1.0, 1.0])
    np.testing.assert_allclose(perturb(worked_instance, 0.05), [0.95, 0.55])
