import itertools
import math
from contextlib import nullcontext

import numpy as np
import pytest

from iomatch.fuzzy import (
    IdentificationPowerWarning,
    apply_certainty,
    gaussian_membership,
    nominal_plateau,
    nominal_proximity,
    possibility,
    qualitative_distance,
    round_half_away,
    triangular_from_halfwidth,
    triangular_from_relative_error,
)
from iomatch.model import Certainty

from oracles import grid_possibility, random_triangular


class TestRounding:
    @pytest.mark.parametrize(
        "x,expected",
        [(4.8, 5), (19.2, 19), (4.5, 5), (3.5, 4), (-4.5, -5), (7.0, 7)],
    )
    def test_half_away_from_zero(self, x, expected):
        assert round_half_away(x) == expected


class TestTriangularConstruction:
    def test_relative_error_bounds(self):
        m = triangular_from_relative_error(1000.0, 0.3)
        assert (m.g_min, m.g_max) == (700.0, 1300.0)

    def test_rounded_bounds(self):
        m = triangular_from_relative_error(12.0, 0.6)
        assert (m.g_min, m.g_max) == (5.0, 19.0)

    def test_degenerate_support_rejected(self):
        with pytest.raises(ValueError, match="degenerate"):
            triangular_from_relative_error(10.0, 0.01)

    @pytest.mark.parametrize("k", [0.0, 1.0, -0.2])
    def test_k_out_of_range(self, k):
        with pytest.raises(ValueError):
            triangular_from_relative_error(10.0, k)

    def test_halfwidth_evaluation(self):
        m = triangular_from_halfwidth(5, 2)
        assert m.evaluate(5) == 1.0
        assert m.evaluate(6) == 0.5
        assert m.evaluate(7) == 0.0
        assert triangular_from_halfwidth(5, 2, height=0.6).evaluate(5) == 0.6

    def test_membership_equation_piecewise(self):
        m = triangular_from_relative_error(12.0, 0.6)  # support [5, 19]
        assert m.evaluate(5.0) == 0.0
        assert m.evaluate(8.5) == pytest.approx((8.5 - 5.0) / (12.0 - 5.0))
        assert m.evaluate(12.0) == 1.0
        assert m.evaluate(15.0) == pytest.approx((19.0 - 15.0) / (19.0 - 12.0))
        assert m.evaluate(19.0) == 0.0
        assert m.evaluate(25.0) == 0.0


class TestGaussianMembership:
    def test_closed_form_point(self):
        m = gaussian_membership(12.0, 3.0)
        assert m.evaluate(15) == pytest.approx(math.exp(-0.5), abs=1e-12)
        assert m.evaluate(15) == pytest.approx(0.6065, abs=1e-4)

    def test_peak_and_tail(self):
        m = gaussian_membership(7.0, 2.0)
        assert m.evaluate(7.0) == 1.0
        assert m.evaluate(7.0 + 6 * 2.0) < 1e-7

    def test_non_positive_spread_rejected(self):
        with pytest.raises(ValueError):
            gaussian_membership(0.0, 0.0)


class TestApplyCertainty:
    def test_certain_unchanged(self):
        m = triangular_from_halfwidth(5, 2)
        assert apply_certainty(m, Certainty.CERTAIN) == m

    def test_probable_scales_peak(self):
        m = triangular_from_relative_error(1000.0, 0.3)
        scaled = apply_certainty(m, Certainty.PROBABLE)
        assert scaled.height == pytest.approx(0.7)
        assert (scaled.g_min, scaled.g_max, scaled.peak) == (m.g_min, m.g_max, m.peak)

    def test_doubtful(self):
        m = gaussian_membership(3.0, 1.0)
        assert apply_certainty(m, Certainty.DOUBTFUL).height == pytest.approx(0.25)


class TestPossibility:
    def test_triangular_fixture(self):
        m1 = triangular_from_relative_error(12.0, 0.6)
        m2 = triangular_from_relative_error(18.0, 0.6)
        assert possibility(m1, m2) == pytest.approx(0.667, abs=0.005)

    def test_gaussian_fixture_integer_grid(self):
        m1 = gaussian_membership(12.0, 3.0)
        m2 = gaussian_membership(18.0, 3.0)
        # Max-min lands on the midpoint rank 15.
        assert possibility(m1, m2) == pytest.approx(0.6065, abs=0.005)

    def test_identical_certain_sets(self):
        m = triangular_from_halfwidth(4.0, 2.0)
        assert possibility(m, m) == 1.0
        assert qualitative_distance(possibility(m, m)) == 0.0

    def test_disjoint_supports(self):
        m1 = triangular_from_halfwidth(0.0, 1.0)
        m2 = triangular_from_halfwidth(10.0, 1.0)
        assert possibility(m1, m2) == 0.0

    @pytest.mark.parametrize("gap,expected", [(1, 0.75), (2, 0.5), (3, 0.25)])
    def test_rank_lattice_closed_form(self, gap, expected):
        m1 = triangular_from_halfwidth(5.0, 2.0)
        m2 = triangular_from_halfwidth(5.0 + gap, 2.0)
        assert possibility(m1, m2) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("gap,expected", [(1, 0.5625), (2, 0.375)])
    def test_certainty_scaled_crossings(self, gap, expected):
        m1 = triangular_from_halfwidth(5.0, 2.0, height=0.6)
        m2 = triangular_from_halfwidth(5.0 + gap, 2.0)
        assert possibility(m1, m2) == pytest.approx(expected, abs=1e-9)

    def test_symmetry_exact_on_random_pairs(self):
        rng = np.random.default_rng(99)
        for _ in range(200):
            m1, m2 = random_triangular(rng), random_triangular(rng)
            assert possibility(m1, m2) == possibility(m2, m1)

    def test_bounded_by_peak_heights(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            m1, m2 = random_triangular(rng), random_triangular(rng)
            assert possibility(m1, m2) <= min(m1.height, m2.height) + 1e-12

    def test_certainty_monotonicity(self):
        rng = np.random.default_rng(17)
        levels = [Certainty.CERTAIN, Certainty.PROBABLE, Certainty.POSSIBLE, Certainty.DOUBTFUL]
        for _ in range(50):
            m1, m2 = random_triangular(rng), random_triangular(rng)
            results = [possibility(apply_certainty(m1, lvl), m2) for lvl in levels]
            assert all(a >= b - 1e-12 for a, b in zip(results, results[1:]))

    def test_dense_grid_oracle(self):
        rng = np.random.default_rng(20240612)
        for _ in range(50):
            m1, m2 = random_triangular(rng), random_triangular(rng)
            assert possibility(m1, m2) == pytest.approx(grid_possibility(m1, m2), abs=1e-3)

    def test_triangle_inequality_on_rank_lattice(self):
        for w in (1.0, 2.0, 3.0):
            memberships = {r: triangular_from_halfwidth(float(r), w) for r in range(11)}
            distance = {}
            for a in range(11):
                for b in range(11):
                    distance[a, b] = 1.0 - possibility(memberships[a], memberships[b])
            for a, b, c in itertools.product(range(11), repeat=3):
                assert distance[a, c] <= distance[a, b] + distance[b, c] + 1e-12

    def test_plateau_pairs(self):
        same = possibility(nominal_plateau("tank", 0.1), nominal_plateau("tank", 0.1))
        assert same == 1.0
        different = possibility(nominal_plateau("tank", 0.1), nominal_plateau("truck", 0.1))
        assert different == pytest.approx(0.1)

    def test_mixed_axes_rejected(self):
        with pytest.raises(ValueError, match="incompatible axes"):
            possibility(nominal_plateau("tank", 0.1), triangular_from_halfwidth(1.0, 1.0))


class TestNominalProximity:
    def test_match_and_mismatch(self):
        assert nominal_proximity("tank", "tank", 0.1) == 1.0
        assert nominal_proximity("tank", "truck", 0.1) == 0.1

    @pytest.mark.parametrize("delta", [0.0, 0.6, 1.0, -0.1])
    def test_delta_out_of_range(self, delta):
        with pytest.raises(ValueError):
            nominal_proximity("a", "b", delta)

    def test_half_delta_warns(self):
        with pytest.warns(IdentificationPowerWarning):
            assert nominal_proximity("a", "b", 0.5) == 0.5

    def test_plateau_equivalence(self):
        # The short-circuit rule equals the max-min of the plateau memberships.
        for delta in (0.1, 0.3, 0.5):
            p1 = nominal_plateau("a", delta)
            p2 = nominal_plateau("b", delta)
            with pytest.warns(IdentificationPowerWarning) if delta == 0.5 else nullcontext():
                assert nominal_proximity("a", "b", delta) == possibility(p1, p2)
                assert nominal_proximity("a", "a", delta) == possibility(p1, p1)


class TestQualitativeDistance:
    @pytest.mark.parametrize("p,expected", [(0.75, 0.25), (1.0, 0.0), (0.56, 0.44)])
    def test_complement(self, p, expected):
        assert qualitative_distance(p) == pytest.approx(expected)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            qualitative_distance(1.5)
