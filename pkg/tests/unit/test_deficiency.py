"""
Unit tests for deficiency.
Covers the deficit value, every sweep-based condition checker, the scaled
beta value with its tie-break, and the generic rational family bound.
"""

import os
import sys

import pytest

project_root = os.path.dirname(os.path.dirname(os.path.dirname(__file__)))
sys.path.insert(0, project_root)

from src.deficiency import (
    NECESSARY,
    THEOREM1,
    SweepBudgetExceeded,
    beta_scaled,
    check_conjecture_hypothesis,
    check_family_bound,
    check_necessary,
    check_sufficient,
    check_theorem_a,
    conjecture_bound,
    deficit,
    odd_orders,
    sweep_bound,
    tight_hprime_bound,
)
from src.extremal import gen_Hn, hn_extremal_set, hn_roles, star_graph
from src.graph_core import complete_graph, cycle_graph, edgeless_graph, mask_of, path_graph


class TestDeficit:
    """Tests for D(G, X) = 3c1 + 2c3 - 4|X|."""

    def test_triangle_empty_set(self, k3):
        assert deficit(k3, []) == 2

    def test_p3_middle(self):
        assert deficit(path_graph(3), [1]) == 2

    def test_h1_extremal_set(self):
        roles = hn_roles(1)
        assert deficit(gen_Hn(1), [roles['x'], roles['b'][0]]) == 2

    def test_mask_and_iterable_agree(self, c6):
        assert deficit(c6, mask_of([0, 3])) == deficit(c6, [0, 3])

    def test_slack_matches_deficit(self, seeded_graphs):
        for G in seeded_graphs:
            X = mask_of(v for v in range(G.n) if v % 2)
            assert THEOREM1.slack(G, X) == deficit(G, X) - 1


class TestSufficientCondition:
    """Tests for check_sufficient."""

    def test_c5_holds(self, c5):
        report = check_sufficient(c5)
        assert report.holds
        assert report.witness is None
        assert report.worst.X == 0
        assert report.max_slack == -1

    def test_k3_fails_at_empty_set(self, k3):
        report = check_sufficient(k3)
        assert not report.holds
        assert report.witness.X == 0
        assert (report.witness.lhs, report.witness.rhs) == (2, 1)

    def test_h1_fails_with_deficit_two(self):
        G = gen_Hn(1)
        report = check_sufficient(G)
        assert report.max_slack == 1
        assert deficit(G, report.witness.X) == 2
        assert THEOREM1.slack(G, hn_extremal_set(1)) == 1

    def test_every_subset_counted(self, c6):
        assert check_sufficient(c6).subsets_checked == 64

    def test_budget_exceeded(self, tiny_budgets):
        with pytest.raises(SweepBudgetExceeded):
            check_sufficient(cycle_graph(6), tiny_budgets)

    def test_report_serializes(self, k3):
        data = check_sufficient(k3).to_dict()
        assert data['holds'] is False
        assert data['worst'] == {'condition': 'sufficient', 'X': [], 'lhs': 2, 'rhs': 1}

    @pytest.mark.parametrize("n", [7, 8])
    def test_sharded_sweep_matches_sequential(self, n):
        G = cycle_graph(n)
        assert check_sufficient(G, jobs=2) == check_sufficient(G, jobs=1)


class TestNecessaryCondition:
    """Tests for check_necessary."""

    def test_p5_holds(self):
        assert check_necessary(path_graph(5)).holds

    def test_k1_fails(self):
        report = check_necessary(complete_graph(1))
        assert report.witness.X == 0
        assert (report.witness.lhs, report.witness.rhs) == (2, 0)

    def test_h1_reports_an_outcome(self):
        report = check_necessary(gen_Hn(1))
        assert report.condition == NECESSARY.name
        assert report.subsets_checked == 1 << 10


class TestTheoremA:
    """Tests for check_theorem_a (c1 <= 2|X|)."""

    def test_p3_holds(self):
        assert check_theorem_a(path_graph(3)).holds

    def test_k13_fails_at_center(self):
        report = check_theorem_a(star_graph(3))
        assert report.witness.vertices == [0]
        assert (report.witness.lhs, report.witness.rhs) == (3, 2)

    def test_edgeless_pair_fails_at_empty_set(self):
        report = check_theorem_a(edgeless_graph(2))
        assert report.witness.X == 0
        assert report.max_slack == 2


class TestBetaScaled:
    """Tests for beta_scaled and its maximum-set tie-break."""

    def test_k3(self, k3):
        result = beta_scaled(k3)
        assert result.beta3 == -1
        assert result.argmax_set == 0

    def test_k4(self, k4):
        # X = one vertex leaves a triangle: 4 + 1 - 2
        result = beta_scaled(k4)
        assert result.beta3 == 3
        assert result.argmax_set == mask_of([0])

    def test_p2(self, p2):
        result = beta_scaled(p2)
        assert result.beta3 == 2
        assert result.argmax_set == mask_of([0])

    def test_c5_prefers_least_mask_among_pairs(self, c5):
        result = beta_scaled(c5)
        assert result.beta3 == 6
        assert result.argmax_set == mask_of([0, 2])

    def test_empty_graph_infeasible(self):
        result = beta_scaled(edgeless_graph(0))
        assert not result.feasible
        assert result.beta3 is None

    def test_deterministic(self, petersen):
        assert beta_scaled(petersen) == beta_scaled(petersen)

    def test_sign_matches_sufficient_condition(self, small_atlas):
        for G in small_atlas:
            result = beta_scaled(G)
            assert (result.beta3 >= 0) == check_sufficient(G).holds, repr(G)

    def test_argmax_set_attains_beta(self, seeded_graphs):
        for G in seeded_graphs:
            result = beta_scaled(G)
            assert -THEOREM1.slack(G, result.argmax_set) == result.beta3

    def test_to_dict(self, k4):
        assert beta_scaled(k4).to_dict() == {'beta3': 3, 'argmax_set': [0], 'feasible': True}


class TestFamilyBound:
    """Tests for check_family_bound and the named bound builders."""

    def test_hn_bound_is_tight_on_h1(self):
        report = check_family_bound(gen_Hn(1), 4, 3, 2, 3, {1: 3, 3: 2})
        assert report.max_slack == 0

    def test_huge_bound_has_negative_slack(self, k3):
        report = check_family_bound(k3, 100, 1, 100, 1, {1: 3, 3: 2})
        assert report.max_slack < 0

    def test_mixed_denominators_are_cleared(self, k3):
        # common denominator 6: weights are numerators over 6
        report = check_family_bound(k3, 1, 2, 1, 3, {3: 6})
        assert report.worst.X == 0
        assert (report.worst.lhs, report.worst.rhs) == (6, 2)

    def test_rejects_non_positive_denominator(self, k3):
        with pytest.raises(ValueError):
            check_family_bound(k3, 1, 0, 1, 1, {1: 1})

    def test_odd_orders(self):
        assert odd_orders(3) == [1, 3, 5]

    def test_conjecture_bounds(self):
        assert conjecture_bound(1).weights == ((1, 1),)
        assert conjecture_bound(1).x_coef == 2
        assert conjecture_bound(2).weights == ((1, 3), (3, 3))
        k3_bound = conjecture_bound(3)
        assert k3_bound.weights == ((1, 27), (3, 27), (5, 27))
        assert (k3_bound.x_coef, k3_bound.constant) == (18, 0)

    def test_conjecture_needs_positive_k(self):
        with pytest.raises(ValueError):
            conjecture_bound(0)

    def test_tight_hprime_constant(self):
        bound = tight_hprime_bound(3)
        assert (bound.x_coef, bound.constant) == (18, 9)

    def test_conjecture_k1_is_theorem_a(self, small_atlas):
        for G in small_atlas[:60]:
            assert check_conjecture_hypothesis(G, 1).holds == check_theorem_a(G).holds

    def test_sweep_bound_accepts_named_bound(self, c6):
        assert sweep_bound(c6, conjecture_bound(2)).holds
