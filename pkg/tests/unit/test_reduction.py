"""
Unit tests for reduction.
Tests the auxiliary instance, lifting central components back into G, the
recursive constructive solver and cross-validation against the exact solver.
"""

import os
import sys

import pytest

project_root = os.path.dirname(os.path.dirname(os.path.dirname(__file__)))
sys.path.insert(0, project_root)

from src.bipartite_central import s_central_t2_factor
from src.deficiency import THEOREM1, Witness
from src.extremal import gen_Hn, star_graph
from src.factor_search import SearchBudgetExceeded, verify_factor
from src.graph_core import Graph, complete_graph, cycle_graph, mask_of, path_graph
from src.reduction import (
    FACTOR_ORDERS,
    AuxiliaryCertificateError,
    ConstructiveSolver,
    LiftPiece,
    build_auxiliary,
    cross_validate,
    find_factor,
    lift_component,
)


class TestBuildAuxiliary:
    """Tests for build_auxiliary."""

    def test_apex_triangle(self, apex_triangle):
        aux = build_auxiliary(apex_triangle, mask_of([0]))
        assert aux.s_vertices == (0,)
        assert aux.tokens == (mask_of([1, 2, 3]),)
        assert aux.instance.T2 == [1]
        assert aux.instance.graph.edges() == [(0, 1)]
        assert aux.certificate.holds
        assert aux.component_of(0) == mask_of([0])
        assert aux.token_to_component == {1: [1, 2, 3]}

    def test_singletons_come_before_triangles(self):
        # center 0 sees the isolated leaf 1 and the triangle 2, 3, 4
        G = Graph.from_edges(5, [(0, 1), (0, 2), (2, 3), (3, 4), (2, 4)])
        aux = build_auxiliary(G, mask_of([0]))
        assert aux.instance.T1 == [1]
        assert aux.instance.T2 == [2]
        assert aux.component_of(2) == mask_of([2, 3, 4])

    def test_failing_certificate(self):
        G = star_graph(3)
        with pytest.raises(AuxiliaryCertificateError):
            build_auxiliary(G, mask_of([0]))
        aux = build_auxiliary(G, mask_of([0]), require_certificate=False)
        assert not aux.certificate.holds
        assert aux.certificate.witness.condition == 't2_weight'

    def test_order3_path_is_not_a_triangle(self):
        with pytest.raises(AuxiliaryCertificateError, match="not a triangle"):
            build_auxiliary(path_graph(4), mask_of([0]))


class TestLiftComponent:
    """Tests for LiftPiece and lift_component."""

    def _apex_piece(self, G):
        aux = build_auxiliary(G, mask_of([0]))
        (component,) = s_central_t2_factor(aux.instance)
        return LiftPiece.from_component(G, aux, component)

    def test_piece_fields(self, apex_triangle):
        piece = self._apex_piece(apex_triangle)
        assert piece.kinds == ('s', 't2')
        assert piece.u_mask == mask_of([0])
        assert piece.vertex_mask == mask_of([0, 1, 2, 3])
        assert piece.triangles == [mask_of([1, 2, 3])]
        assert piece.t1_mask == 0

    def test_walk_lift(self, apex_triangle):
        piece = self._apex_piece(apex_triangle)
        assert lift_component(apex_triangle, piece, "walk") == [[0, 1], [3, 2]]

    def test_exhaustive_lift_prefers_least_sequence(self, apex_triangle):
        piece = self._apex_piece(apex_triangle)
        assert lift_component(apex_triangle, piece, "exhaustive") == [[0, 1], [2, 3]]

    def test_unknown_method(self, apex_triangle):
        piece = self._apex_piece(apex_triangle)
        with pytest.raises(ValueError):
            lift_component(apex_triangle, piece, "greedy")


class TestConstructiveSolver:
    """Tests for find_factor and the recorded branch trace."""

    def test_p2(self, p2):
        assert find_factor(p2) == [[0, 1]]

    def test_c5_uses_cycle_branch(self, c5):
        solver = ConstructiveSolver()
        assert solver.find_factor(c5) == [[0, 4, 3, 2, 1]]
        assert [step['branch'] for step in solver.trace] == ['cycle']
        assert solver.trace[0]['beta3'] == 6

    def test_c6_uses_auxiliary_branch(self, c6):
        solver = ConstructiveSolver()
        factor = solver.find_factor(c6)
        assert verify_factor(c6, factor, FACTOR_ORDERS).ok
        assert solver.trace[0]['branch'] == 'auxiliary'
        assert solver.trace[0]['beta3'] == 4

    def test_k5_deletes_edges_first(self):
        G = complete_graph(5)
        solver = ConstructiveSolver()
        factor = solver.find_factor(G)
        assert verify_factor(G, factor, FACTOR_ORDERS).ok
        assert solver.trace[0] == {'depth': 0, 'n': 5, 'edges': 10, 'branch': 'edge_deletion', 'beta3': 7}

    def test_lift_methods_differ_on_k4(self, k4):
        assert find_factor(k4, lift_method="walk") == [[0, 1], [3, 2]]
        assert find_factor(k4, lift_method="exhaustive") == [[0, 1], [2, 3]]

    def test_h1_returns_witness(self):
        G = gen_Hn(1)
        result = find_factor(G)
        assert isinstance(result, Witness)
        assert result.slack == 1
        assert THEOREM1.slack(G, result.X) == 1

    def test_budget(self, tiny_budgets):
        with pytest.raises(SearchBudgetExceeded):
            find_factor(path_graph(8), tiny_budgets)

    def test_trace_resets(self, c6):
        solver = ConstructiveSolver()
        solver.find_factor(c6)
        first = list(solver.trace)
        solver.find_factor(c6)
        assert solver.trace == first

    def test_small_graphs_satisfying_condition(self, seeded_graphs):
        for G in seeded_graphs:
            result = find_factor(G)
            if isinstance(result, Witness):
                continue
            assert verify_factor(G, result, FACTOR_ORDERS).ok, repr(G)


class TestCrossValidate:
    """Tests for cross_validate."""

    def test_c5(self, c5):
        result = cross_validate(c5)
        assert result.sufficient and result.necessary and result.exact
        assert result.constructive is True
        assert result.consistent

    def test_k3(self, k3):
        result = cross_validate(k3)
        assert not result.sufficient
        assert not result.necessary
        assert result.constructive is None
        assert result.to_dict()['consistent'] is True

    def test_h1(self):
        result = cross_validate(gen_Hn(1))
        assert not result.sufficient
        assert not result.exact
        assert result.consistent

    def test_cycle_family(self):
        for n in range(3, 10):
            assert cross_validate(cycle_graph(n)).consistent
