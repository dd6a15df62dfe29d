"""
Shared pytest fixtures for the path-factor toolkit test suite.
"""

import os
import sys

import pytest

# Add project root to path for imports
project_root = os.path.dirname(os.path.dirname(__file__))
sys.path.insert(0, project_root)

from src.config import Budgets, ToolkitConfig
from src.graph_core import Graph, complete_graph, cycle_graph, path_graph
from tests.fixtures.graph_data import (
    atlas_graphs,
    k23_instance,
    random_graphs,
    random_instances,
    triangle_with_apex,
    two_three_instance,
)


# ============================================================================
# CONFIGURATION FIXTURES
# ============================================================================

@pytest.fixture
def budgets():
    """Budgets comfortably above every desk-scale test graph."""
    return Budgets(max_n=32, max_subsets=1 << 24, max_nodes=5_000_000, memo_capacity=200_000)


@pytest.fixture
def tiny_budgets():
    """Budgets small enough to trip on purpose."""
    return Budgets(max_n=6, max_subsets=1 << 5, max_nodes=10, memo_capacity=4)


@pytest.fixture(autouse=True)
def restore_toolkit_config():
    """ToolkitConfig is class-level state; undo any apply() a test performs."""
    saved = {k: v for k, v in vars(ToolkitConfig).items() if not k.startswith('_') and not callable(v)
             and not isinstance(v, classmethod)}
    yield
    for key, value in saved.items():
        setattr(ToolkitConfig, key, value)


# ============================================================================
# GRAPH FIXTURES
# ============================================================================

@pytest.fixture
def p2():
    return path_graph(2)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def c6():
    return cycle_graph(6)


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def apex_triangle():
    return triangle_with_apex()


@pytest.fixture
def petersen():
    """Petersen graph: outer 5-cycle 0..4, spokes i-(i+5), inner pentagram."""
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, edges)


@pytest.fixture(scope="session")
def small_atlas():
    """All graphs on 1..6 vertices."""
    return atlas_graphs(max_n=6)


@pytest.fixture(scope="session")
def full_atlas():
    """All graphs on 1..7 vertices."""
    return atlas_graphs(max_n=7)


@pytest.fixture(scope="session")
def seeded_graphs():
    return random_graphs(count=40, min_n=2, max_n=9, p=0.4, seed=42)


# ============================================================================
# BIPARTITE INSTANCE FIXTURES
# ============================================================================

@pytest.fixture
def two_three():
    """(instance, name -> label) for the |S| = 2, |T| = 3 example."""
    return two_three_instance()


@pytest.fixture
def k23():
    return k23_instance()


@pytest.fixture(scope="session")
def seeded_instances():
    return random_instances(count=120, max_s=5, max_t=7, seed=7)
