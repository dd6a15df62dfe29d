"""Test fixtures and data generators."""
from .graph_data import (
    atlas_graphs,
    random_graphs,
    random_instances,
    two_three_instance,
    k23_instance,
    triangle_with_apex
)
