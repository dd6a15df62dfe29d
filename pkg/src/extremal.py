"""
Extremal Module
Generators for the sharpness families and the standard test graphs.

Vertex numbering:
    H_n       a, x, y = 0, 1, 2 (the order-3 path Q0 with a as an end), then
              Q_1..Q_n as order-7 paths of consecutive labels; b_i is the
              4th vertex of Q_i and a is joined to every b_i
    H'(k, n)  R_0 = K_n on 0..n-1, then R_1..R_{2n+1}; each R_i lists its
              K_{2m-1} clique (m = k/3) first and then its 2m+1 pairs
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from src.config import Budgets
from src.deficiency import TIGHT_HN, ConditionReport, DeficiencyBound, sweep_bound, tight_hprime_bound
from src.graph_core import (
    Graph,
    VertexSet,
    complete_graph,
    cycle_graph,
    edgeless_graph,
    induced_subgraph,
    mask_of,
    path_graph,
)

logger = logging.getLogger(__name__)

FAMILIES = ("Hn", "Hprime", "path", "cycle", "complete", "star", "edgeless", "random")

# Order-7 blocks of H_n carry no additive constant
HN_BLOCK_BOUND = DeficiencyBound.make("hn_block", {1: 3, 3: 2}, 4, 0)


class FamilySpecError(ValueError):
    """Unknown family or invalid parameters"""


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: Tuple = ()

    def __str__(self):
        return f"{self.family}:{','.join(str(p) for p in self.params)}"


def hn_roles(n: int) -> Dict:
    """a, x, y and the block centers b_1..b_n of H_n"""
    if n < 1:
        raise FamilySpecError(f"H_n needs n >= 1, got {n}")
    return {'a': 0, 'x': 1, 'y': 2, 'b': [3 + 7 * i + 3 for i in range(n)]}


def gen_Hn(n: int) -> Graph:
    """Order-3 path plus n order-7 paths, the end a of Q0 joined to each center"""
    roles = hn_roles(n)
    edges = [(0, 1), (1, 2)]
    for i in range(n):
        start = 3 + 7 * i
        edges.extend((start + j, start + j + 1) for j in range(6))
    edges.extend((roles['a'], b) for b in roles['b'])
    return Graph.from_edges(3 + 7 * n, edges)


def hprime_roles(k: int, n: int) -> Dict:
    """R_0 and, per R_i, its clique vertices and its pairs"""
    if k < 3 or k % 3:
        raise FamilySpecError(f"H'(k, n) needs k >= 3 with k divisible by 3, got k = {k}")
    if n < 1:
        raise FamilySpecError(f"H'(k, n) needs n >= 1, got {n}")
    m = k // 3
    blocks = []
    start = n
    for _ in range(2 * n + 1):
        clique = list(range(start, start + 2 * m - 1))
        first_pair = start + 2 * m - 1
        pairs = [[first_pair + 2 * j, first_pair + 2 * j + 1] for j in range(2 * m + 1)]
        blocks.append({'clique': clique, 'pairs': pairs})
        start += 2 * k + 1
    return {'R0': list(range(n)), 'R': blocks}


def gen_Hprime(k: int, n: int) -> Graph:
    """K_n joined to 2n+1 copies of R = K_{2m-1} joined to (2m+1) K_2, m = k/3"""
    roles = hprime_roles(k, n)
    size = n + (2 * n + 1) * (2 * k + 1)
    edges = [(u, v) for u in roles['R0'] for v in range(u + 1, size)]
    for block in roles['R']:
        clique = block['clique']
        edges.extend((u, v) for i, u in enumerate(clique) for v in clique[i + 1:])
        for u, v in block['pairs']:
            edges.append((u, v))
            edges.extend((c, w) for c in clique for w in (u, v))
    return Graph.from_edges(size, edges)


def star_graph(n: int) -> Graph:
    """K_{1,n} with center 0"""
    return Graph.from_edges(n + 1, [(0, i) for i in range(1, n + 1)])


def random_graph(n: int, p: float, seed: int) -> Graph:
    """
    Each pair u < v, in lexicographic order, is an edge iff the next PCG64
    double from numpy's default_rng(seed) is below p
    """
    if not 0.0 <= p <= 1.0:
        raise FamilySpecError(f"Edge probability must lie in [0, 1], got {p}")
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    draws = np.random.default_rng(seed).random(len(pairs))
    return Graph.from_edges(n, [pair for pair, x in zip(pairs, draws) if x < p])


def parse_family(text: str) -> FamilySpec:
    """
    Parse "name:p1,p2,..." e.g. Hn:1, Hprime:3,1, cycle:5, random:8,0.5,7

    Raises:
        FamilySpecError: On an unknown family or malformed parameters
    """
    name, _, raw = text.strip().partition(":")
    if name not in FAMILIES:
        raise FamilySpecError(f"Unknown family '{name}'. Available families: {', '.join(FAMILIES)}")
    parts = [p.strip() for p in raw.split(",") if p.strip()] if raw else []
    try:
        if name == "random":
            if len(parts) != 3:
                raise FamilySpecError("random needs n,p,seed")
            params = (int(parts[0]), float(parts[1]), int(parts[2]))
        else:
            params = tuple(int(p) for p in parts)
    except ValueError as e:
        raise FamilySpecError(f"Malformed parameters in '{text}': {e}") from e
    expected = {"Hprime": 2, "random": 3}.get(name, 1)
    if len(params) != expected:
        raise FamilySpecError(f"Family '{name}' takes {expected} parameter(s), got {len(params)}")
    return FamilySpec(name, params)


def gen_standard(spec: FamilySpec) -> Graph:
    """Build any family member; deterministic for a fixed spec"""
    family, params = spec.family, spec.params
    if family in ("path", "cycle", "complete", "star", "edgeless") and params[0] < 0:
        raise FamilySpecError(f"{family} needs a non-negative size, got {params[0]}")
    if family == "Hn":
        return gen_Hn(*params)
    if family == "Hprime":
        return gen_Hprime(*params)
    if family == "path":
        return path_graph(params[0])
    if family == "cycle":
        if params[0] < 3:
            raise FamilySpecError(f"Cycle needs at least 3 vertices, got {params[0]}")
        return cycle_graph(params[0])
    if family == "complete":
        return complete_graph(params[0])
    if family == "star":
        return star_graph(params[0])
    if family == "edgeless":
        return edgeless_graph(params[0])
    if family == "random":
        return random_graph(*params)
    raise FamilySpecError(f"Unknown family '{family}'")


def hn_pieces(n: int) -> List[Tuple[VertexSet, DeficiencyBound]]:
    """Q0 with the +2/3 slack, each order-7 block with none"""
    pieces = [(mask_of(range(3)), TIGHT_HN)]
    for i in range(n):
        start = 3 + 7 * i
        pieces.append((mask_of(range(start, start + 7)), HN_BLOCK_BOUND))
    return pieces


def hprime_pieces(k: int, n: int) -> List[Tuple[VertexSet, DeficiencyBound]]:
    """Every R_i (i >= 1) with the tight H' bound"""
    bound = tight_hprime_bound(k)
    pieces = []
    for block in hprime_roles(k, n)['R']:
        vertices = block['clique'] + [v for pair in block['pairs'] for v in pair]
        pieces.append((mask_of(vertices), bound))
    return pieces


def hn_extremal_set(n: int) -> VertexSet:
    """X = {x, b_1..b_n}: leaves a and y isolated and two P3s per block, so D = 2"""
    roles = hn_roles(n)
    return mask_of([roles['x']] + roles['b'])


def hprime_extremal_set(k: int, n: int) -> VertexSet:
    """
    R_0, every clique, and the first vertex of every pair: each R_i leaves
    2m+1 isolated vertices, attaining the tight H' bound with equality
    """
    roles = hprime_roles(k, n)
    chosen = list(roles['R0'])
    for block in roles['R']:
        chosen.extend(block['clique'])
        chosen.extend(pair[0] for pair in block['pairs'])
    return mask_of(chosen)


def check_piece_bounds(G: Graph, pieces: List[Tuple[VertexSet, DeficiencyBound]],
                       budgets: Budgets = None) -> List[ConditionReport]:
    """
    Sweep each piece's local bound over the subsets of that piece

    The local bound depends only on X ∩ piece, so sweeping the induced
    subgraph covers every X ⊆ V(G).
    """
    reports = []
    for mask, bound in pieces:
        sub, _ = induced_subgraph(G, mask)
        report = sweep_bound(sub, bound, budgets)
        logger.debug(f"Piece {bound.name} on {sub.n} vertices: max slack {report.max_slack}")
        reports.append(report)
    return reports
