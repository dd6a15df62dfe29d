"""
Factor Search Module
Exact exponential-time solvers and verifiers for path-factors whose component
orders come from a given set, e.g. {2, 5}, {2, 7} or {2, 3}.

Two independent engines live here:
    ExactFactorSolver   branch on the least uncovered vertex with a failure memo
    iter_path_factors   brute force over set partitions and Hamiltonian paths
Tests use each as the oracle for the other.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from src.config import Budgets, ToolkitConfig
from src.graph_core import Graph, VertexSet, component_sizes, mask_of, vertices_of

logger = logging.getLogger(__name__)

PathFactor = List[List[int]]


class IndecomposableOrderError(ValueError):
    """A path order that cannot be written as a sum of 2s and 5s"""


class SearchBudgetExceeded(RuntimeError):
    """The exact search hit its configured size or node budget"""


@dataclass(frozen=True)
class FactorVerdict:
    ok: bool
    diagnostic: str

    def __bool__(self):
        return self.ok


def verify_factor(G: Graph, paths: Sequence[Sequence[int]], allowed_orders: Optional[Iterable[int]] = None) -> FactorVerdict:
    """
    Check that `paths` is a path-factor of G with component orders in allowed_orders

    Args:
        G: Host graph
        paths: Candidate factor, each path an ordered vertex sequence
        allowed_orders: Permitted path orders; None allows every order >= 2

    Returns:
        FactorVerdict; the diagnostic names the first violated condition
    """
    allowed = set(allowed_orders) if allowed_orders is not None else None
    seen = set()
    for index, path in enumerate(paths):
        if len(path) < 2:
            return FactorVerdict(False, f"path {index} has order {len(path)} < 2")
        for v in path:
            if not isinstance(v, int) or not 0 <= v < G.n:
                return FactorVerdict(False, f"path {index} uses vertex {v!r} outside [0, {G.n})")
            if v in seen:
                return FactorVerdict(False, f"vertex {v} is repeated (path {index})")
            seen.add(v)
        for u, v in zip(path, path[1:]):
            if not G.has_edge(u, v):
                return FactorVerdict(False, f"path {index} uses non-edge {u}-{v}")
        if allowed is not None and len(path) not in allowed:
            return FactorVerdict(False, f"path {index} has order {len(path)} not in {sorted(allowed)}")
    if len(seen) != G.n:
        missing = sorted(set(range(G.n)) - seen)
        return FactorVerdict(False, f"not spanning: vertices {missing} uncovered")
    return FactorVerdict(True, "ok")


def decompose_path_orders(n: int) -> List[int]:
    """
    Split a path order into 2s and 5s

    Args:
        n: Path order (>= 2, != 3)

    Returns:
        Orders summing to n: all 2s when n is even, one 5 followed by 2s when odd

    Raises:
        IndecomposableOrderError: For n in {0, 1, 3} or negative n
    """
    if n < 2 or n == 3:
        raise IndecomposableOrderError(f"Order {n} is indecomposable into 2s and 5s")
    if n % 2 == 0:
        return [2] * (n // 2)
    return [5] + [2] * ((n - 5) // 2)


def split_path(path: Sequence[int]) -> PathFactor:
    """Cut a path into consecutive segments of orders 5 and 2"""
    pieces = []
    start = 0
    for order in decompose_path_orders(len(path)):
        pieces.append(list(path[start:start + order]))
        start += order
    return pieces


def _representable_orders(allowed: Set[int], limit: int) -> List[bool]:
    """reachable[s] is True iff s is a sum of allowed orders"""
    reachable = [False] * (limit + 1)
    reachable[0] = True
    for total in range(1, limit + 1):
        reachable[total] = any(o <= total and reachable[total - o] for o in allowed)
    return reachable


class ExactFactorSolver:
    """
    Exhaustive search for a path-factor with prescribed component orders.

    Branches on the least uncovered vertex; every allowed-order path through it
    is built as two arms glued at the vertex. Failed uncovered-sets are
    remembered in an LRU memo of bounded capacity.
    """

    def __init__(self, G: Graph, allowed_orders: Iterable[int], budgets: Optional[Budgets] = None):
        self.logger = logging.getLogger(__name__)
        self.G = G
        self.allowed = frozenset(allowed_orders)
        if not self.allowed:
            raise ValueError("allowed_orders must be nonempty")
        if min(self.allowed) < 2:
            raise ValueError(f"Path orders must be >= 2, got {sorted(self.allowed)}")
        self.budgets = budgets or ToolkitConfig.budgets()
        if G.n > self.budgets.max_n:
            raise SearchBudgetExceeded(f"Graph has {G.n} vertices, budget max_n is {self.budgets.max_n}")
        self.max_order = min(max(self.allowed), max(G.n, 2))
        self._reachable = _representable_orders(self.allowed, G.n)
        self._failed = OrderedDict()
        self.nodes_visited = 0
        self.memo_hits = 0

    def solve(self) -> Optional[PathFactor]:
        """Return a factor (list of paths) or None when none exists"""
        if not self._feasible(self.G.vertex_mask):
            return None
        result = self._search(self.G.vertex_mask)
        self.logger.debug(f"Exact search {sorted(self.allowed)} on n={self.G.n}: "
                          f"{self.nodes_visited} nodes, {self.memo_hits} memo hits, "
                          f"{'found' if result is not None else 'none'}")
        return result

    def _feasible(self, uncovered: VertexSet) -> bool:
        """Every component of the uncovered part must have a representable order"""
        for size in component_sizes(self.G, self.G.vertex_mask & ~uncovered):
            if not self._reachable[size]:
                return False
        return True

    def _search(self, uncovered: VertexSet) -> Optional[PathFactor]:
        if not uncovered:
            return []
        if uncovered in self._failed:
            self._failed.move_to_end(uncovered)
            self.memo_hits += 1
            return None

        self.nodes_visited += 1
        if self.nodes_visited > self.budgets.max_nodes:
            raise SearchBudgetExceeded(f"Exact search exceeded {self.budgets.max_nodes} nodes on n={self.G.n}")

        v = (uncovered & -uncovered).bit_length() - 1
        for path in self._paths_through(v, uncovered):
            rest = uncovered & ~mask_of(path)
            if not self._feasible(rest):
                continue
            found = self._search(rest)
            if found is not None:
                return [list(path)] + found

        self._failed[uncovered] = True
        if len(self._failed) > self.budgets.memo_capacity:
            self._failed.popitem(last=False)
        return None

    def _arms(self, v: int, free: VertexSet, max_len: int) -> Iterator[Tuple[int, ...]]:
        """Simple paths leaving v inside `free` (v excluded), shortest prefix first"""
        yield ()
        if max_len <= 0:
            return
        adj = self.G.adj

        def extend(last, arm, used):
            for u in vertices_of(adj[last] & free & ~used):
                grown = arm + (u,)
                yield grown
                if len(grown) < max_len:
                    yield from extend(u, grown, used | (1 << u))

        yield from extend(v, (), 1 << v)

    def _paths_through(self, v: int, free: VertexSet) -> Iterator[Tuple[int, ...]]:
        """Allowed-order paths containing v, each reported once (first endpoint < last)"""
        for arm1 in self._arms(v, free, self.max_order - 1):
            room = self.max_order - 1 - len(arm1)
            for arm2 in self._arms(v, free & ~mask_of(arm1), room):
                if 1 + len(arm1) + len(arm2) not in self.allowed:
                    continue
                path = tuple(reversed(arm2)) + (v,) + arm1
                if path[0] < path[-1]:
                    yield path


def find_factor_exact(G: Graph, allowed_orders: Iterable[int], budgets: Optional[Budgets] = None) -> Optional[PathFactor]:
    """
    Exact search for a path-factor with component orders in allowed_orders

    Returns:
        A verified factor, or None only when no factor exists

    Raises:
        SearchBudgetExceeded: If the graph or the search exceeds the budgets
    """
    factor = ExactFactorSolver(G, allowed_orders, budgets).solve()
    if factor is not None:
        verdict = verify_factor(G, factor, allowed_orders)
        assert verdict.ok, f"exact solver produced an invalid factor: {verdict.diagnostic}"
    return factor


def has_path_factor(G: Graph, budgets: Optional[Budgets] = None) -> bool:
    """Whether G has a path-factor, decided by the isolated-vertex condition i(G-X) <= 2|X|"""
    from src.deficiency import check_theorem_a
    return check_theorem_a(G, budgets).holds


def _set_partitions(items: Sequence[int], allowed: Optional[Set[int]]) -> Iterator[List[Tuple[int, ...]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for r in range(len(rest) + 1):
        if r + 1 < 2 or (allowed is not None and r + 1 not in allowed):
            continue
        for combo in combinations(rest, r):
            chosen = set(combo)
            remaining = [x for x in rest if x not in chosen]
            for tail in _set_partitions(remaining, allowed):
                yield [(first,) + combo] + tail


def _hamiltonian_paths(G: Graph, block: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    return [p for p in permutations(block)
            if p[0] < p[-1] and all(G.has_edge(a, b) for a, b in zip(p, p[1:]))]


def iter_path_factors(G: Graph, allowed_orders: Optional[Iterable[int]] = None) -> Iterator[PathFactor]:
    """
    Brute-force enumeration of every path-factor of G

    Enumerates set partitions of V(G) into blocks of allowed size and, per
    block, every Hamiltonian path of the induced subgraph. Meant for graphs
    on at most about nine vertices.
    """
    allowed = set(allowed_orders) if allowed_orders is not None else None
    for blocks in _set_partitions(list(range(G.n)), allowed):
        choices = []
        for block in blocks:
            paths = _hamiltonian_paths(G, block)
            if not paths:
                break
            choices.append(paths)
        else:
            for combo in product(*choices):
                yield [list(p) for p in combo]


def brute_force_factor(G: Graph, allowed_orders: Optional[Iterable[int]] = None) -> Optional[PathFactor]:
    """First factor found by iter_path_factors, or None"""
    return next(iter_path_factors(G, allowed_orders), None)
