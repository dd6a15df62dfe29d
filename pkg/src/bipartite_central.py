"""
Bipartite Central Factor Module
Constructive engine for weighted bipartite instances (S, T1, T2): builds a
spanning path-factor in which every component has at least as many T-vertices
as S-vertices ("S-central") and every order-3 component meets T2.

Pipeline:
    1. Hall matching covering S (Hopcroft-Karp), then absorb the uncovered
       T-vertices one at a time through layered P3 chains (s_central_spanning)
    2. While an order-3 component avoids T2: grow a complete path system in the
       factor digraph, extract the chain B_1..B_p and rewire it (rewire)

Components are stored as canonical tuples (the lexicographically smaller of
the two orientations) and ordered by their minimum vertex.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from src.config import Budgets, ToolkitConfig
from src.deficiency import SweepBudgetExceeded, Witness
from src.factor_search import FactorVerdict, iter_path_factors, verify_factor
from src.graph_core import Graph, VertexSet, mask_of, popcount, to_networkx, vertices_of

logger = logging.getLogger(__name__)

Path = Tuple[int, ...]


class HypothesisViolation(ValueError):
    """The instance does not satisfy the size, weight or neighborhood hypothesis"""


class MalformedChainError(ValueError):
    """A rewiring chain violates one of the orientation or membership rules"""


class EngineStuckError(RuntimeError):
    """The engine could not make progress; only possible on invalid input"""


def canonical(path: Iterable[int]) -> Path:
    forward = tuple(path)
    backward = forward[::-1]
    return min(forward, backward)


def sort_factor(paths: Iterable[Iterable[int]]) -> List[Path]:
    return sorted((canonical(p) for p in paths), key=min)


@dataclass(frozen=True)
class BipartiteInstance:
    """
    Bipartite graph on dense labels 0..N-1 with S, T1, T2 partitioning the labels.
    T1 vertices weigh 3 and T2 vertices weigh 2 in every scaled inequality.
    """
    graph: Graph
    s_mask: VertexSet
    t1_mask: VertexSet
    t2_mask: VertexSet

    @classmethod
    def build(cls, S: Iterable[int], T1: Iterable[int], T2: Iterable[int],
              edges: Iterable[Tuple[int, int]]) -> "BipartiteInstance":
        """
        Raises:
            ValueError: If the sets overlap, do not cover 0..N-1, or an edge stays inside S or T
        """
        S, T1, T2, edges = list(S), list(T1), list(T2), list(edges)
        size = len(S) + len(T1) + len(T2)
        s_mask, t1_mask, t2_mask = mask_of(S), mask_of(T1), mask_of(T2)
        if popcount(s_mask | t1_mask | t2_mask) != size or (s_mask | t1_mask | t2_mask) != (1 << size) - 1:
            raise ValueError(f"S, T1, T2 must partition 0..{size - 1}")
        graph = Graph.from_edges(size, edges)
        t_mask = t1_mask | t2_mask
        for u, v in edges:
            if not ((s_mask >> u & 1 and t_mask >> v & 1) or (t_mask >> u & 1 and s_mask >> v & 1)):
                raise ValueError(f"Edge {u}-{v} does not join S to T")
        return cls(graph, s_mask, t1_mask, t2_mask)

    @property
    def t_mask(self) -> VertexSet:
        return self.t1_mask | self.t2_mask

    @property
    def S(self) -> List[int]:
        return vertices_of(self.s_mask)

    @property
    def T1(self) -> List[int]:
        return vertices_of(self.t1_mask)

    @property
    def T2(self) -> List[int]:
        return vertices_of(self.t2_mask)

    def is_s(self, v: int) -> bool:
        return bool(self.s_mask >> v & 1)

    def is_t2(self, v: int) -> bool:
        return bool(self.t2_mask >> v & 1)

    def weight(self, mask: VertexSet) -> int:
        """3|mask ∩ T1| + 2|mask ∩ T2|"""
        return 3 * popcount(mask & self.t1_mask) + 2 * popcount(mask & self.t2_mask)

    def to_dict(self) -> Dict:
        return {'S': self.S, 'T1': self.T1, 'T2': self.T2, 'edges': self.graph.edges()}


@dataclass(frozen=True)
class HypothesisReport:
    holds: bool
    witness: Optional[Witness]
    detail: str


def check_t2_hypothesis(inst: BipartiteInstance, budgets: Optional[Budgets] = None) -> HypothesisReport:
    """
    Size, weight and neighborhood hypotheses of the instance

        1 <= |S| <= |T|,   3|T1| + 2|T2| <= 4|S| + 1,
        for every X ⊆ S:   3|N(X)∩T1| + 2|N(X)∩T2| >= 4|X|  or  N(X) = T

    The reported X is the violating set with least (|X|, mask).
    """
    s_count = popcount(inst.s_mask)
    t_count = popcount(inst.t_mask)
    if s_count < 1:
        return HypothesisReport(False, Witness(0, 1, s_count, 't2_nonempty'), "S is empty")
    if s_count > t_count:
        return HypothesisReport(False, Witness(inst.s_mask, s_count, t_count, 't2_size'),
                                f"|S| = {s_count} exceeds |T| = {t_count}")
    total = inst.weight(inst.t_mask)
    if total > 4 * s_count + 1:
        return HypothesisReport(False, Witness(inst.s_mask, total, 4 * s_count + 1, 't2_weight'),
                                f"3|T1| + 2|T2| = {total} exceeds 4|S| + 1 = {4 * s_count + 1}")

    budgets = budgets or ToolkitConfig.budgets()
    if (1 << s_count) > budgets.max_subsets:
        raise SweepBudgetExceeded(f"Neighborhood sweep over 2^{s_count} subsets of S exceeds budget")

    worst = None
    sub = inst.s_mask
    while sub:
        reach = inst.graph.neighborhood(sub) & inst.t_mask
        demand = 4 * popcount(sub)
        supply = inst.weight(reach)
        if supply < demand and reach != inst.t_mask:
            key = (popcount(sub), sub)
            if worst is None or key < worst[0]:
                worst = (key, Witness(sub, demand, supply, 't2_neighborhood'))
        sub = (sub - 1) & inst.s_mask
    if worst is not None:
        witness = worst[1]
        return HypothesisReport(False, witness,
                                f"X = {witness.vertices}: 3|N∩T1| + 2|N∩T2| = {witness.rhs} < 4|X| = {witness.lhs}")
    return HypothesisReport(True, None, "ok")


def classify_component(A: Sequence[int], inst: BipartiteInstance) -> Tuple[int, int]:
    """(order, 1) if A avoids T2, else (order, 2)"""
    return len(A), 2 if any(inst.is_t2(v) for v in A) else 1


def validate_central_factor(inst: BipartiteInstance, paths: Sequence[Sequence[int]],
                            require_t2: bool = True) -> FactorVerdict:
    """Spanning path-factor, S-central, and (optionally) every order-3 component meets T2"""
    verdict = verify_factor(inst.graph, paths)
    if not verdict.ok:
        return verdict
    for path in paths:
        mask = mask_of(path)
        if popcount(mask & inst.t_mask) < popcount(mask & inst.s_mask):
            return FactorVerdict(False, f"component {list(path)} has more S- than T-vertices")
        if require_t2 and len(path) == 3 and not mask & inst.t2_mask:
            return FactorVerdict(False, f"order-3 component {list(path)} avoids T2")
    return FactorVerdict(True, "ok")


def component_identities_hold(inst: BipartiteInstance, paths: Iterable[Sequence[int]]) -> List[str]:
    """
    Weighted component identities of an S-central factor (weights 3/2, S-side 4)

        order 3, no T2:        weight = 6 = 4|S∩A| + 2
        order 3, with T2:      weight >= 4|S∩A|
        order 5, no T2:        weight >  4|S∩A|
        order 5, one T2:       weight =  4|S∩A|
        order 7, no T2:        weight =  4|S∩A|

    Returns:
        Descriptions of the failing components (empty when all hold)
    """
    failures = []
    for path in paths:
        mask = mask_of(path)
        w = inst.weight(mask)
        s4 = 4 * popcount(mask & inst.s_mask)
        t2 = popcount(mask & inst.t2_mask)
        cls = classify_component(path, inst)
        ok = True
        if cls == (3, 1):
            ok = w == 6 == s4 + 2
        elif cls == (3, 2):
            ok = w >= s4
        elif cls == (5, 1):
            ok = w > s4
        elif cls == (5, 2) and t2 == 1:
            ok = w == s4
        elif cls == (7, 1):
            ok = w == s4
        if not ok:
            failures.append(f"{list(path)} class {cls}: weight {w} vs 4|S| = {s4}")
    return failures


class FactorDigraph:
    """
    Digraph on the components of a factor: A -> B iff some edge joins A∩S to B∩T.
    phi(A, B) is the least such edge (sigma, tau) with sigma in A and tau in B.
    """

    def __init__(self, inst: BipartiteInstance, factor: Iterable[Sequence[int]]):
        self.inst = inst
        self.nodes: List[Path] = sort_factor(factor)
        self.owner: Dict[int, Path] = {v: node for node in self.nodes for v in node}
        self.phi: Dict[Tuple[Path, Path], Tuple[int, int]] = {}
        self.succ: Dict[Path, List[Path]] = {node: [] for node in self.nodes}
        self._cls = {node: classify_component(node, inst) for node in self.nodes}

        for node in self.nodes:
            for s in sorted(v for v in node if inst.is_s(v)):
                for t in inst.graph.neighbors(s):
                    target = self.owner.get(t)
                    if target is None or target == node or (node, target) in self.phi:
                        continue
                    self.phi[(node, target)] = (s, t)
                    self.succ[node].append(target)
        for node in self.nodes:
            self.succ[node].sort(key=min)

    @property
    def arcs(self) -> List[Tuple[Path, Path]]:
        return [(a, b) for a in self.nodes for b in self.succ[a]]

    def cls(self, node: Path) -> Tuple[int, int]:
        return self._cls[node]

    def has_arc(self, a: Path, b: Path) -> bool:
        return (a, b) in self.phi

    def sigma(self, a: Path, b: Path) -> int:
        return self.phi[(a, b)][0]

    def tau(self, a: Path, b: Path) -> int:
        return self.phi[(a, b)][1]

    def order3_without_t2(self) -> List[Path]:
        return [node for node in self.nodes if self._cls[node] == (3, 1)]

    def first_eligible(self, node: Path) -> bool:
        """Allowed as first node of an admissible path: not order 3, not order 5 avoiding T2"""
        order, sup = self._cls[node]
        return order != 3 and (order, sup) != (5, 1)

    def interior_eligible(self, node: Path) -> bool:
        return self._cls[node] in ((3, 2), (5, 1))

    def is_admissible(self, path: Sequence[Path]) -> bool:
        if len(path) < 2 or len(set(path)) != len(path):
            return False
        if not all(self.has_arc(a, b) for a, b in zip(path, path[1:])):
            return False
        return self.first_eligible(path[0]) and all(self.interior_eligible(n) for n in path[1:-1])

    def is_weakly_admissible(self, path: Sequence[Path]) -> bool:
        if not self.is_admissible(path):
            return False
        first = path[0]
        cls = self._cls[first]
        if cls == (5, 2) and sum(1 for v in first if self.inst.is_t2(v)) == 1:
            return True
        # center of an order-7 path is its 4th vertex in either orientation
        return cls == (7, 1) and self.sigma(first, path[1]) == first[3]

    def is_strongly_admissible(self, path: Sequence[Path]) -> bool:
        return self.is_admissible(path) and not self.is_weakly_admissible(path)


@dataclass(frozen=True)
class PathSystem:
    """Sequence of admissible digraph paths; nodes are canonical component tuples"""
    paths: Tuple[Tuple[Path, ...], ...] = ()

    def visited(self) -> FrozenSet[Path]:
        return frozenset(node for path in self.paths for node in path)

    def order_vector(self) -> Tuple[int, ...]:
        return tuple(len(path) for path in self.paths)


@dataclass(frozen=True)
class RewireResult:
    factor: List[Path]
    i0: int
    p: int
    merged: Optional[Path]


def _check_system(dg: FactorDigraph, system: PathSystem):
    """Raise ValueError unless every path is admissible, unvisited before its last node, and ends on a visited or order-3 T2-free node"""
    c13 = set(dg.order3_without_t2())
    seen = set()
    for index, path in enumerate(system.paths):
        if any(node not in dg.succ for node in path):
            raise ValueError(f"path {index} uses a node that is not a component of the factor")
        if not dg.is_admissible(path):
            raise ValueError(f"path {index} is not admissible")
        if any(node in seen for node in path[:-1]):
            raise ValueError(f"path {index} revisits a node before its last position")
        if path[-1] not in c13 and path[-1] not in seen:
            raise ValueError(f"path {index} ends outside the order-3 T2-free class and the visited set")
        if index < len(system.paths) - 1 and not dg.is_weakly_admissible(path):
            raise ValueError(f"path {index} is strongly admissible but not last")
        seen.update(path)


def _extend_system(dg: FactorDigraph, paths: List[Tuple[Path, ...]]) -> Optional[Tuple[Path, ...]]:
    """
    One admissible path whose nodes before the last avoid `paths`, or None

    Interior candidates are grown backwards from the targets (visited nodes
    plus order-3 T2-free components) in rounds; the first node is the least
    eligible unvisited component with an arc into anything reached.
    """
    visited = {node for path in paths for node in path}
    targets = visited | set(dg.order3_without_t2())
    reached = set(targets)
    next_hop: Dict[Path, Path] = {}
    pool = [n for n in dg.nodes if dg.interior_eligible(n) and n not in targets]

    grown = True
    while grown:
        layer = []
        for node in pool:
            if node in reached:
                continue
            hop = next((b for b in dg.succ[node] if b in reached), None)
            if hop is not None:
                layer.append((node, hop))
        for node, hop in layer:
            next_hop[node] = hop
            reached.add(node)
        grown = bool(layer)

    for node in dg.nodes:
        if node in visited or not dg.first_eligible(node):
            continue
        hop = next((b for b in dg.succ[node] if b in reached), None)
        if hop is None:
            continue
        path = [node]
        current = hop
        while current not in targets:
            path.append(current)
            current = next_hop[current]
        path.append(current)
        return tuple(path)
    return None


def find_complete_system(inst: BipartiteInstance, factor: Iterable[Sequence[int]],
                         seed: Optional[PathSystem] = None,
                         digraph: Optional[FactorDigraph] = None) -> PathSystem:
    """
    Extend `seed` greedily until its last path is strongly admissible

    Raises:
        ValueError: If the factor has no order-3 T2-free component or the seed is invalid
        EngineStuckError: If no admissible extension exists (hypothesis violated)
    """
    dg = digraph or FactorDigraph(inst, factor)
    if not dg.order3_without_t2():
        raise ValueError("Path systems need an order-3 component avoiding T2")
    seed = seed or PathSystem()
    _check_system(dg, seed)

    paths = list(seed.paths)
    while not (paths and dg.is_strongly_admissible(paths[-1])):
        extension = _extend_system(dg, paths)
        if extension is None:
            raise EngineStuckError(f"No admissible extension after {len(paths)} paths")
        logger.debug(f"System path {len(paths) + 1}: {[list(n) for n in extension]}")
        paths.append(extension)
    return PathSystem(tuple(paths))


def extract_chain(system: PathSystem, digraph: FactorDigraph) -> List[Path]:
    """
    Directed path B_1..B_p inside the union of the system's paths, from the
    first node of the last path to an order-3 T2-free component
    """
    if not system.paths:
        raise ValueError("Empty path system has no chain")
    c13 = set(digraph.order3_without_t2())
    first_seen: Dict[Path, Tuple[int, int]] = {}
    for k, path in enumerate(system.paths):
        for position, node in enumerate(path):
            first_seen.setdefault(node, (k, position))

    chain: List[Path] = []
    k, position = len(system.paths) - 1, 0
    while True:
        path = system.paths[k]
        chain.extend(path[position:-1])
        last = path[-1]
        if last in c13:
            chain.append(last)
            return chain
        k_next, position = first_seen[last]
        if k_next >= k:
            raise MalformedChainError(f"last node of path {k} was not visited by an earlier path")
        k = k_next


def _orient(node: Path, valid) -> Path:
    options = [o for o in (node, node[::-1]) if valid(o)]
    if not options:
        return None
    return min(options)


def rewire(inst: BipartiteInstance, factor: Iterable[Sequence[int]], chain: Sequence[Path],
           digraph: Optional[FactorDigraph] = None) -> RewireResult:
    """
    Rewire the chain B_1..B_p into the pieces B'_1..B'_{i0} (and B''_{i0})

    Orientation rules, with s_i / t_i the positions of sigma(B_i B_i+1) and
    tau(B_i-1 B_i) inside B_i:
        B_1, q_1 odd           s_1 >= (q_1+1)/2
        B_1, q_1 even          s_1 odd
        B_1 order 7 with T2    v_1,1 or v_1,3 in T2 when s_1 = 4
        middle components      t_i < s_i
        B_p                    t_p = q_p = 3

    Returns:
        RewireResult; when i0 = p the number of order-3 T2-free components drops,
        otherwise it is unchanged and `merged` is B''_{i0}

    Raises:
        MalformedChainError: Naming the rule or property the chain violates
    """
    dg = digraph or FactorDigraph(inst, factor)
    chain = [canonical(node) for node in chain]
    p = len(chain)
    if p < 2:
        raise MalformedChainError("chain needs at least two components")
    if len(set(chain)) != p or any(node not in dg.succ for node in chain):
        raise MalformedChainError("chain components must be distinct components of the factor")
    for a, b in zip(chain, chain[1:]):
        if not dg.has_arc(a, b):
            raise MalformedChainError(f"no arc {list(a)} -> {list(b)}")
    if dg.cls(chain[-1]) != (3, 1):
        raise MalformedChainError("B_p is not an order-3 component avoiding T2")

    sig = [dg.sigma(chain[i], chain[i + 1]) for i in range(p - 1)]
    tau = [None] + [dg.tau(chain[i - 1], chain[i]) for i in range(1, p)]

    def first_ok(seq):
        q = len(seq)
        s1 = seq.index(sig[0]) + 1
        if q % 2 == 1 and 2 * s1 < q + 1:
            return False
        if dg.cls(chain[0]) == (7, 2) and s1 == 4 and not (inst.is_t2(seq[0]) or inst.is_t2(seq[2])):
            return False
        if q % 2 == 0 and s1 % 2 == 0:
            return False
        return True

    oriented = [_orient(chain[0], first_ok)]
    if oriented[0] is None:
        raise MalformedChainError("no orientation of B_1 puts sigma in an allowed position")
    for i in range(1, p - 1):
        seq = _orient(chain[i], lambda o, i=i: o.index(tau[i]) < o.index(sig[i]))
        if seq is None:
            raise MalformedChainError(f"no orientation of B_{i + 1} puts tau before sigma")
        oriented.append(seq)
    last = _orient(chain[-1], lambda o: o.index(tau[-1]) == len(o) - 1)
    if last is None:
        raise MalformedChainError("tau does not hit an end of B_p")
    oriented.append(last)

    # 1-based positions
    s = [oriented[i].index(sig[i]) + 1 for i in range(p - 1)]
    t = [None] + [oriented[i].index(tau[i]) + 1 for i in range(1, p)]

    i0 = next(i for i in range(2, p + 1) if i == p or t[i - 1] == 1)
    for i in range(2, i0):
        if t[i - 1] != s[i - 1] - 1:
            raise MalformedChainError(f"B_{i} has t = {t[i - 1]}, s = {s[i - 1]}; expected t = s - 1")

    pieces = []
    head = list(oriented[0][:s[0] - 1])
    if head:
        pieces.append(head)
    for i in range(2, i0 + 1):
        prev, cur = oriented[i - 2], oriented[i - 1]
        piece = list(reversed(prev[s[i - 2] - 1:])) + list(reversed(cur[:t[i - 1]]))
        pieces.append(piece)

    merged = None
    if i0 < p:
        merged_path = pieces[-1] + list(oriented[i0 - 1][1:])
        pieces[-1] = merged_path
        merged = canonical(merged_path)
    removed = set(chain[:i0])

    new_factor = sort_factor([n for n in dg.nodes if n not in removed] + pieces)
    verdict = validate_central_factor(inst, new_factor, require_t2=False)
    if not verdict.ok:
        raise MalformedChainError(f"rewired factor is invalid: {verdict.diagnostic}")
    before = len(dg.order3_without_t2())
    after = sum(1 for n in new_factor if classify_component(n, inst) == (3, 1))
    expected_drop = 1 if i0 == p else 0
    if before - after != expected_drop:
        raise MalformedChainError(f"order-3 T2-free count went {before} -> {after} with i0 = {i0}, p = {p}")

    logger.debug(f"Rewired chain of {p} (i0 = {i0}): {len(dg.nodes)} -> {len(new_factor)} components")
    return RewireResult(new_factor, i0, p, merged)


class CentralFactorEngine:
    """Builds central factors for one instance; owns its working factor"""

    def __init__(self, inst: BipartiteInstance, budgets: Optional[Budgets] = None,
                 brute_force: Optional[bool] = None, debug_checks: Optional[bool] = None):
        self.logger = logging.getLogger(__name__)
        self.inst = inst
        self.budgets = budgets or ToolkitConfig.budgets()
        self.brute_force = ToolkitConfig.brute_force if brute_force is None else brute_force
        self.debug_checks = ToolkitConfig.debug_checks if debug_checks is None else debug_checks
        self.rewire_steps = 0
        self.absorb_steps = 0

    def require_hypothesis(self):
        report = check_t2_hypothesis(self.inst, self.budgets)
        if not report.holds:
            raise HypothesisViolation(report.detail)

    def spanning(self) -> List[Path]:
        """S-central spanning path-factor from a Hall matching plus layered absorption"""
        inst = self.inst
        S = inst.S
        matching = nx.bipartite.hopcroft_karp_matching(to_networkx(inst.graph), top_nodes=S)
        unmatched = [s for s in S if s not in matching]
        if unmatched:
            raise HypothesisViolation(f"No matching covers S; unmatched S-vertices {unmatched}")
        factor = sort_factor((matching[s], s) for s in S)

        while True:
            covered = mask_of(v for path in factor for v in path)
            uncovered = inst.t_mask & ~covered
            if not uncovered:
                return factor
            factor = self._absorb(factor, uncovered)
            self.absorb_steps += 1

    def _absorb(self, factor: List[Path], uncovered: VertexSet) -> List[Path]:
        """Cover one more T-vertex by splicing a layer chain ending in a non-P3 component"""
        inst = self.inst
        owner = {v: node for node in factor for v in node}
        parent: Dict[Path, Tuple[int, int]] = {}
        frontier = uncovered

        while True:
            layer = []
            for node in factor:
                if node in parent:
                    continue
                for s in sorted(v for v in node if inst.is_s(v)):
                    hits = inst.graph.adj[s] & frontier
                    if hits:
                        parent[node] = (s, (hits & -hits).bit_length() - 1)
                        layer.append(node)
                        break
            if not layer:
                raise EngineStuckError("layer growth ended before reaching a component other than P3")
            target = next((node for node in layer if len(node) != 3), None)
            if target is not None:
                break
            frontier = mask_of(v for node in layer for v in node if not inst.is_s(v))

        links = []
        node = target
        while node is not None:
            s, t = parent[node]
            links.append((node, s, t))
            node = owner.get(t)
        links.reverse()

        pieces = []
        for (node, s, t), (_, _, child_t) in zip(links, links[1:]):
            # P3 member t-s-t: the child's edge enters at child_t, the other end stays
            other = node[2] if node[0] == child_t else node[0]
            pieces.append([t, node[1], other])

        node, s, t = links[-1]
        length = len(node)

        def splice_ok(seq):
            m = seq.index(s) + 1
            return m != 2 if length % 2 == 1 else m % 2 == 1

        seq = _orient(node, splice_ok)
        if seq is None:
            raise EngineStuckError(f"no orientation of {list(node)} admits the splice")
        m = seq.index(s) + 1
        pieces.append([t] + list(seq[m - 1:]))
        if m > 1:
            pieces.append(list(seq[:m - 1]))

        removed = {link[0] for link in links}
        self.logger.debug(f"Absorbed T-vertex {links[0][2]} through a chain of {len(links)} components")
        return sort_factor([n for n in factor if n not in removed] + pieces)

    def solve(self) -> List[Path]:
        """S-central factor whose order-3 components all meet T2"""
        self.require_hypothesis()
        if self.brute_force:
            return self._brute_force()

        factor = self.spanning()
        system = PathSystem()
        start = sum(1 for n in factor if classify_component(n, self.inst) == (3, 1))
        limit = max(1, start) * (len(factor) + 1) ** 2
        previous = None

        while True:
            self._debug_identities(factor)
            dg = FactorDigraph(self.inst, factor)
            c13 = len(dg.order3_without_t2())
            if not c13:
                break
            self.rewire_steps += 1
            if self.rewire_steps > limit:
                raise EngineStuckError(f"rewiring exceeded its safety bound of {limit} steps")

            system = find_complete_system(self.inst, factor, system, dg)
            measure = (c13, system.order_vector())
            if previous is not None and not measure < previous:
                raise EngineStuckError(f"progress measure did not decrease: {previous} -> {measure}")
            previous = measure

            chain = extract_chain(system, dg)
            result = rewire(self.inst, factor, chain, dg)
            if result.i0 == result.p:
                system = PathSystem()
            else:
                hinge = chain[result.i0 - 1]
                k0 = next(k for k, path in enumerate(system.paths) if hinge in path)
                j0 = system.paths[k0].index(hinge)
                system = PathSystem(system.paths[:k0] + ((result.merged,) + system.paths[k0][j0 + 1:],))
            factor = result.factor

        verdict = validate_central_factor(self.inst, factor)
        if not verdict.ok:
            raise EngineStuckError(f"engine produced an invalid factor: {verdict.diagnostic}")
        self.logger.debug(f"Central factor with {len(factor)} components after "
                          f"{self.absorb_steps} absorptions and {self.rewire_steps} rewirings")
        return factor

    def _debug_identities(self, factor: List[Path]):
        if not self.debug_checks:
            return
        failures = component_identities_hold(self.inst, factor)
        assert not failures, f"weighted component identities fail: {failures}"

    def _brute_force(self) -> List[Path]:
        for paths in iter_path_factors(self.inst.graph):
            if validate_central_factor(self.inst, paths).ok:
                return sort_factor(paths)
        raise EngineStuckError("no central factor exists for this instance")


def s_central_spanning(inst: BipartiteInstance, budgets: Optional[Budgets] = None) -> List[Path]:
    """
    Spanning S-central path-factor (order-3 components may avoid T2)

    Raises:
        HypothesisViolation: If the instance fails the hypotheses
    """
    engine = CentralFactorEngine(inst, budgets)
    engine.require_hypothesis()
    return engine.spanning()


def s_central_t2_factor(inst: BipartiteInstance, budgets: Optional[Budgets] = None,
                        brute_force: Optional[bool] = None, debug_checks: Optional[bool] = None) -> List[Path]:
    """
    Spanning S-central path-factor whose order-3 components all meet T2

    Raises:
        HypothesisViolation: If the instance fails the hypotheses
    """
    return CentralFactorEngine(inst, budgets, brute_force, debug_checks).solve()
