"""
Reduction Module
Constructive {P2, P5}-factor algorithm for graphs satisfying
3c1(G-X) + 2c3(G-X) <= 4|X| + 1 for every X.

Branches per recursion level (recorded in ConstructiveSolver.trace):
    cycle          beta3 >= 6 and G is 2-regular: cut every cycle once, split
    edge_deletion  beta3 >= 6 with a vertex of degree >= 3: recurse on G - e*
    auxiliary      beta3 < 6: take the largest minimising S, solve the other
                   components of G - S recursively, build the weighted bipartite
                   instance on S and the order-1 / order-3 components, run the
                   central factor engine and lift every component back into G
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from src.bipartite_central import (
    BipartiteInstance,
    EngineStuckError,
    HypothesisReport,
    check_t2_hypothesis,
    s_central_t2_factor,
)
from src.config import LIFT_METHODS, Budgets, ToolkitConfig
from src.deficiency import Witness, beta_scaled, check_necessary, check_sufficient
from src.factor_search import (
    PathFactor,
    SearchBudgetExceeded,
    find_factor_exact,
    split_path,
    verify_factor,
)
from src.graph_core import (
    Graph,
    VertexSet,
    component_masks,
    components_after_removal,
    induced_subgraph,
    mask_of,
    popcount,
    relabel_path,
    remove_edge,
    vertices_of,
)

logger = logging.getLogger(__name__)

FACTOR_ORDERS = (2, 5)


class AuxiliaryCertificateError(ValueError):
    """The chosen S does not give a valid auxiliary bipartite instance"""


class LiftError(RuntimeError):
    """A central-factor component could not be lifted back into G"""


@dataclass(frozen=True)
class AuxiliaryMap:
    """
    Bipartite instance on S plus one token per order-1 / order-3 component of G - S.

    Instance labels: S vertices first (ascending), then T1 tokens, then T2
    tokens, each group ordered by the minimum vertex of its component.
    """
    instance: BipartiteInstance
    s_vertices: Tuple[int, ...]
    tokens: Tuple[VertexSet, ...]
    certificate: HypothesisReport

    def component_of(self, label: int) -> VertexSet:
        """G-vertices behind an instance label (a singleton for S labels)"""
        if label < len(self.s_vertices):
            return 1 << self.s_vertices[label]
        return self.tokens[label - len(self.s_vertices)]

    @property
    def token_to_component(self) -> Dict[int, List[int]]:
        offset = len(self.s_vertices)
        return {offset + i: vertices_of(mask) for i, mask in enumerate(self.tokens)}


def _is_triangle(G: Graph, mask: VertexSet) -> bool:
    a, b, c = vertices_of(mask)
    return G.has_edge(a, b) and G.has_edge(b, c) and G.has_edge(a, c)


def build_auxiliary(G: Graph, S: VertexSet, budgets: Optional[Budgets] = None,
                    require_certificate: bool = True) -> AuxiliaryMap:
    """
    Construct the auxiliary bipartite instance for a vertex set S

    An S-vertex is joined to a token iff it has a neighbor in the token's
    component.

    Raises:
        AuxiliaryCertificateError: If an order-3 component of G - S is not a
            triangle, or (with require_certificate) the instance fails the
            central-factor hypotheses
    """
    profile = components_after_removal(G, S)
    singles = profile.of_order(1)
    triples = profile.of_order(3)
    for comp in triples:
        if not _is_triangle(G, comp):
            raise AuxiliaryCertificateError(f"Order-3 component {vertices_of(comp)} of G - S is not a triangle")

    s_vertices = tuple(vertices_of(S))
    tokens = tuple(singles + triples)
    offset = len(s_vertices)
    edges = [(i, offset + j)
             for i, s in enumerate(s_vertices)
             for j, comp in enumerate(tokens)
             if G.adj[s] & comp]
    t1 = range(offset, offset + len(singles))
    t2 = range(offset + len(singles), offset + len(tokens))
    instance = BipartiteInstance.build(range(offset), t1, t2, edges)

    certificate = check_t2_hypothesis(instance, budgets)
    if require_certificate and not certificate.holds:
        raise AuxiliaryCertificateError(f"Auxiliary instance for S = {list(s_vertices)} fails: {certificate.detail}")
    return AuxiliaryMap(instance, s_vertices, tokens, certificate)


@dataclass(frozen=True)
class LiftPiece:
    """
    One central-factor component translated back to G.

    path lists the G-vertex sets along the component (S singletons, T1
    singletons, T2 triangles); graph is G restricted to their union with every
    edge inside the S-part removed.
    """
    path: Tuple[VertexSet, ...]
    kinds: Tuple[str, ...]
    u_mask: VertexSet
    graph: Graph

    @classmethod
    def from_component(cls, G: Graph, aux: AuxiliaryMap, A) -> "LiftPiece":
        inst = aux.instance
        path = tuple(aux.component_of(label) for label in A)
        kinds = tuple('s' if inst.is_s(label) else 't2' if inst.is_t2(label) else 't1' for label in A)
        u_mask = mask_of(aux.s_vertices[label] for label in A if inst.is_s(label))
        vertex_mask = 0
        for mask in path:
            vertex_mask |= mask
        edges = [(u, v) for u, v in G.edges()
                 if vertex_mask >> u & 1 and vertex_mask >> v & 1 and not (u_mask >> u & 1 and u_mask >> v & 1)]
        return cls(path, kinds, u_mask, Graph.from_edges(G.n, edges))

    @property
    def vertex_mask(self) -> VertexSet:
        result = 0
        for mask in self.path:
            result |= mask
        return result

    @property
    def t1_mask(self) -> VertexSet:
        return mask_of(v for mask, kind in zip(self.path, self.kinds) if kind == 't1' for v in vertices_of(mask))

    @property
    def triangles(self) -> List[VertexSet]:
        return [mask for mask, kind in zip(self.path, self.kinds) if kind == 't2']


def _walk_lift(piece: LiftPiece) -> Tuple[List[int], List[List[int]]]:
    """Deterministic Q_A plus the leftover pairs of partially used triangles"""
    graph = piece.graph
    q: List[int] = []
    leftovers: List[List[int]] = []
    last = len(piece.path) - 1

    for j, (mask, kind) in enumerate(zip(piece.path, piece.kinds)):
        if kind != 't2':
            q.extend(vertices_of(mask))
            continue
        triangle = vertices_of(mask)
        flank = [piece.path[i] for i in (j - 1, j + 1) if 0 <= i <= last]
        if len(flank) == 2:
            entries = vertices_of(graph.neighborhood(flank[0]) & mask)
            exits = vertices_of(graph.neighborhood(flank[1]) & mask)
            pair = next(((a, b) for a in entries for b in exits if a != b), None)
            if pair is not None:
                a, b = pair
                middle = next(v for v in triangle if v not in pair)
                q.extend([a, middle, b])
            else:
                if not entries or entries != exits:
                    raise LiftError(f"No entry vertex for triangle {triangle} between its S-neighbors")
                a = entries[0]
                q.append(a)
                leftovers.append([v for v in triangle if v != a])
            continue
        if not flank:
            raise LiftError(f"Triangle token {triangle} forms a component on its own")
        hooks = vertices_of(graph.neighborhood(flank[0]) & mask)
        if not hooks:
            raise LiftError(f"Triangle {triangle} has no neighbor of its S-vertex")
        b = hooks[0]
        ordered = [v for v in triangle if v != b] + [b]
        q.extend(ordered if j == 0 else ordered[::-1])
    return q, leftovers


def _exhaustive_lift(piece: LiftPiece) -> Optional[Tuple[List[int], List[List[int]]]]:
    """
    Longest path Q in the lift graph covering the S- and T1-vertices and
    meeting every triangle in one or three vertices; ties go to the least
    canonical vertex sequence
    """
    graph = piece.graph
    allowed = piece.vertex_mask
    required = piece.u_mask | piece.t1_mask
    triangles = piece.triangles
    best: Optional[Tuple[int, ...]] = None

    def acceptable(path: Tuple[int, ...], used: VertexSet) -> bool:
        if len(path) < 2 or len(path) == 3 or required & ~used:
            return False
        return all(popcount(used & tri) in (1, 3) for tri in triangles)

    def extend(path: Tuple[int, ...], used: VertexSet):
        nonlocal best
        if acceptable(path, used):
            candidate = min(path, path[::-1])
            if best is None or (len(candidate), tuple(-v for v in candidate)) > (len(best), tuple(-v for v in best)):
                best = candidate
        for u in vertices_of(graph.adj[path[-1]] & allowed & ~used):
            extend(path + (u,), used | (1 << u))

    for start in vertices_of(allowed):
        extend((start,), 1 << start)

    if best is None:
        return None
    used = mask_of(best)
    leftovers = [vertices_of(tri & ~used) for tri in triangles if popcount(tri & used) == 1]
    return list(best), leftovers


def lift_component(G: Graph, piece: LiftPiece, method: Optional[str] = None) -> PathFactor:
    """
    {P2, P5}-factor of the lift graph of one central-factor component

    Args:
        G: Host graph
        piece: The component translated to G
        method: "walk" (default from config) or "exhaustive"; exhaustive falls
            back to the walk above reduction.exhaustive_lift_max_n vertices

    Returns:
        Paths of orders 2 and 5 covering the piece

    Raises:
        LiftError: If no valid Q exists (impossible for a valid central factor)
    """
    method = method or ToolkitConfig.lift_method
    if method not in LIFT_METHODS:
        raise ValueError(f"Lift method '{method}' not supported. Available methods: {', '.join(LIFT_METHODS)}")

    lifted = None
    if method == "exhaustive":
        if popcount(piece.vertex_mask) <= ToolkitConfig.exhaustive_lift_max_n:
            lifted = _exhaustive_lift(piece)
            if lifted is None:
                raise LiftError(f"No admissible path in lift graph on {vertices_of(piece.vertex_mask)}")
        else:
            logger.debug(f"Lift graph has {popcount(piece.vertex_mask)} vertices; using the walk")
    if lifted is None:
        lifted = _walk_lift(piece)

    q, leftovers = lifted
    if len(q) < 2 or len(q) == 3:
        raise LiftError(f"Lifted path {q} has order {len(q)}")
    paths = split_path(q) + leftovers
    verdict = verify_factor(_restrict(piece), [_compress(piece, p) for p in paths], FACTOR_ORDERS)
    if not verdict.ok:
        raise LiftError(f"Lift of {vertices_of(piece.vertex_mask)} is invalid: {verdict.diagnostic}")
    return paths


def _restrict(piece: LiftPiece) -> Graph:
    sub, _ = induced_subgraph(piece.graph, piece.vertex_mask)
    return sub


def _compress(piece: LiftPiece, path: List[int]) -> List[int]:
    index = {v: i for i, v in enumerate(vertices_of(piece.vertex_mask))}
    return [index.get(v, -1) for v in path]


class ConstructiveSolver:
    """
    Recursive {P2, P5}-factor construction for graphs satisfying the
    sufficient condition. One solver per request; trace is reset by find_factor.
    """

    def __init__(self, budgets: Optional[Budgets] = None, lift_method: Optional[str] = None, jobs: int = 1):
        self.logger = logging.getLogger(__name__)
        self.budgets = budgets or ToolkitConfig.budgets()
        self.lift_method = lift_method or ToolkitConfig.lift_method
        self.jobs = jobs
        self.trace: List[Dict] = []

    def find_factor(self, G: Graph) -> Union[PathFactor, Witness]:
        """
        Returns:
            A verified {2,5} path-factor, or the Witness violating the condition

        Raises:
            SearchBudgetExceeded / SweepBudgetExceeded: On budget overruns
        """
        if G.n > self.budgets.max_n:
            raise SearchBudgetExceeded(f"Graph has {G.n} vertices, budget max_n is {self.budgets.max_n}")
        self.trace = []
        report = check_sufficient(G, self.budgets, self.jobs)
        if not report.holds:
            self.logger.debug(f"Sufficient condition fails at X = {report.worst.vertices}")
            return report.witness

        factor = sorted(self._solve(G, 0), key=min)
        verdict = verify_factor(G, factor, FACTOR_ORDERS)
        if not verdict.ok:
            raise LiftError(f"Constructed factor is invalid: {verdict.diagnostic}")
        return factor

    def _record(self, depth: int, G: Graph, branch: str, beta3: Optional[int]):
        self.trace.append({'depth': depth, 'n': G.n, 'edges': G.edge_count, 'branch': branch, 'beta3': beta3})

    def _solve(self, G: Graph, depth: int) -> PathFactor:
        if G.n == 0:
            return []
        beta = beta_scaled(G, self.budgets, self.jobs)
        if beta.beta3 < 0:
            raise EngineStuckError(f"Sufficient condition lost at depth {depth} (beta3 = {beta.beta3})")

        if beta.beta3 >= 6:
            heavy = next((v for v in range(G.n) if G.degree(v) >= 3), None)
            if heavy is None:
                self._record(depth, G, 'cycle', beta.beta3)
                return self._cut_cycles(G)
            y0 = G.neighbors(heavy)[0]
            self._record(depth, G, 'edge_deletion', beta.beta3)
            return self._solve(remove_edge(G, heavy, y0), depth + 1)

        self._record(depth, G, 'auxiliary', beta.beta3)
        S = beta.argmax_set
        factor: PathFactor = []
        for comp in components_after_removal(G, S).components:
            if popcount(comp) in (1, 3):
                continue
            sub, labels = induced_subgraph(G, comp)
            factor.extend(relabel_path(p, labels) for p in self._solve(sub, depth + 1))

        aux = build_auxiliary(G, S, self.budgets)
        central = s_central_t2_factor(aux.instance, self.budgets)
        for A in central:
            factor.extend(lift_component(G, LiftPiece.from_component(G, aux, A), self.lift_method))
        return factor

    def _cut_cycles(self, G: Graph) -> PathFactor:
        """Delete the least edge of every cycle component and split the remaining path"""
        factor = []
        for comp in component_masks(G):
            start = (comp & -comp).bit_length() - 1
            first, other = G.neighbors(start)
            path = [start]
            prev, current = start, other
            while current != first:
                path.append(current)
                prev, current = current, next(u for u in G.neighbors(current) if u != prev)
            path.append(first)
            factor.extend(split_path(path))
        return factor


def find_factor(G: Graph, budgets: Optional[Budgets] = None, lift_method: Optional[str] = None,
                jobs: int = 1) -> Union[PathFactor, Witness]:
    """{P2, P5}-factor of G when the sufficient condition holds, else its Witness"""
    return ConstructiveSolver(budgets, lift_method, jobs).find_factor(G)


@dataclass
class CrossValidation:
    sufficient: bool
    necessary: bool
    constructive: Optional[bool]
    exact: bool
    flags: List[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.flags

    def to_dict(self) -> Dict:
        return {
            'sufficient': self.sufficient,
            'necessary': self.necessary,
            'constructive': self.constructive,
            'exact': self.exact,
            'consistent': self.consistent,
            'flags': list(self.flags),
        }


def cross_validate(G: Graph, budgets: Optional[Budgets] = None) -> CrossValidation:
    """
    Compare the constructive solver, the exact solver and both conditions on G

    Flags every implication that fails:
        sufficient  =>  constructive and exact succeed
        constructive succeeds  =>  exact succeeds
        exact succeeds  =>  necessary holds
    """
    sufficient = check_sufficient(G, budgets).holds
    necessary = check_necessary(G, budgets).holds
    exact = find_factor_exact(G, FACTOR_ORDERS, budgets) is not None

    constructive = None
    flags = []
    if sufficient:
        result = find_factor(G, budgets)
        constructive = not isinstance(result, Witness)
        if not constructive:
            flags.append("condition holds but the constructive solver returned a witness")
        if not exact:
            flags.append("condition holds but the exact solver found no factor")
    if constructive and not exact:
        flags.append("constructive factor found but the exact solver found none")
    if exact and not necessary:
        flags.append("factor exists but the necessary condition fails")
    return CrossValidation(sufficient, necessary, constructive, exact, flags)
