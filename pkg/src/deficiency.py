"""
Deficiency Module
Exact integer checkers for component-deficiency conditions of the form

    sum_i w_i * c_i(G - X)  <=  x_coef * |X| + constant      for all X ⊆ V(G)

together with the scaled beta value used by the constructive algorithm.

Scaling conventions (all arithmetic is on integers):
    sufficient condition   3c1 + 2c3 <= 4|X| + 1
    necessary condition    2c1 + c3  <= 3|X|
    isolated vertices      c1        <= 2|X|
    beta3 = 3 * beta = min over X leaving an order-1 or order-3 component
            of 4|X| + 1 - 3c1 - 2c3
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import pypeln as pl

from src.config import Budgets, ToolkitConfig
from src.graph_core import Graph, VertexSet, component_sizes, components_after_removal, mask_of, popcount, vertices_of

logger = logging.getLogger(__name__)

# Shards are formed by fixing this many high bits of X
SHARD_BITS = 6


class SweepBudgetExceeded(RuntimeError):
    """The 2^n subset sweep would exceed the configured budget"""


@dataclass(frozen=True)
class DeficiencyBound:
    """Integer linear bound: sum of weights[i] * c_i  <=  x_coef * |X| + constant"""
    name: str
    weights: Tuple[Tuple[int, int], ...]
    x_coef: int
    constant: int

    @classmethod
    def make(cls, name: str, weights: Mapping[int, int], x_coef: int, constant: int) -> "DeficiencyBound":
        return cls(name, tuple(sorted((int(o), int(w)) for o, w in weights.items() if w)), int(x_coef), int(constant))

    def lhs(self, sizes: Iterable[int]) -> int:
        weight = dict(self.weights)
        return sum(weight.get(s, 0) for s in sizes)

    def rhs(self, x_size: int) -> int:
        return self.x_coef * x_size + self.constant

    def slack(self, G: Graph, X: Union[VertexSet, Iterable[int]]) -> int:
        """lhs - rhs at a single X; positive means the bound fails there"""
        mask = X if isinstance(X, int) else mask_of(X)
        profile = components_after_removal(G, mask)
        return self.lhs(popcount(c) for c in profile.components) - self.rhs(popcount(mask))


THEOREM1 = DeficiencyBound.make("sufficient", {1: 3, 3: 2}, 4, 1)
NECESSARY = DeficiencyBound.make("necessary", {1: 2, 3: 1}, 3, 0)
THEOREM_A = DeficiencyBound.make("theorem_a", {1: 1}, 2, 0)
TIGHT_HN = DeficiencyBound.make("tight_hn", {1: 3, 3: 2}, 4, 2)


def odd_orders(k: int) -> List[int]:
    """Odd component orders 1, 3, ..., 2k-1"""
    return [2 * i + 1 for i in range(k)]


def tight_hprime_bound(k: int) -> DeficiencyBound:
    """(8k+3) * sum of odd c_i <= (4k+6)|X| + (2k+3)"""
    return DeficiencyBound.make(f"tight_hprime_k{k}", {o: 8 * k + 3 for o in odd_orders(k)}, 4 * k + 6, 2 * k + 3)


def conjecture_bound(k: int) -> DeficiencyBound:
    """
    Hypothesis for {P2, P2k+1}-factors: sum of c_i over odd i < 2k at most a_k |X|

    a_1 = 2 and a_2 = 4/3 are the known constants; k >= 3 uses (4k+6)/(8k+3).
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k == 1:
        return DeficiencyBound.make("conjecture_k1", {1: 1}, 2, 0)
    if k == 2:
        return DeficiencyBound.make("conjecture_k2", {1: 3, 3: 3}, 4, 0)
    return DeficiencyBound.make(f"conjecture_k{k}", {o: 8 * k + 3 for o in odd_orders(k)}, 4 * k + 6, 0)


@dataclass(frozen=True)
class Witness:
    """A set X with the two sides of a bound evaluated at X"""
    X: VertexSet
    lhs: int
    rhs: int
    condition: str

    @property
    def slack(self) -> int:
        return self.lhs - self.rhs

    @property
    def vertices(self) -> List[int]:
        return vertices_of(self.X)

    def to_dict(self) -> Dict:
        return {'condition': self.condition, 'X': self.vertices, 'lhs': self.lhs, 'rhs': self.rhs}


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of a full subset sweep; `worst` maximises lhs - rhs"""
    condition: str
    worst: Witness
    subsets_checked: int

    @property
    def holds(self) -> bool:
        return self.worst.slack <= 0

    @property
    def max_slack(self) -> int:
        return self.worst.slack

    @property
    def witness(self) -> Optional[Witness]:
        return None if self.holds else self.worst

    def to_dict(self) -> Dict:
        return {
            'condition': self.condition,
            'holds': self.holds,
            'max_slack': self.max_slack,
            'worst': self.worst.to_dict(),
        }


@dataclass(frozen=True)
class BetaResult:
    beta3: Optional[int]
    argmax_set: Optional[VertexSet]
    feasible: bool

    def to_dict(self) -> Dict:
        return {
            'beta3': self.beta3,
            'argmax_set': vertices_of(self.argmax_set) if self.argmax_set is not None else None,
            'feasible': self.feasible,
        }


@dataclass(frozen=True)
class _ShardTask:
    G: Graph
    bound: DeficiencyBound
    high: int
    shard_bits: int
    restrict_small: bool = False
    prefer_large: bool = False


def _sweep_shard(task: _ShardTask) -> Tuple[Optional[Tuple[int, int, int]], int]:
    """
    Best subset inside one shard

    Returns:
        (key, checked) where key = (slack, size_key, -mask) is maximised;
        size_key is -|X| normally and +|X| when larger sets win ties
    """
    G, bound = task.G, task.bound
    low_bits = G.n - task.shard_bits
    base = task.high << low_bits
    weight = dict(bound.weights)
    best = None
    checked = 0
    for low in range(1 << low_bits):
        X = base | low
        sizes = component_sizes(G, X)
        checked += 1
        if task.restrict_small and not any(s in (1, 3) for s in sizes):
            continue
        x_size = popcount(X)
        slack = sum(weight.get(s, 0) for s in sizes) - bound.x_coef * x_size - bound.constant
        key = (slack, x_size if task.prefer_large else -x_size, -X)
        if best is None or key > best:
            best = key
    return best, checked


def _run_sweep(G: Graph, bound: DeficiencyBound, budgets: Optional[Budgets], jobs: int,
               restrict_small: bool = False, prefer_large: bool = False) -> Tuple[Optional[Tuple[int, int, int]], int]:
    budgets = budgets or ToolkitConfig.budgets()
    total = 1 << G.n
    if total > budgets.max_subsets:
        raise SweepBudgetExceeded(f"Sweep over 2^{G.n} subsets exceeds budget of {budgets.max_subsets}")

    shard_bits = min(SHARD_BITS, G.n) if jobs > 1 else 0
    tasks = [_ShardTask(G, bound, high, shard_bits, restrict_small, prefer_large) for high in range(1 << shard_bits)]

    if jobs > 1 and len(tasks) > 1:
        logger.debug(f"Sharding 2^{G.n} subsets of {bound.name} into {len(tasks)} shards over {jobs} workers")
        results = list(pl.process.map(_sweep_shard, tasks, workers=jobs, maxsize=2 * jobs))
    else:
        results = [_sweep_shard(t) for t in tasks]

    best = None
    checked = 0
    for key, count in results:
        checked += count
        if key is not None and (best is None or key > best):
            best = key
    return best, checked


def sweep_bound(G: Graph, bound: DeficiencyBound, budgets: Optional[Budgets] = None, jobs: int = 1) -> ConditionReport:
    """
    Evaluate a deficiency bound on every X ⊆ V(G)

    The reported set maximises lhs - rhs; ties go to the smaller |X|, then the
    smaller mask, which is the first maximum in (popcount, mask) order. The
    result does not depend on `jobs`.

    Raises:
        SweepBudgetExceeded: If 2^n exceeds budgets.max_subsets
    """
    best, checked = _run_sweep(G, bound, budgets, jobs)
    slack, _, neg_mask = best
    X = -neg_mask
    x_size = popcount(X)
    rhs = bound.rhs(x_size)
    return ConditionReport(bound.name, Witness(X, slack + rhs, rhs, bound.name), checked)


def deficit(G: Graph, X: Union[VertexSet, Iterable[int]]) -> int:
    """D(G, X) = 3c1(G-X) + 2c3(G-X) - 4|X|"""
    profile = components_after_removal(G, X)
    mask = X if isinstance(X, int) else mask_of(X)
    return 3 * profile.count(1) + 2 * profile.count(3) - 4 * popcount(mask)


def check_sufficient(G: Graph, budgets: Optional[Budgets] = None, jobs: int = 1) -> ConditionReport:
    """3c1 + 2c3 <= 4|X| + 1 for all X (equivalently D(G,X) <= 1)"""
    return sweep_bound(G, THEOREM1, budgets, jobs)


def check_necessary(G: Graph, budgets: Optional[Budgets] = None, jobs: int = 1) -> ConditionReport:
    """2c1 + c3 <= 3|X| for all X; holds whenever G has a {P2,P5}-factor"""
    return sweep_bound(G, NECESSARY, budgets, jobs)


def check_theorem_a(G: Graph, budgets: Optional[Budgets] = None, jobs: int = 1) -> ConditionReport:
    """c1 <= 2|X| for all X; holds iff G has a path-factor"""
    return sweep_bound(G, THEOREM_A, budgets, jobs)


def check_conjecture_hypothesis(G: Graph, k: int, budgets: Optional[Budgets] = None, jobs: int = 1) -> ConditionReport:
    return sweep_bound(G, conjecture_bound(k), budgets, jobs)


def check_family_bound(G: Graph, a_num: int, a_den: int, b_num: int, b_den: int,
                       weights: Mapping[int, int], budgets: Optional[Budgets] = None,
                       jobs: int = 1) -> ConditionReport:
    """
    Generic weighted bound with rational coefficients

    Checks (sum_i weights[i] * c_i) / L <= (a_num/a_den)|X| + b_num/b_den with
    L = lcm(a_den, b_den), i.e. the weights are numerators over the common
    denominator of the bound. Compared after clearing L, so exact.

    Returns:
        ConditionReport whose max_slack is the largest cleared lhs - rhs
    """
    if a_den <= 0 or b_den <= 0:
        raise ValueError(f"Denominators must be positive, got {a_den} and {b_den}")
    common = a_den * b_den // gcd(a_den, b_den)
    bound = DeficiencyBound.make(
        f"family({a_num}/{a_den}, {b_num}/{b_den})",
        weights,
        a_num * (common // a_den),
        b_num * (common // b_den),
    )
    return sweep_bound(G, bound, budgets, jobs)


def beta_scaled(G: Graph, budgets: Optional[Budgets] = None, jobs: int = 1) -> BetaResult:
    """
    beta3 = min over X with c1(G-X) + c3(G-X) >= 1 of 4|X| + 1 - 3c1 - 2c3

    argmax_set attains beta3 with maximum |X|, then least mask.
    feasible is False only for the empty graph.
    """
    if G.n == 0:
        return BetaResult(None, None, False)
    best, _ = _run_sweep(G, THEOREM1, budgets, jobs, restrict_small=True, prefer_large=True)
    if best is None:
        return BetaResult(None, None, False)
    slack, _, neg_mask = best
    return BetaResult(-slack, -neg_mask, True)
