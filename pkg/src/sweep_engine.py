"""
Sweep Engine
Evaluates graph6 streams record by record: condition checks, solving,
theorem assertions and conjecture candidate search. With jobs > 1 the
records are evaluated on a pypeln process pool and re-ordered to input order.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, Generator, Iterable, Iterator, List, Optional, Tuple

import pypeln as pl

from src.config import Budgets, ToolkitConfig
from src.deficiency import (
    SweepBudgetExceeded,
    Witness,
    beta_scaled,
    check_conjecture_hypothesis,
    check_necessary,
    check_sufficient,
    check_theorem_a,
)
from src.bipartite_central import EngineStuckError, HypothesisViolation, MalformedChainError
from src.factor_search import IndecomposableOrderError, SearchBudgetExceeded, find_factor_exact, verify_factor
from src.graph_core import Graph, GraphFormatError, parse_graph6, read_graph6_stream, to_graph6
from src.reduction import FACTOR_ORDERS, AuxiliaryCertificateError, ConstructiveSolver, LiftError

logger = logging.getLogger(__name__)

ASSERTIONS = ("theorem1", "prop-necessary", "factA")
MODES = ("check", "solve", "sweep", "conjecture")
METHODS = ("exact", "constructive")

BUDGET_ERRORS = (SweepBudgetExceeded, SearchBudgetExceeded)

# Per-graph failures of the constructive machinery
CONSTRUCTIVE_ERRORS = (LiftError, EngineStuckError, AuxiliaryCertificateError, MalformedChainError,
                       HypothesisViolation, IndecomposableOrderError)
GRAPH_ERRORS = CONSTRUCTIVE_ERRORS + (AssertionError,)


@dataclass(frozen=True)
class StreamTask:
    """One graph plus everything a worker needs; picklable"""
    line_no: int
    graph6: str
    mode: str
    budgets: Budgets
    orders: Tuple[int, ...] = FACTOR_ORDERS
    method: str = "exact"
    assertion: str = "theorem1"
    k: int = 3
    timings: bool = False


def check_record(G: Graph, budgets: Budgets, jobs: int = 1) -> Dict:
    """Sufficient, necessary and isolated-vertex conditions plus beta3"""
    sufficient = check_sufficient(G, budgets, jobs)
    return {
        'sufficient': sufficient.to_dict(),
        'necessary': check_necessary(G, budgets, jobs).to_dict(),
        'theorem_a': check_theorem_a(G, budgets, jobs).to_dict(),
        'beta3': beta_scaled(G, budgets, jobs).beta3,
        'holds': sufficient.holds,
    }


def solve_record(G: Graph, orders: Tuple[int, ...], method: str, budgets: Budgets, jobs: int = 1) -> Dict:
    """
    Solve for a path-factor with the given orders

    Raises:
        ValueError: If the constructive method is asked for orders other than 2,5
    """
    if method not in METHODS:
        raise ValueError(f"Method '{method}' not supported. Available methods: {', '.join(METHODS)}")
    record = {'orders': list(orders), 'method': method}
    if method == "constructive":
        if tuple(sorted(orders)) != FACTOR_ORDERS:
            raise ValueError(f"The constructive method only builds {{2,5}}-factors, got orders {list(orders)}")
        solver = ConstructiveSolver(budgets, jobs=jobs)
        result = solver.find_factor(G)
        record['trace'] = solver.trace
        if isinstance(result, Witness):
            record.update(found=False, factor=None, witness=result.to_dict())
            return record
        factor = result
    else:
        factor = find_factor_exact(G, orders, budgets)
        if factor is None:
            record.update(found=False, factor=None)
            return record
    verdict = verify_factor(G, factor, orders)
    assert verdict.ok, f"refusing to emit an unverified factor: {verdict.diagnostic}"
    record.update(found=True, factor=sorted(factor, key=min))
    return record


def assertion_record(G: Graph, assertion: str, budgets: Budgets) -> Dict:
    """
    Check one universally quantified statement on G

        theorem1        sufficient condition  =>  exact and constructive {2,5}-factors
        prop-necessary  exact {2,5}-factor    =>  necessary condition
        factA           isolated-vertex condition  <=>  exact {2,3}-factor
    """
    if assertion == "theorem1":
        sufficient = check_sufficient(G, budgets)
        if not sufficient.holds:
            return {'assertion': assertion, 'applies': False, 'passed': True}
        exact = find_factor_exact(G, FACTOR_ORDERS, budgets)
        record = {'assertion': assertion, 'applies': True, 'exact': exact is not None}
        try:
            # find_factor verifies what it returns
            constructive_ok = not isinstance(ConstructiveSolver(budgets).find_factor(G), Witness)
        except CONSTRUCTIVE_ERRORS as e:
            constructive_ok = False
            record['constructive_error'] = f"{type(e).__name__}: {e}"
        record.update(passed=exact is not None and constructive_ok, constructive=constructive_ok)
        return record
    if assertion == "prop-necessary":
        exact = find_factor_exact(G, FACTOR_ORDERS, budgets)
        if exact is None:
            return {'assertion': assertion, 'applies': False, 'passed': True}
        necessary = check_necessary(G, budgets)
        return {'assertion': assertion, 'applies': True, 'passed': necessary.holds,
                'necessary': necessary.to_dict()}
    if assertion == "factA":
        condition = check_theorem_a(G, budgets).holds
        exact = find_factor_exact(G, (2, 3), budgets) is not None
        return {'assertion': assertion, 'applies': True, 'passed': condition == exact,
                'condition': condition, 'exact': exact}
    raise ValueError(f"Assertion '{assertion}' not supported. Available assertions: {', '.join(ASSERTIONS)}")


def conjecture_record(G: Graph, k: int, budgets: Budgets) -> Dict:
    """A graph is a candidate when it meets the hypothesis for k but has no {2, 2k+1}-factor"""
    hypothesis = check_conjecture_hypothesis(G, k, budgets)
    record = {'k': k, 'hypothesis': hypothesis.to_dict(), 'candidate': False}
    if hypothesis.holds:
        record['candidate'] = find_factor_exact(G, (2, 2 * k + 1), budgets) is None
    return record


def evaluate_task(task: StreamTask) -> Dict:
    """Worker entry point: one JSON-ready record per graph"""
    record = {'line': task.line_no, 'graph6': task.graph6}
    started = time.perf_counter()
    try:
        G = parse_graph6(task.graph6)
        record['n'] = G.n
        if task.mode == "check":
            record.update(check_record(G, task.budgets))
        elif task.mode == "solve":
            record.update(solve_record(G, task.orders, task.method, task.budgets))
        elif task.mode == "sweep":
            record.update(assertion_record(G, task.assertion, task.budgets))
        elif task.mode == "conjecture":
            record.update(conjecture_record(G, task.k, task.budgets))
        else:
            raise ValueError(f"Mode '{task.mode}' not supported. Available modes: {', '.join(MODES)}")
        record['status'] = 'ok'
    except BUDGET_ERRORS as e:
        record.update(status='budget_exceeded', error=str(e))
    except GRAPH_ERRORS as e:
        record.update(status='error', error=f"{type(e).__name__}: {e}")
        if task.mode == "sweep":
            record.update(assertion=task.assertion, passed=False)
    if task.timings:
        record['seconds'] = round(time.perf_counter() - started, 6)
    return record


@dataclass
class SweepSummary:
    graphs: int = 0
    malformed: int = 0
    budget_exceeded: int = 0
    errors: int = 0
    failures: int = 0
    candidates: int = 0
    stopped_early: bool = False
    malformed_lines: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            'graphs': self.graphs,
            'malformed': self.malformed,
            'budget_exceeded': self.budget_exceeded,
            'errors': self.errors,
            'failures': self.failures,
            'candidates': self.candidates,
            'stopped_early': self.stopped_early,
        }

    @property
    def exit_code(self) -> int:
        """1 on an assertion failure or per-graph error, 2 when only budget overruns occurred, else 0"""
        if self.failures:
            return 1
        if self.budget_exceeded:
            return 2
        return 0


class SweepEngine:
    """Streams graph6 records through evaluate_task, sequentially or on a process pool"""

    def __init__(self, mode: str, budgets: Optional[Budgets] = None, jobs: Optional[int] = None,
                 timings: Optional[bool] = None, **options):
        if mode not in MODES:
            raise ValueError(f"Mode '{mode}' not supported. Available modes: {', '.join(MODES)}")
        self.logger = logging.getLogger(__name__)
        self.mode = mode
        self.budgets = budgets or ToolkitConfig.budgets()
        self.jobs = jobs or ToolkitConfig.default_jobs()
        self.timings = ToolkitConfig.timings if timings is None else timings
        self.options = options
        self.summary = SweepSummary()
        self.records: List[Dict] = []

    def _tasks(self, lines: Iterable[str]) -> Iterator[StreamTask]:
        for line_no, item in read_graph6_stream(lines):
            if isinstance(item, GraphFormatError):
                self.summary.malformed += 1
                self.summary.malformed_lines.append(line_no)
                self.logger.warning(f"Skipping malformed line {line_no}: {item}")
                continue
            yield StreamTask(line_no, to_graph6(item), self.mode, self.budgets,
                             timings=self.timings, **self.options)

    def _evaluate(self, tasks: Iterator[StreamTask]) -> Generator[Dict, None, None]:
        if self.jobs > 1:
            self.logger.debug(f"Evaluating stream on {self.jobs} workers")
            stage = pl.process.map(evaluate_task, tasks, workers=self.jobs,
                                   maxsize=ToolkitConfig.queue_size)
            yield from pl.process.ordered(stage)
        else:
            for task in tasks:
                yield evaluate_task(task)

    def _count(self, record: Dict):
        self.summary.graphs += 1
        if record['status'] == 'budget_exceeded':
            self.summary.budget_exceeded += 1
            self.logger.warning(f"Line {record['line']}: {record['error']}")
        elif record['status'] == 'error':
            self.summary.errors += 1
            self.summary.failures += 1
            self.logger.error(f"Line {record['line']} raised {record['error']}: {record['graph6']}")
        elif record.get('passed') is False:
            self.summary.failures += 1
            self.logger.error(f"Assertion {record['assertion']} failed on line {record['line']}: {record['graph6']}")
        if record.get('candidate'):
            self.summary.candidates += 1
            self.logger.info(f"Candidate on line {record['line']}: {record['graph6']}")
        if self.summary.graphs % 1000 == 0:
            self.logger.info(f"✓ {self.summary.graphs} graphs processed")

    def run(self, lines: Iterable[str], stop_on_failure: bool = True) -> Iterator[Dict]:
        """
        Yield records in input order while updating self.summary

        Args:
            lines: graph6 lines
            stop_on_failure: In sweep mode, stop after the first failed assertion
        """
        self.logger.info(f"Starting {self.mode} stream (jobs={self.jobs})")
        records = self._evaluate(self._tasks(lines))
        try:
            for record in records:
                self._count(record)
                self.records.append(record)
                yield record
                if stop_on_failure and self.mode == "sweep" and self.summary.failures:
                    self.summary.stopped_early = True
                    break
        finally:
            # Shuts down the worker pool on an early stop
            records.close()
        self.logger.info(f"✓ {self.mode} finished: {self.summary.graphs} graphs, "
                         f"{self.summary.malformed} malformed, {self.summary.errors} errors, "
                         f"{self.summary.failures} failures")
