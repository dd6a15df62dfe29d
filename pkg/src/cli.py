#!/usr/bin/env python3
"""
Path-Factor Toolkit CLI
Condition checks, solving, stream sweeps, extremal verification and
conjecture exploration. Records go to stdout as JSON lines; logging and the
human summary go to stderr.

Exit codes:
    0  condition holds / factor found / every assertion or claim confirmed
    1  condition violated / no factor / an assertion or claim failed
    2  error: malformed input, bad arguments or an exceeded budget
"""

import argparse
import json
import logging
import sys
from datetime import datetime
from functools import wraps
from typing import Dict, Iterable, Optional, Tuple

import pytz

from src.config import Budgets, ToolkitConfig, load_config
from src.deficiency import (
    TIGHT_HN,
    SweepBudgetExceeded,
    check_conjecture_hypothesis,
    check_sufficient,
    conjecture_bound,
    deficit,
    sweep_bound,
    tight_hprime_bound,
)
from src.extremal import (
    FamilySpecError,
    check_piece_bounds,
    gen_standard,
    hn_extremal_set,
    hn_pieces,
    hn_roles,
    hprime_extremal_set,
    hprime_pieces,
    hprime_roles,
    parse_family,
)
from src.factor_search import SearchBudgetExceeded, find_factor_exact
from src.graph_core import Graph, GraphFormatError, parse_graph6, to_graph6
from src.report_generator import SweepReportGenerator
from src.sweep_engine import ASSERTIONS, METHODS, SweepEngine, check_record, solve_record

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


class TimezoneFormatter(logging.Formatter):
    """Render record timestamps in a pytz timezone"""

    def __init__(self, fmt: str, datefmt: str, timezone: str):
        super().__init__(fmt, datefmt)
        self.tz = pytz.timezone(timezone)

    def formatTime(self, record, datefmt=None):
        stamp = datetime.fromtimestamp(record.created, self.tz)
        return stamp.strftime(datefmt or self.datefmt)


def setup_logging(log_level: str = 'INFO', timezone: str = 'UTC'):
    """Send every log record to stderr; stdout is reserved for JSON"""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(TimezoneFormatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S %Z',
        timezone=timezone,
    ))
    root = logging.getLogger()
    root.handlers = []
    root.addHandler(handler)
    root.setLevel(getattr(logging, log_level.upper()))


def cli_error_handler(func):
    """
    Decorator mapping toolkit errors to exit code 2 with a logged reason
    """
    @wraps(func)
    def wrapper(args):
        try:
            return func(args)
        except (SweepBudgetExceeded, SearchBudgetExceeded) as e:
            logger.error(f"⏱️  BUDGET EXCEEDED in {func.__name__}(): {e}")
            return EXIT_ERROR
        except (GraphFormatError, FamilySpecError) as e:
            logger.error(f"🚨 INPUT ERROR in {func.__name__}(): {e}")
            return EXIT_ERROR
        except (ValueError, FileNotFoundError) as e:
            logger.error(f"🚨 ARGUMENT ERROR in {func.__name__}(): {e}")
            return EXIT_ERROR
        except RuntimeError as e:
            logger.error(f"❌ INTERNAL ERROR in {func.__name__}(): {type(e).__name__}: {e}")
            return EXIT_ERROR
    return wrapper


def emit(record: Dict):
    sys.stdout.write(json.dumps(record) + "\n")
    sys.stdout.flush()


def budgets_from_args(args) -> Budgets:
    base = ToolkitConfig.budgets()
    return Budgets(
        max_n=args.max_n or base.max_n,
        max_subsets=args.max_subsets or base.max_subsets,
        max_nodes=args.max_nodes or base.max_nodes,
        memo_capacity=base.memo_capacity,
    )


def jobs_from_args(args) -> int:
    return args.jobs if args.jobs else ToolkitConfig.default_jobs()


def load_graph(args) -> Tuple[str, Graph]:
    """The graph named by --family or the positional graph6 argument"""
    if args.family:
        spec = parse_family(args.family)
        return str(spec), gen_standard(spec)
    if args.graph6 is None:
        raise ValueError("Provide a graph6 string or --family")
    return args.graph6, parse_graph6(args.graph6)


def parse_orders(text: str) -> Tuple[int, ...]:
    try:
        orders = tuple(sorted({int(p) for p in text.split(",") if p.strip()}))
    except ValueError as e:
        raise ValueError(f"Orders must be comma-separated integers, got '{text}'") from e
    if not orders or orders[0] < 2:
        raise ValueError(f"Orders must be integers >= 2, got '{text}'")
    return orders


def open_stream(paths) -> Iterable[str]:
    if not paths:
        yield from sys.stdin
        return
    for path in paths:
        with open(path, 'r') as f:
            yield from f


@cli_error_handler
def cmd_check(args) -> int:
    name, G = load_graph(args)
    record = {'input': name, 'n': G.n, 'graph6': to_graph6(G)}
    record.update(check_record(G, budgets_from_args(args), jobs_from_args(args)))
    emit(record)
    return EXIT_OK if record['holds'] else EXIT_NEGATIVE


@cli_error_handler
def cmd_solve(args) -> int:
    name, G = load_graph(args)
    record = {'input': name, 'n': G.n, 'graph6': to_graph6(G)}
    record.update(solve_record(G, parse_orders(args.orders), args.method,
                               budgets_from_args(args), jobs_from_args(args)))
    emit(record)
    return EXIT_OK if record['found'] else EXIT_NEGATIVE


def _run_stream(args, mode: str, **options) -> SweepEngine:
    engine = SweepEngine(mode, budgets_from_args(args), jobs_from_args(args),
                         timings=args.timings or None, **options)
    for record in engine.run(open_stream(args.inputs)):
        if mode == "conjecture" and args.candidates_only and not record.get('candidate'):
            continue
        emit(record)

    report = SweepReportGenerator(engine.records, mode)
    sys.stderr.write(report.format_summary(engine.summary.to_dict()) + "\n")
    if args.summary_csv:
        report.write_csv(args.summary_csv)
    return engine


@cli_error_handler
def cmd_sweep(args) -> int:
    return _run_stream(args, "sweep", assertion=args.assertion).summary.exit_code


@cli_error_handler
def cmd_conjecture(args) -> int:
    conjecture_bound(args.k)
    if args.k >= 3 and args.k % 3:
        logger.warning(f"k = {args.k} is not divisible by 3; no sharpness family is known for it")
    engine = _run_stream(args, "conjecture", k=args.k)
    return EXIT_ERROR if engine.summary.budget_exceeded or engine.summary.errors else EXIT_OK


def extremal_claims(family: str, params: Tuple, G: Graph, budgets: Budgets, full_sweep: bool,
                    jobs: int) -> Dict[str, bool]:
    """Every sharpness property of one member of H_n or H'(k, n)"""
    claims = {}
    if family == "Hn":
        (n,) = params
        roles = hn_roles(n)
        claims['order'] = G.n == 3 + 7 * n
        claims['size'] = G.edge_count == 2 + 7 * n
        claims['degree_a'] = G.degree(roles['a']) == n + 1
        claims['no_factor'] = find_factor_exact(G, (2, 5), budgets) is None
        claims['deficit_two_attained'] = deficit(G, hn_extremal_set(n)) == 2
        claims['piece_bounds'] = all(r.holds for r in check_piece_bounds(G, hn_pieces(n), budgets))
        if full_sweep:
            claims['tight_bound_holds'] = sweep_bound(G, TIGHT_HN, budgets, jobs).holds
            claims['sufficient_fails'] = check_sufficient(G, budgets, jobs).max_slack == 1
        return claims

    k, n = params
    roles = hprime_roles(k, n)
    bound = tight_hprime_bound(k)
    extremal = hprime_extremal_set(k, n)
    claims['order'] = G.n == n + (2 * n + 1) * (2 * k + 1)
    claims['r0_universal'] = all(G.degree(v) == G.n - 1 for v in roles['R0'])
    claims['no_factor'] = find_factor_exact(G, (2, 2 * k + 1), budgets) is None
    claims['tight_bound_attained'] = bound.slack(G, extremal) == 0
    claims['conjecture_bound_fails'] = conjecture_bound(k).slack(G, extremal) > 0
    claims['piece_bounds'] = all(r.holds for r in check_piece_bounds(G, hprime_pieces(k, n), budgets))
    if full_sweep:
        claims['tight_bound_holds'] = sweep_bound(G, bound, budgets, jobs).holds
        claims['conjecture_hypothesis_fails'] = not check_conjecture_hypothesis(G, k, budgets, jobs).holds
    return claims


@cli_error_handler
def cmd_extremal(args) -> int:
    spec = parse_family(args.family)
    if spec.family not in ("Hn", "Hprime"):
        raise FamilySpecError(f"extremal takes Hn or Hprime, got '{spec.family}'")
    G = gen_standard(spec)
    claims = extremal_claims(spec.family, spec.params, G, budgets_from_args(args),
                             not args.no_sweep, jobs_from_args(args))
    confirmed = all(claims.values())
    emit({'input': str(spec), 'n': G.n, 'graph6': to_graph6(G), 'claims': claims, 'confirmed': confirmed})
    if confirmed:
        logger.info(f"✓ All {len(claims)} claims confirmed for {spec}")
    else:
        logger.error(f"❌ Failed claims for {spec}: {[c for c, ok in claims.items() if not ok]}")
    return EXIT_OK if confirmed else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='python -m src.cli',
        description='Path-factor toolkit: deficiency conditions, {P2,P5}-factors and extremal families',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m src.cli check --family cycle:5
  python -m src.cli solve --family Hprime:3,1 --orders 2,7
  python -m src.cli solve --method constructive 'Ch'
  geng -c 6 | python -m src.cli sweep --assert theorem1 --jobs 4
  python -m src.cli extremal --family Hn:2
  python -m src.cli conjecture --k 3 graphs8.g6 --candidates-only
        """
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='YAML file overriding src/config.yaml')
    common.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Log level (default: from config)')
    common.add_argument('--jobs', type=int, help='Worker processes (default: PFK_JOBS, then config)')
    common.add_argument('--max-n', type=int, help='Largest graph the exact solver accepts')
    common.add_argument('--max-subsets', type=int, help='Largest subset sweep (2^n) allowed')
    common.add_argument('--max-nodes', type=int, help='Search-node budget of the exact solver')

    single = argparse.ArgumentParser(add_help=False)
    single.add_argument('graph6', nargs='?', help='Graph in graph6 format')
    single.add_argument('--family', help='Family member, e.g. Hn:1, Hprime:3,1, cycle:5, random:8,0.5,7')

    stream = argparse.ArgumentParser(add_help=False)
    stream.add_argument('inputs', nargs='*', help='graph6 files (default: stdin)')
    stream.add_argument('--summary-csv', help='Write the per-order summary table to this CSV file')
    stream.add_argument('--timings', action='store_true', help='Add wall-clock seconds to every record')

    sub = parser.add_subparsers(dest='command', required=True)

    check = sub.add_parser('check', parents=[common, single], help='Evaluate the deficiency conditions')
    check.set_defaults(handler=cmd_check)

    solve = sub.add_parser('solve', parents=[common, single], help='Find a path-factor')
    solve.add_argument('--orders', default='2,5', help='Allowed path orders (default: 2,5)')
    solve.add_argument('--method', choices=METHODS, default='exact', help='Solver (default: exact)')
    solve.set_defaults(handler=cmd_solve)

    sweep = sub.add_parser('sweep', parents=[common, stream], help='Assert a theorem over a graph6 stream')
    sweep.add_argument('--assert', dest='assertion', choices=ASSERTIONS, default='theorem1',
                       help='Statement to check on every graph (default: theorem1)')
    sweep.set_defaults(handler=cmd_sweep)

    extremal = sub.add_parser('extremal', parents=[common], help='Verify a sharpness family member')
    extremal.add_argument('--family', required=True, help='Hn:<n> or Hprime:<k>,<n>')
    extremal.add_argument('--no-sweep', action='store_true',
                          help='Skip the exhaustive 2^n sweeps; piece bounds and witness sets only')
    extremal.set_defaults(handler=cmd_extremal)

    conjecture = sub.add_parser('conjecture', parents=[common, stream],
                                help='Search a graph6 stream for counterexample candidates')
    conjecture.add_argument('--k', type=int, default=3, help='Target path order 2k+1 (default: 3)')
    conjecture.add_argument('--candidates-only', action='store_true', help='Emit only candidate records')
    conjecture.set_defaults(handler=cmd_conjecture)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        ToolkitConfig.apply(load_config(args.config))
        setup_logging(args.log_level or ToolkitConfig.log_level, ToolkitConfig.timezone)
    except (ValueError, FileNotFoundError, AttributeError, pytz.UnknownTimeZoneError) as e:
        sys.stderr.write(f"Configuration error: {e}\n")
        return EXIT_ERROR

    try:
        return args.handler(args)
    except KeyboardInterrupt:
        logger.warning("Interrupted by user")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
