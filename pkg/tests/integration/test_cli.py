"""
Integration tests for the command-line entry point.
Runs main(argv) in-process and reads the JSON lines written to stdout.
"""

import io
import json
import os
import sys

import pandas as pd
import pytest
import yaml

project_root = os.path.dirname(os.path.dirname(os.path.dirname(__file__)))
sys.path.insert(0, project_root)

from src.cli import EXIT_ERROR, EXIT_NEGATIVE, EXIT_OK, main, parse_orders
from src.graph_core import complete_graph, cycle_graph, path_graph, to_graph6
from src.reduction import ConstructiveSolver, LiftError


def records(capsys):
    out = capsys.readouterr().out
    return [json.loads(line) for line in out.splitlines() if line.strip()]


@pytest.fixture
def graph_file(tmp_path):
    lines = [to_graph6(path_graph(2)), to_graph6(cycle_graph(5)), "!!", to_graph6(complete_graph(3))]
    path = tmp_path / "graphs.g6"
    path.write_text("\n".join(lines) + "\n")
    return str(path)


class TestCheckCommand:
    """Tests for `check`"""

    def test_cycle_holds(self, capsys):
        assert main(['check', '--family', 'cycle:5']) == EXIT_OK
        (record,) = records(capsys)
        assert record['holds'] is True
        assert record['input'] == 'cycle:5'
        assert record['beta3'] == 6

    def test_hn_fails(self, capsys):
        assert main(['check', '--family', 'Hn:1']) == EXIT_NEGATIVE
        (record,) = records(capsys)
        assert record['sufficient']['max_slack'] == 1

    def test_graph6_argument(self, capsys):
        assert main(['check', 'Bw']) == EXIT_NEGATIVE
        assert records(capsys)[0]['n'] == 3

    def test_empty_graph6_is_an_error(self, capsys):
        assert main(['check', '']) == EXIT_ERROR
        assert records(capsys) == []

    def test_missing_graph(self):
        assert main(['check']) == EXIT_ERROR

    def test_unknown_family(self):
        assert main(['check', '--family', 'wheel:5']) == EXIT_ERROR

    def test_budget_exceeded(self):
        assert main(['check', '--family', 'path:8', '--max-subsets', '16']) == EXIT_ERROR

    def test_bad_config(self, tmp_path):
        config = tmp_path / "bad.yaml"
        config.write_text(yaml.safe_dump({'reduction': {'lift_method': 'greedy'}}))
        assert main(['check', '--family', 'cycle:5', '--config', str(config)]) == EXIT_ERROR


class TestSolveCommand:
    """Tests for `solve`"""

    def test_exact(self, capsys):
        assert main(['solve', '--family', 'cycle:6']) == EXIT_OK
        (record,) = records(capsys)
        assert record['found'] is True
        assert record['method'] == 'exact'

    def test_no_factor(self, capsys):
        assert main(['solve', '--family', 'complete:3']) == EXIT_NEGATIVE
        assert records(capsys)[0]['factor'] is None

    def test_other_orders(self, capsys):
        assert main(['solve', '--family', 'path:7', '--orders', '2,7']) == EXIT_OK
        assert records(capsys)[0]['factor'] == [[0, 1, 2, 3, 4, 5, 6]]

    def test_constructive(self, capsys):
        assert main(['solve', '--method', 'constructive', '--family', 'cycle:5']) == EXIT_OK
        record = records(capsys)[0]
        assert record['trace'][0]['branch'] == 'cycle'

    def test_constructive_witness(self, capsys):
        assert main(['solve', '--method', 'constructive', '--family', 'Hn:1']) == EXIT_NEGATIVE
        assert records(capsys)[0]['witness']['condition'] == 'sufficient'

    def test_constructive_rejects_other_orders(self):
        assert main(['solve', '--method', 'constructive', '--orders', '2,7', '--family', 'cycle:5']) == EXIT_ERROR

    @pytest.mark.parametrize("orders", ["1,2", "a,b", ""])
    def test_bad_orders(self, orders):
        assert main(['solve', '--family', 'cycle:5', '--orders', orders]) == EXIT_ERROR

    def test_parse_orders(self):
        assert parse_orders("5, 2,5") == (2, 5)


class TestStreamCommands:
    """Tests for `sweep` and `conjecture`"""

    def test_sweep_file(self, capsys, graph_file):
        assert main(['sweep', '--assert', 'theorem1', graph_file]) == EXIT_OK
        captured = capsys.readouterr()
        lines = [json.loads(line) for line in captured.out.splitlines()]
        assert [r['line'] for r in lines] == [1, 2, 4]
        assert all(r['passed'] for r in lines)
        assert "SWEEP SUMMARY" in captured.err
        assert "Malformed: 1" in captured.err

    def test_sweep_stdin(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, 'stdin', io.StringIO("A_\nBw\n"))
        assert main(['sweep', '--assert', 'factA']) == EXIT_OK
        assert len(records(capsys)) == 2

    def test_empty_stream(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, 'stdin', io.StringIO(""))
        assert main(['sweep']) == EXIT_OK
        assert records(capsys) == []

    def test_summary_csv(self, capsys, graph_file, tmp_path):
        csv_path = tmp_path / "summary.csv"
        assert main(['sweep', '--assert', 'prop-necessary', graph_file, '--summary-csv', str(csv_path)]) == EXIT_OK
        table = pd.read_csv(csv_path)
        assert list(table['n']) == [2, 3, 5]
        assert table['graphs'].sum() == 3

    def test_budget_exit_code(self, capsys, graph_file):
        assert main(['sweep', graph_file, '--max-subsets', '8']) == EXIT_ERROR
        statuses = [r['status'] for r in records(capsys)]
        assert statuses == ['ok', 'budget_exceeded', 'ok']

    def test_constructive_failure_fails_sweep(self, capsys, graph_file, mocker):
        mocker.patch.object(ConstructiveSolver, '_solve', side_effect=LiftError("lost a piece"))
        assert main(['sweep', '--assert', 'theorem1', graph_file]) == EXIT_NEGATIVE
        captured = capsys.readouterr()
        (record,) = [json.loads(line) for line in captured.out.splitlines()]
        assert record['passed'] is False
        assert record['constructive_error'] == "LiftError: lost a piece"
        assert "Stopped Early: True" in captured.err

    def test_timings_added(self, capsys, graph_file):
        main(['sweep', graph_file, '--timings'])
        assert all('seconds' in r for r in records(capsys))

    def test_parallel_output_matches(self, capsys, graph_file):
        main(['sweep', graph_file, '--jobs', '1'])
        sequential = records(capsys)
        main(['sweep', graph_file, '--jobs', '2'])
        assert records(capsys) == sequential

    def test_conjecture(self, capsys, graph_file):
        assert main(['conjecture', '--k', '1', graph_file]) == EXIT_OK
        assert all(r['candidate'] is False for r in records(capsys))

    def test_conjecture_candidates_only(self, capsys, graph_file):
        assert main(['conjecture', '--k', '2', graph_file, '--candidates-only']) == EXIT_OK
        assert records(capsys) == []

    def test_conjecture_error_exit_code(self, capsys, graph_file, mocker):
        mocker.patch('src.sweep_engine.find_factor_exact', side_effect=AssertionError("bad certificate"))
        assert main(['conjecture', '--k', '1', graph_file]) == EXIT_ERROR
        assert records(capsys)[0]['status'] == 'error'

    def test_conjecture_rejects_k0(self, graph_file):
        assert main(['conjecture', '--k', '0', graph_file]) == EXIT_ERROR


class TestExtremalCommand:
    """Tests for `extremal`"""

    def test_hn(self, capsys):
        assert main(['extremal', '--family', 'Hn:1']) == EXIT_OK
        (record,) = records(capsys)
        assert record['confirmed'] is True
        assert record['n'] == 10
        assert record['claims']['sufficient_fails'] is True

    def test_no_sweep(self, capsys):
        assert main(['extremal', '--family', 'Hn:2', '--no-sweep']) == EXIT_OK
        assert 'sufficient_fails' not in records(capsys)[0]['claims']

    def test_rejects_other_families(self):
        assert main(['extremal', '--family', 'cycle:5']) == EXIT_ERROR
