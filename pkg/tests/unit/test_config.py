"""
Unit tests for configuration loading and ToolkitConfig overrides.
"""

import os
import sys

import pytest
import yaml

project_root = os.path.dirname(os.path.dirname(os.path.dirname(__file__)))
sys.path.insert(0, project_root)

from src.config import Budgets, ToolkitConfig, load_config


class TestLoadConfig:
    """Tests for load_config"""

    def test_defaults_from_packaged_yaml(self):
        config = load_config()
        assert config['budgets']['max_subsets'] == 1 << 26
        assert config['reduction']['lift_method'] == 'walk'
        assert config['sweep']['jobs'] == 1

    def test_override_merges_nested_keys(self, tmp_path):
        override = tmp_path / "override.yaml"
        override.write_text(yaml.safe_dump({'budgets': {'max_n': 12}, 'log_level': 'debug'}))
        config = load_config(str(override))
        assert config['budgets']['max_n'] == 12
        assert config['budgets']['max_nodes'] == 20_000_000
        assert config['log_level'] == 'debug'

    def test_missing_override(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config(str(tmp_path / "absent.yaml"))

    def test_missing_default_gives_empty_config(self, tmp_path):
        assert load_config(default_file=str(tmp_path / "none.yaml")) == {}


class TestToolkitConfig:
    """Tests for ToolkitConfig.apply, budgets and default_jobs"""

    def test_apply_and_budgets(self):
        ToolkitConfig.apply({'budgets': {'max_n': 10, 'max_subsets': 1024},
                             'bipartite': {'debug_checks': True},
                             'log_level': 'debug'})
        assert ToolkitConfig.budgets() == Budgets(max_n=10, max_subsets=1024,
                                                  max_nodes=20_000_000, memo_capacity=1_000_000)
        assert ToolkitConfig.debug_checks is True
        assert ToolkitConfig.log_level == 'DEBUG'

    def test_unknown_lift_method(self):
        with pytest.raises(ValueError, match="not supported"):
            ToolkitConfig.apply({'reduction': {'lift_method': 'greedy'}})

    def test_non_positive_budget(self):
        with pytest.raises(ValueError, match="max_nodes"):
            ToolkitConfig.apply({'budgets': {'max_nodes': 0}})

    def test_empty_config_keeps_defaults(self):
        before = ToolkitConfig.budgets()
        ToolkitConfig.apply({})
        assert ToolkitConfig.budgets() == before

    def test_jobs_from_environment(self, mocker):
        mocker.patch.dict(os.environ, {'PFK_JOBS': '3'})
        assert ToolkitConfig.default_jobs() == 3

    def test_invalid_environment_jobs_fall_back(self, mocker):
        mocker.patch.dict(os.environ, {'PFK_JOBS': 'many'})
        ToolkitConfig.jobs = 2
        assert ToolkitConfig.default_jobs() == 2

    def test_environment_jobs_floor(self, mocker):
        mocker.patch.dict(os.environ, {'PFK_JOBS': '0'})
        assert ToolkitConfig.default_jobs() == 1
