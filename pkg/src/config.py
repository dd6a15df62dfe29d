"""
Toolkit Configuration
"""

import copy
import logging
import os
from dataclasses import dataclass

import yaml

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.yaml")

LIFT_METHODS = ("walk", "exhaustive")


@dataclass(frozen=True)
class Budgets:
    """Resource limits handed to every solver and sweep (picklable for workers)"""
    max_n: int = 32
    max_subsets: int = 1 << 26
    max_nodes: int = 20_000_000
    memo_capacity: int = 1_000_000


class ToolkitConfig:
    """Toolkit configuration with YAML overrides"""

    # Budgets
    max_n = 32
    max_subsets = 1 << 26
    max_nodes = 20_000_000
    memo_capacity = 1_000_000

    # Central factor engine
    brute_force = False
    debug_checks = False

    # Constructive algorithm
    lift_method = "walk"
    exhaustive_lift_max_n = 12

    # Sweeps
    jobs = 1
    queue_size = 64
    timings = False

    # Logging
    log_level = "INFO"  # DEBUG, INFO, WARNING, ERROR
    timezone = "UTC"

    @classmethod
    def apply(cls, config):
        """
        Override class defaults from a loaded configuration dict

        Args:
            config: Nested dict as returned by load_config()

        Raises:
            ValueError: If a value is out of range
        """
        budgets = config.get('budgets', {})
        cls.max_n = int(budgets.get('max_n', cls.max_n))
        cls.max_subsets = int(budgets.get('max_subsets', cls.max_subsets))
        cls.max_nodes = int(budgets.get('max_nodes', cls.max_nodes))
        cls.memo_capacity = int(budgets.get('memo_capacity', cls.memo_capacity))

        bipartite = config.get('bipartite', {})
        cls.brute_force = bool(bipartite.get('brute_force', cls.brute_force))
        cls.debug_checks = bool(bipartite.get('debug_checks', cls.debug_checks))

        reduction = config.get('reduction', {})
        lift_method = reduction.get('lift_method', cls.lift_method)
        if lift_method not in LIFT_METHODS:
            available = ', '.join(LIFT_METHODS)
            raise ValueError(f"Lift method '{lift_method}' not supported. Available methods: {available}")
        cls.lift_method = lift_method
        cls.exhaustive_lift_max_n = int(reduction.get('exhaustive_lift_max_n', cls.exhaustive_lift_max_n))

        sweep = config.get('sweep', {})
        cls.jobs = int(sweep.get('jobs', cls.jobs))
        cls.queue_size = int(sweep.get('queue_size', cls.queue_size))
        cls.timings = bool(sweep.get('timings', cls.timings))

        cls.log_level = str(config.get('log_level', cls.log_level)).upper()
        cls.timezone = str(config.get('timezone', cls.timezone))

        for name in ('max_n', 'max_subsets', 'max_nodes', 'memo_capacity', 'jobs', 'queue_size'):
            if getattr(cls, name) < 1:
                raise ValueError(f"Configuration value '{name}' must be positive, got {getattr(cls, name)}")

    @classmethod
    def budgets(cls):
        """Snapshot of the current budgets"""
        return Budgets(
            max_n=cls.max_n,
            max_subsets=cls.max_subsets,
            max_nodes=cls.max_nodes,
            memo_capacity=cls.memo_capacity,
        )

    @classmethod
    def default_jobs(cls):
        """Worker count: PFK_JOBS environment variable, else the configured value"""
        env_jobs = os.environ.get('PFK_JOBS')
        if env_jobs:
            try:
                return max(1, int(env_jobs))
            except ValueError:
                logger.warning(f"Ignoring non-integer PFK_JOBS={env_jobs!r}")
        return cls.jobs


def load_config(override_file=None, default_file=DEFAULT_CONFIG_FILE):
    """
    Load configuration with hierarchy: default -> override file

    Args:
        override_file: Optional YAML file whose keys override the defaults
        default_file: Default configuration file (src/config.yaml)

    Returns:
        Merged configuration dict

    Raises:
        FileNotFoundError: If override_file is given but missing
    """
    default_config = {}
    if os.path.exists(default_file):
        with open(default_file, 'r') as f:
            default_config = yaml.safe_load(f) or {}

    config = copy.deepcopy(default_config)

    if override_file:
        if not os.path.exists(override_file):
            raise FileNotFoundError(f"Config file not found: {override_file}")
        with open(override_file, 'r') as f:
            override_config = yaml.safe_load(f) or {}
        _deep_merge(config, override_config)
        logger.info(f"Loaded override config from: {override_file}")

    return config


def _deep_merge(base_dict, override_dict):
    """Deep merge override_dict into base_dict"""
    for key, value in override_dict.items():
        if key in base_dict and isinstance(base_dict[key], dict) and isinstance(value, dict):
            _deep_merge(base_dict[key], value)
        else:
            base_dict[key] = value
