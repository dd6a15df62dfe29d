"""
Integration tests for the sharpness families.
H_n attains deficit 2 while meeting the (4/3)|X| + 2/3 bound; H'(k, n)
attains the tight weighted bound and violates the conjectured hypothesis.
"""

import os
import sys

import pytest

project_root = os.path.dirname(os.path.dirname(os.path.dirname(__file__)))
sys.path.insert(0, project_root)

from src.cli import extremal_claims
from src.config import Budgets
from src.deficiency import TIGHT_HN, check_family_bound, check_sufficient, sweep_bound
from src.extremal import gen_Hn, gen_Hprime


class TestHnFamily:
    """Sharpness of the sufficient condition."""

    def test_h1_full_sweep(self):
        G = gen_Hn(1)
        assert check_sufficient(G).max_slack == 1
        assert sweep_bound(G, TIGHT_HN).max_slack == 0

    def test_h1_claims(self, budgets):
        claims = extremal_claims("Hn", (1,), gen_Hn(1), budgets, full_sweep=True, jobs=1)
        assert all(claims.values()), claims
        assert 'sufficient_fails' in claims

    @pytest.mark.parametrize("n", [2, 3])
    def test_claims_without_sweep(self, budgets, n):
        claims = extremal_claims("Hn", (n,), gen_Hn(n), budgets, full_sweep=False, jobs=1)
        assert all(claims.values()), claims
        assert 'tight_bound_holds' not in claims

    @pytest.mark.slow
    def test_h2_tight_bound(self):
        report = check_family_bound(gen_Hn(2), 4, 3, 2, 3, {1: 3, 3: 2})
        assert report.max_slack == 0


class TestHprimeFamily:
    """Sharpness of the conjectured {P2, P2k+1} hypothesis."""

    @pytest.mark.slow
    def test_k3_claims_without_sweep(self, budgets):
        claims = extremal_claims("Hprime", (3, 1), gen_Hprime(3, 1), budgets, full_sweep=False, jobs=1)
        assert all(claims.values()), claims

    @pytest.mark.slow
    def test_k3_full_sweep(self):
        # 2^22 subsets
        budgets = Budgets(max_n=32, max_subsets=1 << 23, max_nodes=50_000_000, memo_capacity=1_000_000)
        claims = extremal_claims("Hprime", (3, 1), gen_Hprime(3, 1), budgets, full_sweep=True, jobs=4)
        assert claims['tight_bound_holds']
        assert claims['conjecture_hypothesis_fails']
