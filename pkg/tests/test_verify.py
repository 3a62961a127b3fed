import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fastpcst import (DomainError, Graph, SolutionTree, TreeInstance, exact_nwstpt, exact_pcst,
                      fgw_prime, gw_lower_bound, net_cost, validate_solution)
from fastpcst.verify import MAX_EXACT_NWSTPT, MAX_EXACT_PCST, _lex_smaller, certify

from instances import brute_pcst_value, tie_triangle, random_graph, random_tree, mstg_trap_triangle


class TestValidate:
    def test_single_vertex_ok(self):
        cert = validate_solution(tie_triangle(), SolutionTree.single(0))
        assert cert.feasible and cert.violations == []
        assert cert.net_cost == 16.0

    def test_missing_compulsory(self):
        cert = validate_solution(mstg_trap_triangle(), SolutionTree.single(0))
        assert not cert.feasible and len(cert.violations) == 1

    def test_cycle(self):
        cert = validate_solution(mstg_trap_triangle(), SolutionTree([0, 1, 2], [0, 1, 2]))
        assert not cert.feasible

    def test_out_of_range(self):
        cert = validate_solution(mstg_trap_triangle(), SolutionTree([1, 9], [0]))
        assert not cert.feasible and np.isnan(cert.net_cost)


class TestLowerBound:
    def test_arithmetic(self):
        # c(T) = 10, w(out) = 4
        g = Graph(4, [0, 1, 2], [1, 2, 3], [4.0, 6.0, 1.0], [1.0, 1.0, 1.0, 4.0])
        t = SolutionTree([0, 1, 2], [0, 1])
        assert gw_lower_bound(g, t) == 9.0

    def test_certificate_fields(self):
        g = mstg_trap_triangle()
        t = SolutionTree([1, 2], [2])
        cert = certify(g, t, 10.0)
        assert cert.feasible and cert.ratio_bound == pytest.approx(1.4)
        bad = certify(g, t, 15.0)
        assert not bad.feasible and "lower bound exceeds net cost" in bad.violations

    def test_bound_below_optimum(self, rng):
        for _ in range(150):
            g = random_graph(rng, int(rng.integers(1, 10)), 15, n_compulsory=int(rng.integers(0, 3)),
                             prize_range=(1.0, 20.0))
            assert gw_lower_bound(g, fgw_prime(g)) <= exact_pcst(g, return_value=True)[1] + 1e-9


class TestExactPCST:
    def test_mstg_trap_triangle(self):
        t, val = exact_pcst(mstg_trap_triangle(), return_value=True)
        assert t.vertices.tolist() == [1, 2] and t.edges.tolist() == [2] and val == 14.0

    def test_tie_triangle(self):
        t, val = exact_pcst(tie_triangle(), return_value=True)
        assert t.edges.tolist() == [2] and val == 8.0

    def test_zero_prizes(self):
        g = Graph(3, [0, 1], [1, 2], [1.0, 1.0])
        t, val = exact_pcst(g, return_value=True)
        assert t.vertices.tolist() == [0] and val == 0.0

    def test_guard(self):
        g = Graph(MAX_EXACT_PCST + 1, np.arange(MAX_EXACT_PCST), np.arange(1, MAX_EXACT_PCST + 1),
                  np.ones(MAX_EXACT_PCST))
        with pytest.raises(DomainError):
            exact_pcst(g)

    def test_lex_smaller(self):
        # {0,2} < {1}; {0,1} < {0,2}; {0} < {0,1}
        assert _lex_smaller(0b101, 0b010)
        assert _lex_smaller(0b011, 0b101)
        assert _lex_smaller(0b001, 0b011)
        assert not _lex_smaller(0b011, 0b001)
        assert not _lex_smaller(0b101, 0b101)

    @settings(max_examples=150, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 7), k=st.integers(0, 2))
    def test_double_oracle(self, seed, n, k):
        rng = np.random.default_rng(seed)
        g = random_graph(rng, n, n - 1 + int(rng.integers(0, n + 1)), n_compulsory=k,
                         zero_prize_frac=0.3)
        t, val = exact_pcst(g, return_value=True)
        assert validate_solution(g, t).feasible
        assert net_cost(g, t) == pytest.approx(val, abs=1e-9)
        assert val == pytest.approx(brute_pcst_value(g), abs=1e-9)


class TestExactNWSTPT:
    def test_path(self):
        assert exact_nwstpt(TreeInstance(2, [0], [1], [3.0], [0.0, 5.0])) == 5.0

    def test_all_compulsory(self, rng):
        inst = random_tree(rng, 8, n_compulsory=8)
        assert exact_nwstpt(inst) == pytest.approx(inst.weight.sum() - inst.cost.sum())

    def test_negative_leaf(self):
        val, t = exact_nwstpt(TreeInstance(2, [0], [1], [0.5], [10.0, -1.0]), return_tree=True)
        assert val == 10.0 and t.vertices.tolist() == [0]

    def test_guard(self):
        n = MAX_EXACT_NWSTPT + 1
        with pytest.raises(DomainError):
            exact_nwstpt(TreeInstance(n, np.arange(n - 1), np.arange(1, n), np.ones(n - 1), np.ones(n)))
