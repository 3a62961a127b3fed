import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fastpcst import (ConnectivityError, DomainError, GeneratorParams, Graph, ParseError, SolutionTree,
                      StructuralError, generate_instance, mstg, net_cost, parse_solution, parse_stp,
                      write_graph, write_solution)
from fastpcst.stp import MAGIC, format_number, generator_comment

from instances import tie_triangle, mstg_trap_triangle


def body(graph_lines, terminal_lines=None, eof=True):
    out = [MAGIC, "SECTION Graph", *graph_lines, "END"]
    if terminal_lines is not None:
        out += ["SECTION Terminals", *terminal_lines, "END"]
    if eof:
        out.append("EOF")
    return "\n".join(out) + "\n"


MINIMAL = body(["Nodes 2", "Edges 1", "E 1 2 3.0"], ["Terminals 1", "TP 2 5.0"])


class TestParse:
    def test_minimal(self):
        g = parse_stp(MINIMAL)
        assert g.n == 2 and g.m == 1
        assert g.prizes.tolist() == [0.0, 5.0] and g.cost.tolist() == [3.0]

    def test_bytes_input(self):
        assert parse_stp(MINIMAL.encode()) == parse_stp(MINIMAL)

    def test_no_terminals(self):
        g = parse_stp(body(["Nodes 2", "Edges 1", "E 1 2 3"]))
        assert g.prizes.tolist() == [0.0, 0.0] and g.compulsory.size == 0

    def test_compulsory_and_comment(self):
        text = MINIMAL.replace("SECTION Graph", 'SECTION Comment\nName "x"\nEND\nSECTION Graph')
        text = text.replace("Terminals 1\nTP 2 5.0", "Terminals 2\nTP 2 5.0\nT 1")
        g = parse_stp(text)
        assert g.compulsory.tolist() == [0]

    @pytest.mark.parametrize("text,line", [
        ("garbage\n", 1),
        (body(["Nodes 2", "Edges 2", "E 1 2 3"]), None),
        (body(["Nodes 2", "E 1 3 3"]), 4),
        (body(["Nodes 2", "E 1 1 3"]), 4),
        (body(["Nodes 2", "E 1 2 x"]), 4),
        (body(["Nodes 2", "E 1 2 3"], ["TP 2 1", "TP 2 4"]), 8),
        (body(["Nodes 2", "E 1 2 3"], ["Terminals 3", "TP 2 1"]), None),
        (body(["Nodes 2", "Bogus 1", "E 1 2 3"]), 4),
        (body(["Nodes 2", "E 1 2 3"], eof=False), None),
    ])
    def test_parse_errors(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_stp(text, source="x.stp")
        if line is not None:
            assert info.value.line == line
            assert f"x.stp:{line}" in str(info.value)

    def test_nonpositive_cost(self):
        with pytest.raises(DomainError):
            parse_stp(body(["Nodes 2", "E 1 2 0"]))

    def test_disconnected(self):
        with pytest.raises(ConnectivityError):
            parse_stp(body(["Nodes 3", "E 1 2 1"]))


class TestWrite:
    def test_single_vertex(self):
        text = write_graph(Graph(1))
        assert "Nodes 1" in text and "Edges 0" in text
        assert parse_stp(text) == Graph(1)

    def test_tie_triangle(self):
        lines = write_graph(tie_triangle()).splitlines()
        assert sum(ln.startswith("E ") for ln in lines) == 3
        assert sum(ln.startswith("TP ") for ln in lines) == 3

    def test_format_number(self):
        assert format_number(3.0) == "3"
        assert format_number(0.1) == "0.1"
        assert float(format_number(1 / 3)) == 1 / 3

    def test_comment_pairs(self):
        p = GeneratorParams(5, 6, seed=3)
        text = write_graph(generate_instance(p), generator_comment(p))
        assert "SECTION Comment" in text and "PCG64" in text
        assert parse_stp(text) == generate_instance(p)


class TestSolution:
    def test_single_vertex(self):
        text = write_solution(tie_triangle(), SolutionTree.single(1))
        assert "VERTICES 1" in text and "EDGES 0" in text
        assert text.startswith("NETCOST 9\n")

    def test_triangle_optimum(self):
        g = mstg_trap_triangle()
        text = write_solution(g, SolutionTree([1, 2], [2]), lower_bound=7.5, algorithm="exact")
        assert text.splitlines()[0] == "NETCOST 14"
        t, info = parse_solution(text, g)
        assert t == SolutionTree([1, 2], [2])
        assert info == {"netcost": 14.0, "lower_bound": 7.5, "algorithm": "exact"}

    def test_invalid_tree_not_written(self):
        with pytest.raises(StructuralError):
            write_solution(mstg_trap_triangle(), SolutionTree([0, 1, 2], [0]))

    @pytest.mark.parametrize("text", [
        "V 1\nE 1 3\n",
        "VERTICES 2\nV 1\n",
        "V 9\n",
        "NETCOST abc\nV 1\n",
        "FOO 1\n",
    ])
    def test_bad_solutions(self, text):
        g = Graph(3, [0, 1], [1, 2], [1.0, 1.0])
        with pytest.raises(ParseError):
            parse_solution(text, g)


class TestGenerator:
    def test_tree_profile(self):
        g = generate_instance(GeneratorParams(5, 4, seed=1))
        assert g.m == 4 and np.all(g.prizes > 0)

    def test_sparse_prizes(self):
        g = generate_instance(GeneratorParams(1000, 3000, prized_fraction=0.01, seed=2))
        assert int((g.prizes > 0).sum()) == 10

    def test_ranges(self):
        g = generate_instance(GeneratorParams(200, 600, prize_range=(2, 3), cost_range=(5, 6), seed=9))
        assert g.prizes.min() >= 2 and g.prizes.max() <= 3
        assert g.cost.min() >= 5 and g.cost.max() <= 6

    def test_complete_graph(self):
        assert generate_instance(GeneratorParams(8, 28, seed=4)).m == 28

    @pytest.mark.parametrize("kw", [
        dict(vertex_count=5, edge_count=3),
        dict(vertex_count=5, edge_count=11),
        dict(vertex_count=0, edge_count=0),
        dict(vertex_count=5, edge_count=5, prized_fraction=0.0),
        dict(vertex_count=5, edge_count=5, cost_range=(0, 1)),
        dict(vertex_count=5, edge_count=5, prize_range=(3, 1)),
        dict(vertex_count=5, edge_count=5, seed=-1),
    ])
    def test_bad_params(self, kw):
        with pytest.raises(DomainError):
            GeneratorParams(**kw)

    def test_deterministic(self):
        p = GeneratorParams(300, 900, prized_fraction=0.3, seed=77)
        assert write_graph(generate_instance(p)) == write_graph(generate_instance(p))
        q = GeneratorParams(300, 900, prized_fraction=0.3, seed=78)
        assert write_graph(generate_instance(p)) != write_graph(generate_instance(q))

    @settings(max_examples=60, deadline=None)
    @given(n=st.integers(1, 60), extra=st.integers(0, 200), frac=st.floats(0.05, 1.0),
           seed=st.integers(0, 2**64 - 1))
    def test_round_trip(self, n, extra, frac, seed):
        m = min(n - 1 + extra, n * (n - 1) // 2)
        g = generate_instance(GeneratorParams(n, m, frac, seed=seed))
        assert g.m == m
        assert parse_stp(write_graph(g)) == g

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_solution_round_trip(self, seed):
        g = generate_instance(GeneratorParams(30, 60, 0.5, seed=seed))
        t = mstg(g)
        back, info = parse_solution(write_solution(g, t, algorithm="mstg"), g)
        assert back == t
        assert f"{info['netcost']:.9g}" == f"{net_cost(g, t):.9g}"
