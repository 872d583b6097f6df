import networkx as nx
import pytest

from mgx.lib.catalog.catalog import TuranSpec, girth, lift_graph_pattern, load_pattern, make_turan_pattern, \
    max_degree, named_graph, named_pattern, pattern_from_json, save_pattern, turan_order_compare
from mgx.lib.utilities.exceptions import DomainError, InputError


def test_turan_pattern_multiplicities():
    P = make_turan_pattern(TuranSpec((1, 0, 1), 3))
    assert P.k == 2
    # block 0 keeps loop a, block 2 loop a - 2, pair a + 1 between them
    assert P.loops == (3, 1)
    assert P.pair(0, 1) == 4


def test_turan_pattern_needs_a_at_least_d():
    with pytest.raises(DomainError):
        make_turan_pattern(TuranSpec((1, 0, 1), 1))
    assert not TuranSpec((1, 0, 1), 1).valid


@pytest.mark.parametrize("r", [(), (0, 1), (1, 0), (1, -1, 1)])
def test_turan_spec_rejects_bad_blocks(r):
    with pytest.raises(InputError):
        TuranSpec(r, 2)


def test_turan_spec_shapes():
    spec = TuranSpec.two_block(2, 1, 3, 4)
    assert spec.r == (2, 0, 0, 1)
    assert spec.d == 3 and spec.R == 3
    assert spec.is_two_block and not spec.is_single_block
    assert spec.s0 == 2 + 1 + 3 * 2 * 1 + 1
    assert TuranSpec((3,), 2).s0 == 4
    assert not TuranSpec((1, 1, 1), 2).is_two_block


def test_turan_order():
    assert turan_order_compare(TuranSpec((2,), 1), TuranSpec((1,), 2)) == -1
    assert turan_order_compare(TuranSpec((1, 2), 2), TuranSpec((2, 1), 2)) == -1
    assert turan_order_compare(TuranSpec((1,), 2), TuranSpec((1, 0, 1), 2)) == -1
    assert turan_order_compare(TuranSpec((1, 1), 2), TuranSpec((1, 1), 2)) == 0


def test_lift_graph_pattern():
    P = lift_graph_pattern(nx.path_graph(3), 2)
    assert P.loops == (1, 1, 1)
    assert P.pair(0, 1) == 3
    assert P.pair(0, 2) == 2
    with pytest.raises(DomainError):
        lift_graph_pattern(nx.path_graph(3), 0)


@pytest.mark.parametrize("name,n,m,deg,g", [
    ("K1_3", 4, 3, 3, float("inf")),
    ("C_5", 5, 5, 2, 5),
    ("Petersen", 10, 15, 3, 5),
    ("Clebsch", 16, 40, 5, 4),
    ("H26", 26, 52, 4, 6),
    ("H9", 9, 12, 3, 5),
])
def test_named_graphs(name, n, m, deg, g):
    H = named_graph(name)
    assert H.number_of_nodes() == n
    assert H.number_of_edges() == m
    assert max_degree(H) == deg
    assert girth(H) == g


def test_named_graph_unknown():
    with pytest.raises(InputError):
        named_graph("Heawood")
    with pytest.raises(InputError):
        named_graph("C_2")


def test_named_patterns():
    assert named_pattern("ambient", 3).loops == (3,)
    P = named_pattern("K1_inf", 1)
    assert P.loops == (1, 0)
    assert P.pair(0, 1) == 2
    assert named_pattern("Pplus2", 2).pair(0, 1) == 4


def test_pattern_from_json_shorthands():
    assert pattern_from_json({"turan": {"r": [1, 1], "a": 2}}) == make_turan_pattern(TuranSpec((1, 1), 2))
    assert pattern_from_json('{"named": "C_5", "a": 2}') == named_pattern("C_5", 2)
    P = pattern_from_json({"graph": {"vertices": 3, "edges": [[0, 1], [1, 2]]}, "a": 2})
    assert P == lift_graph_pattern(nx.path_graph(3), 2)
    with pytest.raises(InputError):
        pattern_from_json("{not json")
    with pytest.raises(InputError):
        pattern_from_json({"turan": {"a": 2}})


def test_pattern_file(tmp_path):
    P = named_pattern("P_4", 1)
    path = str(tmp_path / "p4.json")
    save_pattern(P, path)
    assert load_pattern(path) == P
    with pytest.raises(InputError):
        load_pattern(str(tmp_path / "missing.json"))
