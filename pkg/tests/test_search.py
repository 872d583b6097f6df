import networkx as nx
import pytest

from mgx.lib.catalog.catalog import girth, named_graph
from mgx.lib.search.search import SURVEY_LABEL, canonical_form, canonical_graph, certify_winner, enumerate_graphs, \
    survey
from mgx.lib.utilities.exceptions import BudgetExceededError, InputError


def count(*args, **kwargs):
    return sum(1 for _ in enumerate_graphs(*args, **kwargs))


@pytest.mark.parametrize("args,kwargs,expected", [
    ((5, 2, 3), {}, 2),
    ((4, 3, 3), {"connected_only": False}, 11),
    ((4, 3, 3), {}, 6),
    ((5, 4, 3), {}, 21),
    ((6, 2, 3), {}, 2),
])
def test_enumerate_graph_counts(args, kwargs, expected):
    assert count(*args, **kwargs) == expected


def test_enumerate_graphs_respects_caps():
    for G in enumerate_graphs(7, 3, 5, min_n=1):
        assert max(dict(G.degree()).values(), default=0) <= 3
        assert nx.is_connected(G)
        assert girth(G) >= 5


def test_enumerate_graphs_limits():
    with pytest.raises(BudgetExceededError):
        next(enumerate_graphs(12, 3))
    with pytest.raises(InputError):
        next(enumerate_graphs(0, 3))


def test_canonical_form_is_invariant():
    H = nx.cycle_graph(5)
    relabelled = nx.relabel_nodes(H, {0: 3, 1: 0, 2: 4, 3: 1, 4: 2})
    assert canonical_form(H) == canonical_form(relabelled)
    assert canonical_form(H) != canonical_form(nx.path_graph(5))
    assert nx.is_isomorphic(canonical_graph(named_graph("Petersen")), named_graph("Petersen"))


@pytest.mark.slow
def test_petersen_is_the_only_cubic_girth5_graph_on_10_vertices():
    cubic = [G for G in enumerate_graphs(10, 3, 5) if all(deg == 3 for _, deg in G.degree())]
    assert len(cubic) == 1
    assert nx.is_isomorphic(cubic[0], named_graph("Petersen"))


def test_survey_small_a_sum():
    table = survey(6, 1, [15, 20, 21], max_n=4, max_deg=3, n_jobs=1)
    assert table["best_density"].tolist() == ["1", "8/7", "6/5"]
    assert table["witness"].tolist() == ["ambient", canonical_form(nx.path_graph(3)),
                                         canonical_form(nx.star_graph(3))]
    assert table.attrs["label"] == SURVEY_LABEL
    assert not table["experimental"].any()


def test_survey_extra_patterns():
    table = survey(6, 1, [21], max_n=3, max_deg=2, extra_patterns=["K1_3"], n_jobs=1)
    row = table.iloc[0]
    assert row["witness"] == "K1_3"
    assert row["experimental"]


def test_survey_no_admissible_pattern():
    table = survey(4, 2, [5], max_n=3, max_deg=2, n_jobs=1)
    assert table["best_density"].tolist() == [None]
    assert table["tie_count"].tolist() == [0]


def test_survey_bad_input():
    with pytest.raises(InputError):
        survey(6, 1, [], max_n=3, max_deg=2)
    with pytest.raises(InputError):
        survey(6, 1, [15], max_n=3, max_deg=2, objective="max")


def test_certify_winner():
    assert certify_winner("ambient", 2)
    assert certify_winner(canonical_form(named_graph("C_6")), 2)


def test_certify_experiment_winner():
    assert certify_winner("K1_3", 2)
    assert certify_winner("K1_inf", 1)
    with pytest.raises(InputError):
        certify_winner("not a pattern", 2)
