import pytest

from mgx.lib.admissibility.admissibility import blowup_sum_range, find_heavy_sets, heavy_set_degrees, is_admissible, \
    self_admissible
from mgx.lib.catalog.catalog import TuranSpec, make_turan_pattern, named_pattern
from mgx.lib.core.multigraph import Multigraph
from mgx.lib.utilities.exceptions import InputError

TUR_11 = make_turan_pattern(TuranSpec((1, 1), 2))


@pytest.mark.parametrize("q,ok", [(15, True), (14, False), (16, True)])
def test_turan_admissibility(q, ok):
    assert is_admissible(TUR_11, 4, q) is ok


def test_petersen_admissibility():
    assert is_admissible(named_pattern("Petersen", 2), 20, 430)
    assert not is_admissible(named_pattern("Petersen", 2), 20, 429)


def test_blowup_sum_range():
    assert blowup_sum_range(named_pattern("K1_3", 1), 10) == (60, 60)
    lower, upper = blowup_sum_range(named_pattern("C_5", 1), 7, exact=False)
    assert lower <= upper


def test_self_admissible():
    assert self_admissible(TUR_11, 4)
    assert self_admissible(named_pattern("P_4", 1), 6)


def test_find_heavy_sets():
    G = Multigraph.constant(4, 2)
    assert find_heavy_sets(G, 3, 6, n_jobs=1) == [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
    assert find_heavy_sets(G, 3, 7, n_jobs=1) == []

    G = Multigraph.from_edges(4, [(0, 1, 3), (2, 3, 3), (1, 2, 1)])
    assert find_heavy_sets(G, 2, 3, n_jobs=1) == [(0, 1), (2, 3)]


def test_heavy_set_degrees():
    G = Multigraph.constant(4, 2)
    assert heavy_set_degrees(G, (0, 1, 2)) == [4, 4, 4]
    with pytest.raises(InputError):
        heavy_set_degrees(G, (0, 4))


def test_bad_sizes():
    with pytest.raises(InputError):
        is_admissible(TUR_11, 1, 3)
    with pytest.raises(InputError):
        find_heavy_sets(Multigraph.constant(3, 1), 4, 3)
