import pytest

from mgx.lib.core.multigraph import edge_product, edge_sum, is_sq_graph
from mgx.lib.oracle.oracle import brute_force_extremal
from mgx.lib.utilities.exceptions import BudgetExceededError, InputError


def test_sum_small():
    result = brute_force_extremal(3, 3, 3, n_jobs=1)
    assert result.value == 3
    assert result.exact
    assert edge_sum(result.witness, range(3)) == 3


@pytest.mark.parametrize("n,s,q,value", [(4, 3, 6, 64), (4, 2, 3, 729), (3, 2, 1, 1)])
def test_product_small(n, s, q, value):
    result = brute_force_extremal(n, s, q, objective="product", n_jobs=1)
    assert result.value.value() == value
    assert is_sq_graph(result.witness, s, q).ok
    assert edge_product(result.witness, range(n)) == result.value


def test_sum_matches_blowup_bound():
    # every triple of K_4 carries at most 4: the optimum is 8
    result = brute_force_extremal(4, 3, 4, n_jobs=1)
    assert result.value == 8
    assert is_sq_graph(result.witness, 3, 4).ok


def test_monotone_in_q():
    values = [brute_force_extremal(4, 3, q, objective="product", n_jobs=1).value for q in range(3, 8)]
    assert all(low <= high for low, high in zip(values, values[1:]))


def test_witness_degrees_non_increasing():
    G = brute_force_extremal(4, 3, 5, n_jobs=1).witness
    degrees = G.degrees().tolist()
    assert degrees == sorted(degrees, reverse=True)


def test_parallel_agrees():
    serial = brute_force_extremal(4, 3, 5, objective="product", n_jobs=1)
    parallel = brute_force_extremal(4, 3, 5, objective="product", n_jobs=2)
    assert serial.value == parallel.value
    assert serial.witness == parallel.witness


def test_bad_input():
    with pytest.raises(InputError):
        brute_force_extremal(2, 3, 3)
    with pytest.raises(InputError):
        brute_force_extremal(4, 3, 3, objective="max")


def test_budget():
    with pytest.raises(BudgetExceededError) as info:
        brute_force_extremal(5, 4, 15, objective="product", budget=50, n_jobs=1)
    assert not info.value.best.exact


@pytest.mark.slow
def test_product_five_vertices():
    result = brute_force_extremal(5, 4, 15, objective="product", n_jobs=1)
    assert result.value.value() >= 5832
    assert is_sq_graph(result.witness, 4, 15).ok
