from fractions import Fraction

import pytest

from mgx.lib.blowup.blowup import Composition, blowup_value, build_blowup, graph_pattern_sum, heavy_degree_check, \
    optimize_blowup, sum_upper_bound, turan_closed_forms, turan_delta, turan_sum, turan_u_size_range, \
    twin_predecessors, vertex_orbit
from mgx.lib.catalog.catalog import TuranSpec, make_turan_pattern, named_pattern
from mgx.lib.core.multigraph import MultiplicityProfile, edge_product, edge_sum
from mgx.lib.utilities.exceptions import BudgetExceededError, DomainError, InputError, UnsupportedShapeError
from mgx.lib.utilities.utils import comb2

TUR_11 = TuranSpec((1, 1), 2)


def test_blowup_value_matches_built_graph():
    P = make_turan_pattern(TUR_11)
    c = Composition((3, 2))
    G = build_blowup(P, c)
    assert G.n == c.n == 5
    assert blowup_value(P, c) == edge_sum(G, range(5)) == 25
    assert blowup_value(P, c, "product") == edge_product(G, range(5))


def test_blowup_value_empty_parts():
    P = named_pattern("K1_3", 1)
    assert blowup_value(P, (0, 3, 0, 0)) == 0
    assert blowup_value(P, (1, 1, 0, 0), "product").counts == {2: 1}


def test_composition_validation():
    with pytest.raises(InputError):
        Composition((2, -1))
    with pytest.raises(InputError):
        build_blowup(named_pattern("K1_3", 1), (1, 2))


def test_star_blowup_maximum():
    best = optimize_blowup(named_pattern("K1_3", 1), 10)
    assert best.value == 60
    assert best.witness.sizes == (4, 2, 2, 2)
    assert best.certified == "exact"


@pytest.mark.parametrize("n,value", [(2, 3), (3, 8), (4, 15), (5, 25), (6, 37)])
def test_turan_sums(n, value):
    assert turan_sum(TUR_11, n) == value
    assert optimize_blowup(make_turan_pattern(TUR_11), n, n_jobs=1).value == value


@pytest.mark.parametrize("a", [2, 3, 5])
def test_turan_depth_two(a):
    assert turan_sum(TuranSpec((1, 0, 1), a), 5) == 10 * a + 4


def test_turan_delta_is_growth():
    spec = TuranSpec((2, 0, 1), 3)
    for n in range(1, 15):
        assert turan_sum(spec, n + 1) - turan_sum(spec, n) == turan_delta(spec, n)


def test_turan_closed_forms_shapes():
    form = turan_closed_forms(TuranSpec((3,), 2), 7)
    assert form.u_size_range is None
    assert form.sigma_n == turan_sum(TuranSpec((3,), 2), 7)
    assert turan_u_size_range(TUR_11, 3) == (1,)
    with pytest.raises(UnsupportedShapeError):
        turan_closed_forms(TuranSpec((1, 1, 1), 3), 5)
    with pytest.raises(DomainError):
        turan_closed_forms(TuranSpec((1, 0, 1), 1), 5)


def test_turan_light_part_in_range():
    spec = TuranSpec((1, 0, 1), 3)
    P = make_turan_pattern(spec)
    for n in range(2, 12):
        best = optimize_blowup(P, n, n_jobs=1)
        assert best.value == turan_sum(spec, n)
        assert best.witness.sizes[1] in turan_u_size_range(spec, n)


@pytest.mark.parametrize("family", ["K1_2", "K1_3", "P_4", "C_5", "Petersen"])
@pytest.mark.parametrize("s", [2, 5, 8])
def test_graph_pattern_sums(family, s):
    best = optimize_blowup(named_pattern(family, 1), s, n_jobs=1)
    assert best.value == graph_pattern_sum(family, s, 1)


def test_graph_pattern_sum_domain():
    assert graph_pattern_sum("K1_inf", 6, 1) == optimize_blowup(named_pattern("K1_inf", 1), 6).value
    with pytest.raises(DomainError):
        graph_pattern_sum("K1_inf", 6, 2)
    with pytest.raises(InputError):
        graph_pattern_sum("K1_9", 6, 1)


def test_sum_upper_bound():
    assert sum_upper_bound(named_pattern("K1_3", 1), 10) == 60
    assert sum_upper_bound(named_pattern("ambient", 2), 4) == 12


def test_product_objective():
    P = make_turan_pattern(TUR_11)
    best = optimize_blowup(P, 5, "product", n_jobs=1)
    assert best.value.value() == 5832
    local = optimize_blowup(P, 5, "product", "local")
    assert local.certified == "local"
    assert local.value <= best.value


def test_budget():
    with pytest.raises(BudgetExceededError) as info:
        optimize_blowup(named_pattern("C_5", 2), 20, "product", budget=5)
    assert info.value.best.certified == "local"


def test_bad_arguments():
    P = named_pattern("C_5", 1)
    with pytest.raises(InputError):
        optimize_blowup(P, 0)
    with pytest.raises(InputError):
        optimize_blowup(P, 5, mode="greedy")


def test_symmetry_helpers():
    assert twin_predecessors(named_pattern("K1_3", 1)) == [-1, -1, 1, 2]
    assert twin_predecessors(named_pattern("C_5", 1)) == [-1] * 5
    assert vertex_orbit(named_pattern("C_5", 1)) == (0, 1, 2, 3, 4)
    assert vertex_orbit(named_pattern("K1_3", 1)) == (0,)


def test_heavy_degree_check():
    assert heavy_degree_check(TUR_11, n_jobs=1)
    with pytest.raises(UnsupportedShapeError):
        heavy_degree_check(TuranSpec((2,), 2))


@pytest.mark.parametrize("name, a", [("K1_2", 1), ("K1_3", 2), ("K1_4", 1), ("P_4", 1), ("C_4", 2), ("C_5", 1),
                                     ("Petersen", 2), ("Pplus2", 1), ("K1_inf", 1)])
def test_sum_density_non_increasing(name, a):
    ratios = [Fraction(graph_pattern_sum(name, n, a), comb2(n)) for n in range(2, 31)]
    assert all(x >= y for x, y in zip(ratios, ratios[1:]))


@pytest.mark.parametrize("spec", [TUR_11, TuranSpec((3,), 2)])
def test_turan_density_non_increasing(spec):
    ratios = [Fraction(turan_sum(spec, n), comb2(n)) for n in range(2, 31)]
    assert all(x >= y for x, y in zip(ratios, ratios[1:]))


@pytest.mark.parametrize("name, a", [("C_5", 1), ("P_4", 2)])
def test_exact_sum_density_non_increasing(name, a):
    P = named_pattern(name, a)
    ratios = [Fraction(optimize_blowup(P, n).value, comb2(n)) for n in range(2, 15)]
    assert all(x >= y for x, y in zip(ratios, ratios[1:]))


def single_vertex_moves(sizes):
    for u, size in enumerate(sizes):
        if not size:
            continue
        for w in range(len(sizes)):
            if w != u:
                moved = list(sizes)
                moved[u] -= 1
                moved[w] += 1
                yield moved


@pytest.mark.parametrize("objective", ["sum", "product"])
@pytest.mark.parametrize("name, a, n", [("K1_3", 2, 9), ("C_5", 2, 11), ("P_4", 2, 8)])
def test_optimum_is_fixed_under_single_vertex_moves(name, a, n, objective):
    P = named_pattern(name, a)
    best = optimize_blowup(P, n, objective)
    for moved in single_vertex_moves(best.witness.sizes):
        if objective == "sum":
            assert blowup_value(P, moved) <= best.value
        else:
            assert blowup_value(P, moved, "product").compare(best.value) <= 0


@pytest.mark.parametrize("name", ["K1_3", "C_5"])
def test_product_optimum_has_vertex_below_geometric_mean(name):
    n = 9
    P = named_pattern(name, 2)
    best = optimize_blowup(P, n, "product")
    G = build_blowup(P, best.witness)
    log_p = [MultiplicityProfile.from_values(G.mult(v, u) for u in range(n) if u != v).log_value for v in range(n)]
    assert sum(log_p) == pytest.approx(2 * best.value.log_value)
    assert min(log_p) <= 2 * best.value.log_value / n + 1e-12


def test_product_optimum_with_loop_zero_part():
    best = optimize_blowup(named_pattern("K1_inf", 1), 6, "product")
    assert best.value.value() == 2 ** 5
    assert best.witness.sizes == (5, 1)
