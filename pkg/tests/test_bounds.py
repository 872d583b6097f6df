from fractions import Fraction
from math import log, sqrt

import pytest

from mgx.lib.bounds.bounds import averaging_propagate, averaging_test, fk_m, flat_interval, flat_interval_chain, \
    gate_threshold, integer_am_gm_max, known_extremal_value, large_a_gate, turan_growth_checks
from mgx.lib.catalog.catalog import TuranSpec
from mgx.lib.utilities.exceptions import DomainError, InputError, UnsupportedShapeError


def test_integer_am_gm_max():
    assert integer_am_gm_max(10, 23).counts == {2: 7, 3: 3}
    assert integer_am_gm_max(4, 8).counts == {2: 4}
    assert integer_am_gm_max(0, 5).counts == {}
    with pytest.raises(InputError):
        integer_am_gm_max(-1, 3)


def test_averaging_propagate():
    table = averaging_propagate(5, 30, 7)
    assert table.values[6] == 45
    assert table.values[7] == 63
    assert table.provenance[5] == "seed"
    assert table.provenance[7] == "propagated"
    with pytest.raises(InputError):
        averaging_propagate(1, 3, 5)


def test_averaging_test():
    assert averaging_test(lambda n: n * (n - 1) // 2, 3, 12) is None
    assert averaging_test(lambda n: n * n, 3, 6) == 3


@pytest.mark.parametrize("s,q,m", [
    (3, 2, Fraction(1, 2)),
    (2, 0, Fraction(0)),
    (2, 3, Fraction(3)),
    (2, 7, Fraction(7)),
    (4, 2, Fraction(0)),
])
def test_fk_m(s, q, m):
    assert fk_m(s, q) == m


def test_flat_interval():
    fi = flat_interval(2, 2, 5)
    assert (fi.q_low, fi.q_high) == (26, 27)
    assert fi.value == pytest.approx(2 * sqrt(1.5))
    assert fi.log_value == pytest.approx(log(2) + 0.5 * log(1.5))
    with pytest.raises(DomainError):
        flat_interval(3, 2, 6)


@pytest.mark.parametrize("r,a,s", [(2, 1, 5), (2, 2, 7), (3, 2, 9)])
def test_flat_interval_chain(r, a, s):
    passed, failing = flat_interval_chain(r, a, s, 3 * s)
    assert passed and failing is None


def test_large_a_gate():
    result = large_a_gate(1, 1, 1, 2)
    assert result.gate
    assert result.threshold == 2
    assert not result.boundary
    assert result.equiv_b == result.gate
    with pytest.raises(DomainError):
        large_a_gate(1, 1, 2, 2)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_gate_threshold_single_light_block(d):
    assert gate_threshold(1, d) == d * d + d


def test_gate_above_threshold():
    for rd in (1, 2):
        for d in (1, 2):
            a = gate_threshold(rd, d) + 1
            assert large_a_gate(1, rd, d, a).gate


def test_known_extremal_value():
    regimes = {k.regime for k in known_extremal_value(5, 10)}
    assert regimes == {"ambient", "small-a sum"}

    near = [k for k in known_extremal_value(5, 19) if k.regime == "near-complete"]
    assert [k.pattern for k in near] == ["TUR((4),1)"]

    product = [k for k in known_extremal_value(20, 430) if k.regime == "small-a product"]
    assert [k.pattern for k in product] == ["Petersen"]
    assert product[0].log_value == pytest.approx(log(2) + log(27 / 16) / 10)

    assert known_extremal_value(5, 0) is None


@pytest.mark.parametrize("r", [(1, 1), (2, 1), (1, 0, 1), (1, 0, 2)])
def test_turan_growth_checks(r):
    spec = TuranSpec(r, len(r) + 1)
    checks = turan_growth_checks(spec)
    assert checks.strict_growth
    assert checks.exact_range
    assert checks.failures == {}


def test_turan_growth_checks_shape():
    with pytest.raises(UnsupportedShapeError):
        turan_growth_checks(TuranSpec((1, 1, 1), 3))
