from bisect import bisect_left
from collections import namedtuple
from fractions import Fraction
from math import exp, log
from typing import Callable, List, Optional, Tuple

from ..blowup.blowup import graph_pattern_sum, turan_closed_forms, turan_delta, turan_sum
from ..catalog.catalog import TuranSpec
from ..core.multigraph import MultiplicityProfile
from ..density.density import turan_asymptotics
from ..logging import get_logger
from ..utilities.config import DEFAULT_PARAMS
from ..utilities.exceptions import DomainError, InputError, UnsupportedShapeError
from ..utilities.utils import comb2

logger = get_logger(__name__)

BoundTable = namedtuple("BoundTable", ["base_s", "values", "provenance"])

FlatInterval = namedtuple("FlatInterval", ["r", "a", "s", "q_low", "q_high", "value", "log_value"])

GateResult = namedtuple("GateResult",
                        ["gate", "equiv_b", "equiv_c", "margin_b", "margin_c", "boundary", "threshold"])

KnownValue = namedtuple("KnownValue", ["regime", "objective", "value", "log_value", "pattern"])

GrowthChecks = namedtuple("GrowthChecks", ["spec", "n_max", "strict_growth", "small_s_first", "small_s_second",
                                           "exact_range", "failures"])


def integer_am_gm_max(n: int, total: int) -> MultiplicityProfile:
    """
    Largest product of n non-negative integers summing to total: a^(n - t) (a + 1)^t with total = a n + t
    """
    if n < 0 or total < 0:
        raise InputError("Need n >= 0 and total >= 0")
    if n == 0:
        return MultiplicityProfile({})
    a, t = divmod(total, n)
    return MultiplicityProfile({a: n - t, a + 1: t})


def averaging_propagate(s: int, value: int, n_max: int) -> BoundTable:
    """
    Push an upper bound on the s-vertex maximum to n vertices with floor((n + 1) f(n) / (n - 1))

    Args:
        s: seed vertex count, at least 2
        value: seed bound
        n_max: last vertex count in the table

    Returns:
        BoundTable
    """
    if s < 2:
        raise InputError("Averaging needs s >= 2")
    if value < 0:
        raise InputError("Seed value must be non-negative")
    values = {s: int(value)}
    provenance = {s: "seed"}
    for n in range(s, n_max):
        values[n + 1] = ((n + 1) * values[n]) // (n - 1)
        provenance[n + 1] = "propagated"
    return BoundTable(s, values, provenance)


def averaging_test(f: Callable[[int], int], s: int, n_max: int) -> Optional[int]:
    """
    Check (n + 1) f(n) / (n - 1) < f(n + 1) + 1 for s <= n < n_max

    Returns:
        the first n where it fails, None when f survives the whole range
    """
    if s < 2:
        raise InputError("Averaging needs s >= 2")
    for n in range(s, n_max):
        if (n + 1) * f(n) >= (f(n + 1) + 1) * (n - 1):
            return n
    return None


def _fk_sum(m: Fraction, s: int) -> int:
    return sum(1 + (m.numerator * i) // m.denominator for i in range(1, s))


def fk_m(s: int, q: int) -> Fraction:
    """
    m(s, q) = min{m : sum_{1 <= i < s} floor(1 + m i) > q}.

    The sum is a right-continuous step function jumping only at m = j / i, so the minimum is found by binary
    search over those breakpoints.
    """
    if s < 2 or q < 0:
        raise InputError("Need s >= 2 and q >= 0")
    if s - 1 > q:
        return Fraction(0)
    # m = q already gives a sum of at least (s - 1)(q + 1) > q
    points = sorted({Fraction(j, i) for i in range(1, s) for j in range(0, i * q + 1)})
    lo, hi = 0, len(points) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _fk_sum(points[mid], s) > q:
            hi = mid
        else:
            lo = mid + 1
    return points[lo]


def flat_interval(r: int, a: int, s: int) -> FlatInterval:
    """
    q-range over which ex_Pi(s, q) stays at a ((a + 1) / a)^((r - 1) / r)

    Args:
        r: number of parts of the Turan pattern TUR((r), a)
        a: ambient multiplicity
        s: set size, at least 2 r + 1

    Returns:
        FlatInterval with q_low = Sigma_T(s), q_high = q_low + floor((s - 1) / r) - 1
    """
    if r < 1 or a < 1:
        raise InputError("Need r >= 1 and a >= 1")
    if s < 2 * r + 1:
        raise DomainError(f"Flat intervals need s >= 2r + 1 = {2 * r + 1}, got {s}")
    q_low = turan_closed_forms(TuranSpec((r,), a), s).sigma_n
    q_high = q_low + (s - 1) // r - 1
    log_value = log(a) + (r - 1) / r * log((a + 1) / a)
    return FlatInterval(r, a, s, q_low, q_high, exp(log_value), log_value)


def gate_threshold(rd: int, d: int) -> int:
    w = 2 * rd - 1
    return d * w * (d * w + 1) + (d - 1) * w * (rd - 1) * (rd * (d - 1) * w + 2 * rd)


def large_a_gate(r0: int, rd: int, d: int, a: int, margin: Optional[float] = None) -> GateResult:
    """
    Polynomial gate (a + 1)^(rd(d-1)(2rd-1) + 2rd) (a - d)^(2rd-1) (a - d + 1)^((2rd-1)(rd-1)) > a^(rd d(2rd-1) + 2rd)
    together with its two x_star forms.

    The gate is decided with exact integers. The x_star forms are evaluated in floating point; margins closer
    to zero than `margin` are flagged as boundary.

    Args:
        r0: heavy block size
        rd: light block size
        d: depth
        a: ambient multiplicity, at least d + 1
        margin: boundary margin

    Returns:
        GateResult
    """
    if min(r0, rd, d) < 1:
        raise InputError("r0, rd and d must be positive")
    if a <= d:
        raise DomainError(f"The gate needs a >= d + 1, got a = {a}, d = {d}")
    margin = DEFAULT_PARAMS["boundary_margin"] if margin is None else margin
    w = 2 * rd - 1
    lhs = (a + 1) ** (rd * (d - 1) * w + 2 * rd) * (a - d) ** w * (a - d + 1) ** (w * (rd - 1))
    rhs = a ** (rd * d * w + 2 * rd)
    gate = lhs > rhs

    big_l = d * w + 2
    up = log((a + 1) / a)
    ratio = (rd * up + log(a / (a - d)) + (rd - 1) * log(a / (a - d + 1))) / (rd * up)
    margin_b = big_l - w * ratio
    x_star = turan_asymptotics(r0, rd, d, a).x_star
    margin_c = big_l / (r0 * big_l + w) - (1 - rd * x_star) / r0
    boundary = abs(margin_b) < margin or abs(margin_c) < margin
    if boundary:
        logger.info(f"Gate at r0={r0}, rd={rd}, d={d}, a={a} sits within {margin} of equality")
    return GateResult(gate, margin_b > 0, margin_c > 0, margin_b, margin_c, boundary, gate_threshold(rd, d))


def _product_known(regime: str, value_log: float, pattern: str) -> KnownValue:
    return KnownValue(regime, "product", exp(value_log), value_log, pattern)


def known_extremal_value(s: int, q: int) -> Optional[List[KnownValue]]:
    """
    ex_Sigma(s, q) / ex_Pi(s, q) in the regimes where they are settled

    Returns:
        every matching KnownValue, None when q lies in no settled regime
    """
    if s < 2 or q < 0:
        raise InputError("Need s >= 2 and q >= 0")
    pairs = comb2(s)
    a = q // pairs
    found = []

    if a >= 1 and q - a * pairs <= s - 2:
        found.append(_product_known("ambient", log(a), f"all-{a}"))
    t = (a + 1) * pairs - q
    if a >= 1 and 1 <= t <= s // 2:
        r = s - t
        found.append(_product_known("near-complete", log(a) + (r - 1) / r * log((a + 1) / a), f"TUR(({r}),{a})"))
    if a >= 1:
        for r in range(2, (s - 1) // 2 + 1):
            fi = flat_interval(r, a, s)
            if fi.q_low <= q <= fi.q_high:
                found.append(_product_known("flat", fi.log_value, f"TUR(({r}),{a})"))

    if a == 1:
        edges = [pairs, graph_pattern_sum("K1_2", s, 1), graph_pattern_sum("P_4", s, 1),
                 graph_pattern_sum("K1_3", s, 1), graph_pattern_sum("K1_4", s, 1)]
        values = [Fraction(1), Fraction(8, 7), Fraction(7, 6), Fraction(6, 5)]
        patterns = ["all-1", "K1_2", "P_4", "C5 family"]
        for low, high, value, pattern in zip(edges, edges[1:], values, patterns):
            if low <= q < high:
                found.append(KnownValue("small-a sum", "sum", value, log(value), pattern))
    if a == 2:
        edges = [2 * pairs, graph_pattern_sum("P_4", s, 2), graph_pattern_sum("K1_3", s, 2),
                 graph_pattern_sum("K1_4", s, 2)]
        logs = [log(2), log(2) + log(9 / 8) / 6, log(2) + log(27 / 16) / 10]
        patterns = ["all-2", "C_6", "Petersen"]
        for low, high, value_log, pattern in zip(edges, edges[1:], logs, patterns):
            if low <= q < high:
                found.append(_product_known("small-a product", value_log, pattern))
    return found or None


def turan_growth_checks(spec: TuranSpec, n_max: Optional[int] = None) -> GrowthChecks:
    """
    Growth bounds on Sigma_T(n + 1) - Sigma_T(n) for r = (r0, 0, ..., 0, rd), and the exact range where the
    averaging chain seeded at s0 meets the blow-up values

    Args:
        spec: two-block Turan shape
        n_max: last n checked, 3 s0 by default

    Returns:
        GrowthChecks with the first failing n of every check in `failures`
    """
    if not spec.is_two_block:
        raise UnsupportedShapeError(f"Growth checks need r = (r0, 0, ..., 0, rd), got {spec.r}")
    a, r0, rd, d = spec.a, spec.r0, spec.rd, spec.d
    s0, s1 = spec.s0, spec.s1
    n_max = 3 * s0 if n_max is None else n_max
    failures = {}

    slope = Fraction(a + 1) - Fraction(d * rd + 1, s0 - 1)
    for n in range(1, n_max + 1):
        if not turan_delta(spec, n) < slope * n + 1:
            failures.setdefault("strict_growth", n)

    first_cap = 1 - Fraction(d * (rd - 1) + 1, r0 * (d * (rd - 1) + 1) + rd - 1)
    second_cap = 1 - Fraction(d * (2 * rd - 1) + 2, r0 * (d * (2 * rd - 1) + 2) + 2 * rd - 1)
    for s_prime in range(2, s1):
        excess = Fraction(turan_delta(spec, s_prime) - 1 - a * s_prime, s_prime)
        if s_prime < s0 and excess > first_cap:
            failures.setdefault("small_s_first", s_prime)
        if s_prime >= s0 and excess > second_cap:
            failures.setdefault("small_s_second", s_prime)

    last = 2 * s0 - d * r0 - 1
    table = averaging_propagate(s0, turan_sum(spec, s0), last)
    for n in range(s0, last + 1):
        if table.values[n] != turan_sum(spec, n):
            failures.setdefault("exact_range", n)

    return GrowthChecks(
        spec=spec,
        n_max=n_max,
        strict_growth="strict_growth" not in failures,
        small_s_first="small_s_first" not in failures,
        small_s_second="small_s_second" not in failures,
        exact_range="exact_range" not in failures,
        failures=failures,
    )


def flat_interval_chain(r: int, a: int, s: int, n_max: int) -> Tuple[bool, Optional[int]]:
    """
    Induction check behind the flat intervals: f(n) = Sigma_T(n) + floor((n - 1) / r) - 1 passes the averaging
    test from s up to n_max, and f(s) is the top of the interval

    Returns:
        (passed, first failing n)
    """
    spec = TuranSpec((r,), a)
    fi = flat_interval(r, a, s)

    def f(n):
        return turan_sum(spec, n) + (n - 1) // r - 1

    if f(s) != fi.q_high:
        return False, s
    failing = averaging_test(f, s, n_max)
    return failing is None, failing
