import re
from collections import namedtuple
from fractions import Fraction
from math import floor, log
from multiprocessing import Pool
from typing import List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from networkx.algorithms import isomorphism as iso

from ..catalog.catalog import C5_FAMILY, TuranSpec, make_turan_pattern
from ..core.multigraph import Multigraph, MultiplicityProfile, Pattern
from ..density.density import log_adjacency, pi_density, sigma_density
from ..logging import get_logger
from ..utilities.config import DEFAULT_PARAMS, get_n_jobs
from ..utilities.exceptions import BudgetExceededError, DomainError, InputError, UnsupportedShapeError
from ..utilities.utils import binomial, comb2

logger = get_logger(__name__)

BlowupOptimum = namedtuple("BlowupOptimum", ["objective", "value", "witness", "certified", "nodes"])

TuranClosedForm = namedtuple("TuranClosedForm", ["n", "sigma_n", "delta_n", "u_size_range"])

# automorphism orbits are only searched on small patterns
_ORBIT_MAX_VERTICES = 10
_LOG_SLACK = 1e-9


class Composition(namedtuple("Composition", ["sizes"])):
    """
    Part sizes of a blow-up, one per pattern vertex
    """

    __slots__ = ()

    def __new__(cls, sizes: Sequence[int]):
        sizes = tuple(int(x) for x in sizes)
        if any(x < 0 for x in sizes):
            raise InputError(f"Part sizes must be non-negative, got {sizes}")
        return super().__new__(cls, sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    def to_dict(self) -> dict:
        return {"sizes": list(self.sizes), "n": self.n}


def _as_composition(P: Pattern, c) -> Composition:
    c = c if isinstance(c, Composition) else Composition(c)
    if len(c.sizes) != P.k:
        raise InputError(f"Composition has {len(c.sizes)} parts, pattern has {P.k} vertices")
    return c


def build_blowup(P: Pattern, c) -> Multigraph:
    """
    Blow-up of P with part sizes c, parts laid out in pattern-vertex order

    Args:
        P: pattern
        c: Composition or sequence of part sizes

    Returns:
        Multigraph on sum(c) vertices
    """
    c = _as_composition(P, c)
    labels = np.repeat(np.arange(P.k), c.sizes)
    return Multigraph(P.adjacency[np.ix_(labels, labels)])


def blowup_value(P: Pattern, c, objective: str = "sum") -> Union[int, MultiplicityProfile]:
    """
    Edge sum (or product profile) of the blow-up, evaluated from the composition alone
    """
    c = _as_composition(P, c)
    sizes = c.sizes
    A = P.adjacency
    if objective == "sum":
        total = 0
        for i in range(P.k):
            if sizes[i]:
                total += int(A[i, i]) * comb2(sizes[i])
                for j in range(i + 1, P.k):
                    total += int(A[i, j]) * sizes[i] * sizes[j]
        return total
    if objective == "product":
        counts = {}
        for i in range(P.k):
            if sizes[i] > 1:
                m = int(A[i, i])
                counts[m] = counts.get(m, 0) + comb2(sizes[i])
            for j in range(i + 1, P.k):
                if sizes[i] and sizes[j]:
                    m = int(A[i, j])
                    counts[m] = counts.get(m, 0) + sizes[i] * sizes[j]
        return MultiplicityProfile(counts)
    raise InputError(f"objective is sum or product, got {objective!r}")


def sum_upper_bound(P: Pattern, n: int, sigma: Optional[Fraction] = None) -> int:
    """
    floor(sigma_P n^2 / 2 - c n / 2) with c the smallest loop; sharp when every loop equals c
    and n times an optimal weighting is integral
    """
    sigma = sigma_density(P).value if sigma is None else Fraction(sigma)
    return floor(sigma * n * n / 2 - Fraction(min(P.loops) * n, 2))


def graph_pattern_sum(family: str, s: int, a: int) -> int:
    """
    Closed-form blow-up edge-sum maxima of the small graph patterns on s vertices

    Args:
        family: K1_l (l in 2..4), P_l (l >= 4), C_l (l >= 3), Pplus2, K1_inf (a = 1) or a member of the C5 family
        s: number of vertices
        a: ambient multiplicity

    Returns:
        Sigma of the lifted pattern at s
    """
    if s < 1 or a < 1:
        raise InputError("Need s >= 1 and a >= 1")
    base = a * comb2(s)
    half = Fraction(s, 2)
    if family in C5_FAMILY:
        return base + floor(Fraction(s * s, 10) + half)
    if family == "Pplus2":
        return base + floor(Fraction(s * s, 4) + half)
    if family == "K1_inf":
        if a != 1:
            raise DomainError("The K1_inf closed form is stated for a = 1 only")
        return comb2(s) + floor(Fraction(s * s, 6) + Fraction(s, 6))
    match = re.fullmatch(r"(K1_|P_|C_)(\d+)", family)
    if match is None:
        raise InputError(f"No closed form for {family!r}")
    kind, size = match.group(1), int(match.group(2))
    if kind == "K1_" and 2 <= size <= 4:
        return base + floor(Fraction((size - 1) * s * s, 6 * size + 2) + half)
    if kind == "P_" and size == 3:
        return graph_pattern_sum("K1_2", s, a)
    if (kind == "P_" and size >= 4) or (kind == "C_" and size >= 6):
        return base + floor(Fraction(s * s, 12) + half)
    if kind == "C_" and 3 <= size <= 5:
        return base + floor(Fraction(s * s, 2 * size) + half)
    raise InputError(f"No closed form for {family!r}")


def twin_predecessors(P: Pattern) -> List[int]:
    """
    For every vertex, the previous vertex it can be swapped with by an automorphism of P, -1 if none.

    u and v are twins when loop(u) = loop(v) and pair(u, t) = pair(v, t) for every other t.
    """
    A = P.adjacency
    out = []
    for v in range(P.k):
        prev = -1
        for u in range(v - 1, -1, -1):
            if A[u, u] != A[v, v]:
                continue
            others = [t for t in range(P.k) if t not in (u, v)]
            if np.array_equal(A[u, others], A[v, others]):
                prev = u
                break
        out.append(prev)
    return out


def _marked_graph(P: Pattern, marked: int) -> nx.Graph:
    G = nx.Graph()
    for v in range(P.k):
        G.add_node(v, loop=P.loop(v), mark=v == marked)
    for u in range(P.k):
        for v in range(u + 1, P.k):
            G.add_edge(u, v, mult=int(P.adjacency[u, v]))
    return G


def vertex_orbit(P: Pattern, v: int = 0) -> Tuple[int, ...]:
    """
    Orbit of v under the automorphisms of P, by VF2 with v marked
    """
    node_match = iso.categorical_node_match(["loop", "mark"], [0, False])
    edge_match = iso.categorical_edge_match("mult", 0)
    base = _marked_graph(P, v)
    orbit = []
    for u in range(P.k):
        if u == v or nx.is_isomorphic(base, _marked_graph(P, u), node_match=node_match, edge_match=edge_match):
            orbit.append(u)
    return tuple(orbit)


def _canonical_sizes(sizes: Sequence[int], twins: Sequence[int]) -> Tuple[int, ...]:
    """
    Sort sizes non-increasingly inside every twin class
    """
    sizes = list(sizes)
    classes = {}
    for v, p in enumerate(twins):
        root = v if p < 0 else classes[p]
        classes[v] = root
    members = {}
    for v, root in classes.items():
        members.setdefault(root, []).append(v)
    for group in members.values():
        vals = sorted((sizes[v] for v in group), reverse=True)
        for v, x in zip(group, vals):
            sizes[v] = x
    return tuple(sizes)


def _round_weighting(weighting: Sequence, n: int) -> List[int]:
    """
    Largest-remainder rounding of n * weighting
    """
    scaled = [Fraction(w) * n if isinstance(w, (int, Fraction)) else float(w) * n for w in weighting]
    sizes = [int(floor(x)) for x in scaled]
    order = sorted(range(len(scaled)), key=lambda i: (-(scaled[i] - sizes[i]), i))
    for i in order[:n - sum(sizes)]:
        sizes[i] += 1
    return sizes


def _local_sum(P: Pattern, sizes: List[int]) -> List[int]:
    A = P.adjacency.astype(np.int64)
    c = np.array(sizes, dtype=np.int64)
    while True:
        Ac = A @ c
        best_gain, best_move = 0, None
        for u in range(P.k):
            if not c[u]:
                continue
            for w in range(P.k):
                if w == u:
                    continue
                # degree of a vertex moved from part u to part w, minus its degree now
                gain = int(Ac[w] - A[w, u] - Ac[u] + A[u, u])
                if gain > best_gain:
                    best_gain, best_move = gain, (u, w)
        if best_move is None:
            return c.tolist()
        u, w = best_move
        c[u] -= 1
        c[w] += 1


def _local_product(P: Pattern, sizes: List[int]) -> List[int]:
    current = blowup_value(P, sizes, "product")
    while True:
        best, best_sizes = current, None
        for u in range(P.k):
            if not sizes[u]:
                continue
            for w in range(P.k):
                if w == u:
                    continue
                cand = list(sizes)
                cand[u] -= 1
                cand[w] += 1
                value = blowup_value(P, cand, "product")
                if value.compare(best) > 0:
                    best, best_sizes = value, cand
        if best_sizes is None:
            return sizes
        sizes, current = best_sizes, best


def _local_optimum(P: Pattern, n: int, objective: str) -> List[int]:
    if objective == "sum":
        weighting = sigma_density(P).weighting
        return _local_sum(P, _round_weighting(weighting, n))
    weighting = pi_density(P, cross_check=False).weighting
    return _local_product(P, _round_weighting(weighting, n))


class _BudgetHit(Exception):
    pass


class CompositionSearch:
    """
    Branch and bound over compositions of n into k parts.

    Parts are fixed in vertex order. Sizes are non-increasing inside twin classes and no vertex in the
    automorphism orbit of vertex 0 outgrows part 0. The suffix bound is the quadratic-form bound of the
    remaining subpattern plus the best linear gain from the parts already placed.
    """

    def __init__(self, P: Pattern, n: int, objective: str, budget: int, lower=None):
        self.P = P
        self.n = n
        self.k = P.k
        self.objective = objective
        self.budget = budget
        self.A = P.adjacency.tolist()
        self.loops = list(P.loops)
        self.twins = twin_predecessors(P)
        self.orbit0 = set(vertex_orbit(P, 0)) if P.k <= _ORBIT_MAX_VERTICES else {0}
        self.nodes = 0

        if objective == "sum":
            self._suffix = []
            for i in range(self.k):
                sub = P.subpattern(range(i, self.k))
                sigma = sigma_density(sub).value
                self._suffix.append((sigma.numerator, sigma.denominator, min(sub.loops)))
            self.best_value = -1 if lower is None else lower
        else:
            self.L = log_adjacency(P).tolist()
            self._suffix = []
            for i in range(self.k):
                sub = P.subpattern(range(i, self.k))
                if min(sub.adjacency.ravel()) >= 1:
                    pi = pi_density(sub, cross_check=False).value
                    self._suffix.append(("quadratic", pi, log(min(sub.loops))))
                else:
                    top = sub.max_multiplicity()
                    self._suffix.append(("trivial", log(top) if top > 0 else float("-inf"), None))
            self.best_value = lower
        self.best_sizes = None

    def _cap(self, i: int, m: int, sizes: List[int]) -> int:
        hi = m
        p = self.twins[i]
        if p >= 0:
            hi = min(hi, sizes[p])
        if i > 0 and i in self.orbit0:
            hi = min(hi, sizes[0])
        return hi

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetHit()

    def _sum_suffix(self, i: int, m: int) -> int:
        num, den, low = self._suffix[i]
        return (num * m * m - den * low * m) // (2 * den)

    def _dfs_sum(self, i: int, m: int, f_pre: int, b: List[int], sizes: List[int]):
        self._tick()
        hi = self._cap(i, m, sizes)
        if i == self.k - 1:
            if m <= hi:
                self._leaf_sum(f_pre + b[i] * m + self.loops[i] * comb2(m), sizes + [m])
            return
        if m and f_pre + m * max(b[i:]) + self._sum_suffix(i, m) < self.best_value:
            return
        row = self.A[i]
        for c in range(hi + 1):
            f = f_pre + b[i] * c + self.loops[i] * comb2(c)
            nb = [bj + row[j] * c for j, bj in enumerate(b)] if c else b
            sizes.append(c)
            self._dfs_sum(i + 1, m - c, f, nb, sizes)
            sizes.pop()

    def _leaf_sum(self, value: int, sizes: List[int]):
        if value > self.best_value or (value == self.best_value and self.best_sizes is None):
            self.best_value, self.best_sizes = value, tuple(sizes)

    def _product_suffix(self, i: int, m: int) -> float:
        if m < 2:
            return 0.0
        kind, value, low = self._suffix[i]
        if kind == "quadratic":
            return value * m * m / 2 - low * m / 2 + _LOG_SLACK * m * m
        return comb2(m) * value if value != float("-inf") else float("-inf")

    def _dfs_product(self, i: int, m: int, f_pre: float, b: List[float], sizes: List[int]):
        self._tick()
        hi = self._cap(i, m, sizes)
        if i == self.k - 1:
            if m <= hi:
                self._leaf_product(sizes + [m])
            return
        best_log = self.best_value.log_value if self.best_value is not None else float("-inf")
        if m and best_log > float("-inf"):
            linear = m * max(b[i:])
            if f_pre + linear + self._product_suffix(i, m) < best_log - _LOG_SLACK * max(1.0, abs(best_log)):
                return
        row = self.L[i]
        for c in range(hi + 1):
            f = f_pre
            nb = b
            if c:
                f += b[i] * c
                if c > 1:
                    f += self.L[i][i] * comb2(c)
                nb = [bj + row[j] * c for j, bj in enumerate(b)]
            sizes.append(c)
            self._dfs_product(i + 1, m - c, f, nb, sizes)
            sizes.pop()

    def _leaf_product(self, sizes: List[int]):
        value = blowup_value(self.P, sizes, "product")
        if self.best_value is None:
            self.best_value, self.best_sizes = value, tuple(sizes)
            return
        cmp = value.compare(self.best_value)
        if cmp > 0 or (cmp == 0 and self.best_sizes is None):
            self.best_value, self.best_sizes = value, tuple(sizes)

    def __call__(self, first: int) -> bool:
        """
        Search every composition with part 0 of size `first`

        Returns:
            False when the node budget ran out
        """
        try:
            self._tick()
            if self.objective == "sum":
                row = self.A[0]
                b = [row[j] * first for j in range(self.k)]
                if self.k == 1:
                    if first == self.n:
                        self._leaf_sum(self.loops[0] * comb2(first), [first])
                    return True
                self._dfs_sum(1, self.n - first, self.loops[0] * comb2(first), b, [first])
            else:
                if self.k == 1:
                    if first == self.n:
                        self._leaf_product([first])
                    return True
                f = self.L[0][0] * comb2(first) if first > 1 else 0.0
                row = self.L[0]
                b = [row[j] * first for j in range(self.k)] if first else [0.0] * self.k
                self._dfs_product(1, self.n - first, f, b, [first])
        except _BudgetHit:
            return False
        return True


def _search_branch(search: CompositionSearch, first: int):
    done = search(first)
    return search.best_value, search.best_sizes, search.nodes, done


def _better(objective: str, value, sizes, best_value, best_sizes) -> bool:
    if sizes is None:
        return False
    if best_sizes is None:
        return True
    if objective == "sum":
        cmp = (value > best_value) - (value < best_value)
    else:
        cmp = value.compare(best_value)
    return cmp > 0 or (cmp == 0 and sizes < best_sizes)


def optimize_blowup(P: Pattern, n: int, objective: str = "sum", mode: str = "exact",
                    budget: Optional[int] = None, n_jobs: Optional[int] = None) -> BlowupOptimum:
    """
    Sigma_P(n) or Pi_P(n) with a witness composition.

    Local mode rounds an optimal weighting and applies improving single-vertex moves until none is left.
    Exact mode first checks the local value against the quadratic-form bound (sum objective), then runs the
    branch and bound, parallel over the size of part 0.

    Args:
        P: pattern
        n: number of blow-up vertices
        objective: sum or product
        mode: exact or local
        budget: node budget of the exact search
        n_jobs: worker processes

    Returns:
        BlowupOptimum(objective, value, witness, certified, nodes)
    """
    if n < 1:
        raise InputError("n must be positive")
    if objective not in ("sum", "product"):
        raise InputError(f"objective is sum or product, got {objective!r}")
    if mode not in ("exact", "local"):
        raise InputError(f"mode is exact or local, got {mode!r}")
    budget = DEFAULT_PARAMS["budget"] if budget is None else int(budget)

    local = _local_optimum(P, n, objective)
    local_value = blowup_value(P, local, objective)
    if mode == "local":
        return BlowupOptimum(objective, local_value, Composition(local), "local", 0)

    twins = twin_predecessors(P)
    if objective == "sum" and local_value == sum_upper_bound(P, n):
        logger.info(f"Sigma of {P!r} at n = {n} meets the quadratic-form bound {local_value}")
        return BlowupOptimum(objective, local_value, Composition(_canonical_sizes(local, twins)), "exact", 0)

    estimate = binomial(n + P.k - 1, P.k - 1)
    if estimate > budget:
        raise BudgetExceededError(
            f"Exact search over {estimate} compositions exceeds the budget of {budget} nodes",
            best=BlowupOptimum(objective, local_value, Composition(local), "local", 0),
        )

    search = CompositionSearch(P, n, objective, budget, lower=local_value)
    firsts = list(range(n + 1))
    n_jobs = get_n_jobs(n_jobs)
    best_value, best_sizes, nodes, done = local_value, None, 0, True
    if n_jobs > 1 and len(firsts) > 1:
        with Pool(n_jobs) as pool:
            results = pool.starmap(_search_branch, [(search, first) for first in firsts])
        for value, sizes, branch_nodes, branch_done in results:
            nodes += branch_nodes
            done = done and branch_done
            if _better(objective, value, sizes, best_value, best_sizes):
                best_value, best_sizes = value, sizes
    else:
        for first in firsts:
            done = search(first) and done
            if not done:
                break
        best_value, best_sizes, nodes = search.best_value, search.best_sizes, search.nodes

    if not done or nodes > budget:
        best = BlowupOptimum(objective, best_value, Composition(best_sizes or local), "local", nodes)
        raise BudgetExceededError(f"Exact blow-up search ran out of budget after {nodes} nodes", best=best,
                                  nodes=nodes)
    assert best_sizes is not None, "The canonical form of the local optimum is always reachable"
    logger.info(f"Exact blow-up search for {P!r} at n = {n}: {nodes} nodes")
    return BlowupOptimum(objective, best_value, Composition(best_sizes), "exact", nodes)


def _check_turan_shape(spec: TuranSpec):
    if not spec.valid:
        raise DomainError(f"TUR({spec.r}, {spec.a}) needs a >= d")
    if not (spec.is_single_block or spec.is_two_block):
        raise UnsupportedShapeError(f"Closed forms cover r = (r0) and r = (r0, 0, ..., 0, rd) only, got {spec.r}")


def turan_delta(spec: TuranSpec, n: int) -> int:
    """
    Sigma_T(n + 1) - Sigma_T(n) by the case analysis on n = q (s0 - 1) + t
    """
    _check_turan_shape(spec)
    a = spec.a
    if spec.is_single_block:
        return a * n + n - n // spec.r0
    r0, rd, d = spec.r0, spec.rd, spec.d
    q, t = divmod(n, spec.s0 - 1)
    block = r0 * d + 1
    if t >= rd * block:
        return (a + 1) * n - (q + 1) * (d * rd + 1) + 1
    k, offset = divmod(t, block)
    base = (a + 1) * n - q * (d * rd + 1) - d * k
    if offset == 0:
        return base
    return base - (offset - 1) // r0


def turan_u_size_range(spec: TuranSpec, n: int) -> Optional[Tuple[int, ...]]:
    """
    Possible sizes of the light part in a sum-optimal blow-up on n vertices, None for single-block shapes
    """
    _check_turan_shape(spec)
    if spec.is_single_block:
        return None
    r0, rd, d = spec.r0, spec.rd, spec.d
    q, t = divmod(n, spec.s0 - 1)
    base = q * rd
    if t == 0:
        return (base,)
    block = r0 * d + 1
    if t >= (rd - 1) * block + r0 + 1:
        return (base + rd,)
    k, offset = divmod(t - 1, block)
    k += 1
    if offset < r0:
        return (base + k - 1, base + k)
    return (base + k,)


def turan_sum(spec: TuranSpec, n: int) -> int:
    """
    Sigma_T(n) by summing growth steps from Sigma_T(1) = 0
    """
    if n < 1:
        raise InputError("n must be positive")
    return sum(turan_delta(spec, m) for m in range(1, n))


def turan_closed_forms(spec: TuranSpec, n: int) -> TuranClosedForm:
    """
    Closed forms for r = (r0) or r = (r0, 0, ..., 0, rd)

    Args:
        spec: Turan shape and ambient multiplicity
        n: number of vertices

    Returns:
        TuranClosedForm(n, sigma_n, delta_n, u_size_range)
    """
    _check_turan_shape(spec)
    return TuranClosedForm(n, turan_sum(spec, n), turan_delta(spec, n), turan_u_size_range(spec, n))


def heavy_degree_check(spec: TuranSpec, budget: Optional[int] = None, n_jobs: Optional[int] = None) -> bool:
    """
    Every vertex of the sum-optimal blow-up on s1 vertices has degree (a + 1)(s1 - 1) - d(2 rd - 1) - 1
    """
    _check_turan_shape(spec)
    if not spec.is_two_block:
        raise UnsupportedShapeError("The heavy-set degree formula needs r = (r0, 0, ..., 0, rd)")
    s1 = spec.s1
    P = make_turan_pattern(spec)
    best = optimize_blowup(P, s1, "sum", "exact", budget=budget, n_jobs=n_jobs)
    G = build_blowup(P, best.witness)
    expected = (spec.a + 1) * (s1 - 1) - spec.d * (2 * spec.rd - 1) - 1
    degrees = G.degrees().tolist()
    ok = all(deg == expected for deg in degrees)
    if not ok:
        logger.warning(f"TUR({spec.r}, {spec.a}) on {s1} vertices: degrees {degrees}, expected {expected}")
    return ok
