from collections import namedtuple
from itertools import combinations
from math import log
from multiprocessing import Pool
from typing import List, Optional, Tuple

import numpy as np

from ..bounds.bounds import integer_am_gm_max
from ..core.multigraph import Multigraph, MultiplicityProfile
from ..logging import get_logger
from ..utilities.config import DEFAULT_PARAMS, get_n_jobs
from ..utilities.exceptions import BudgetExceededError, InputError
from ..utilities.utils import comb2

logger = get_logger(__name__)

OracleResult = namedtuple("OracleResult", ["objective", "value", "witness", "nodes_explored", "exact"])

_LOG_SLACK = 1e-9


class _BudgetHit(Exception):
    pass


class EdgeSearch:
    """
    Depth-first search over edge multiplicities of K_n in lexicographic edge order.

    Every edge is capped by q minus the largest partial sum of an s-set containing it. Rows must close with
    non-increasing degrees, d(0) >= d(1) >= ..., which keeps one labelling of every degree order.
    """

    def __init__(self, n: int, s: int, q: int, max_mult: int, objective: str, budget: int):
        self.n, self.s, self.q = n, s, q
        self.max_mult = max_mult
        self.objective = objective
        self.budget = budget
        self.edges = list(combinations(range(n), 2))
        self.m = len(self.edges)
        sets = list(combinations(range(n), s))
        incidence = np.zeros((self.m, len(sets)), dtype=bool)
        edge_index = {e: i for i, e in enumerate(self.edges)}
        for j, X in enumerate(sets):
            for e in combinations(X, 2):
                incidence[edge_index[e], j] = True
        self.sets_of = [np.flatnonzero(incidence[i]) for i in range(self.m)]
        self.global_cap = q * comb2(n) // comb2(s)
        self.target = q / comb2(s)

        self.partial = np.zeros(len(sets), dtype=np.int64)
        self.degrees = [0] * n
        self.values: List[int] = []
        self.current = 0
        self.nodes = 0
        self.best_value = None
        self.best_vector: Optional[Tuple[int, ...]] = None

    def _cap(self, i: int) -> int:
        sets = self.sets_of[i]
        room = self.q - int(self.partial[sets].max()) if len(sets) else self.max_mult
        return min(self.max_mult, room)

    def _order(self, cap: int) -> List[int]:
        if self.objective == "sum":
            return list(range(cap, -1, -1))
        return sorted(range(cap + 1), key=lambda v: (abs(v - self.target), -v))

    def _degree_ok(self, i: int) -> bool:
        u, v = self.edges[i]
        # d(u - 1) is final once row u starts, and every later degree must stay below it
        if u > 0:
            cap = self.degrees[u - 1]
            if self.degrees[u] > cap or self.degrees[v] > cap:
                return False
        if i == self.m - 1 and self.degrees[v] > self.degrees[u]:
            return False
        return True

    def _bound(self, i: int) -> float:
        caps = [self._cap(j) for j in range(i, self.m)]
        if self.objective == "sum":
            return min(self.current + sum(caps), self.global_cap)
        if self._log_prefix == float("-inf"):
            return float("-inf")
        rest = self.m - i
        budget = min(sum(caps), self.global_cap - self.current)
        if budget < 0:
            return float("-inf")
        if min(caps) == 0:
            return float("-inf")
        return self._log_prefix + integer_am_gm_max(rest, budget).log_value

    @property
    def _log_prefix(self) -> float:
        if 0 in self.values:
            return float("-inf")
        return sum(log(v) for v in self.values if v > 1)

    def _dominated(self, i: int, bound) -> bool:
        if self.best_value is None:
            return False
        if self.objective == "sum":
            if bound < self.best_value:
                return True
            tie = bound == self.best_value
        else:
            best_log = self.best_value.log_value
            if best_log == float("-inf"):
                return False
            slack = _LOG_SLACK * max(1.0, abs(best_log))
            if bound < best_log - slack:
                return True
            tie = bound <= best_log + slack
        # a subtree that can at best tie is useless once its prefix is lexicographically past the best vector
        return tie and tuple(self.values) > self.best_vector[:i]

    def _leaf(self):
        vector = tuple(self.values)
        if self.objective == "sum":
            value = self.current
            better = self.best_value is None or value > self.best_value or (
                value == self.best_value and vector < self.best_vector)
        else:
            value = MultiplicityProfile.from_values(vector)
            cmp = 1 if self.best_value is None else value.compare(self.best_value)
            better = cmp > 0 or (cmp == 0 and vector < self.best_vector)
        if better:
            self.best_value, self.best_vector = value, vector

    def _dfs(self, i: int):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetHit()
        if i == self.m:
            self._leaf()
            return
        if self._dominated(i, self._bound(i)):
            return
        u, v = self.edges[i]
        sets = self.sets_of[i]
        for value in self._order(self._cap(i)):
            self.degrees[u] += value
            self.degrees[v] += value
            if self._degree_ok(i):
                self.partial[sets] += value
                self.values.append(value)
                self.current += value
                self._dfs(i + 1)
                self.current -= value
                self.values.pop()
                self.partial[sets] -= value
            self.degrees[u] -= value
            self.degrees[v] -= value

    def __call__(self, prefix: Tuple[int, ...] = ()) -> bool:
        """
        Search below a fixed assignment of the first edges

        Returns:
            False when the node budget ran out
        """
        try:
            for i, value in enumerate(prefix):
                if value > self._cap(i):
                    return True
                u, v = self.edges[i]
                self.degrees[u] += value
                self.degrees[v] += value
                if not self._degree_ok(i):
                    return True
                self.partial[self.sets_of[i]] += value
                self.values.append(value)
                self.current += value
            self._dfs(len(prefix))
        except _BudgetHit:
            return False
        return True


def _search_prefix(n, s, q, max_mult, objective, budget, prefix):
    search = EdgeSearch(n, s, q, max_mult, objective, budget)
    done = search(prefix)
    return search.best_value, search.best_vector, search.nodes, done


def _prefixes(n: int, s: int, q: int, max_mult: int, objective: str) -> List[Tuple[int, ...]]:
    search = EdgeSearch(n, s, q, max_mult, objective, budget=1)
    out = []
    for first in search._order(search._cap(0)):
        if search.m < 2:
            out.append((first,))
            continue
        search.partial[search.sets_of[0]] += first
        for second in search._order(search._cap(1)):
            out.append((first, second))
        search.partial[search.sets_of[0]] -= first
    return out


def _merge_better(objective, value, vector, best_value, best_vector) -> bool:
    if vector is None:
        return False
    if best_vector is None:
        return True
    cmp = (value > best_value) - (value < best_value) if objective == "sum" else value.compare(best_value)
    return cmp > 0 or (cmp == 0 and vector < best_vector)


def _to_multigraph(n: int, vector: Tuple[int, ...]) -> Multigraph:
    edges = [(u, v, m) for (u, v), m in zip(combinations(range(n), 2), vector)]
    return Multigraph.from_edges(n, edges)


def brute_force_extremal(n: int, s: int, q: int, max_mult: Optional[int] = None, objective: str = "sum",
                         budget: Optional[int] = None, n_jobs: Optional[int] = None) -> OracleResult:
    """
    Exact ex_Sigma(n, s, q) or ex_Pi(n, s, q) by exhaustive search

    Args:
        n: number of vertices, at least s
        s: set size
        q: allowed s-set edge sum
        max_mult: multiplicity cap, q by default
        objective: sum or product
        budget: node budget
        n_jobs: worker processes; the search splits over the first two edge values

    Returns:
        OracleResult; the witness is the lexicographically smallest optimal edge vector with non-increasing
        degrees
    """
    if objective not in ("sum", "product"):
        raise InputError(f"objective is sum or product, got {objective!r}")
    if s < 2 or q < 0:
        raise InputError("Need s >= 2 and q >= 0")
    if n < s:
        raise InputError(f"Need n >= s, got n = {n}, s = {s}")
    if n > 7:
        logger.warning(f"Exhaustive search on {n} vertices is far outside the desk-scale range")
    max_mult = q if max_mult is None else int(max_mult)
    budget = DEFAULT_PARAMS["budget"] if budget is None else int(budget)
    n_jobs = get_n_jobs(n_jobs)

    best_value, best_vector, nodes, done = None, None, 0, True
    if n_jobs > 1 and comb2(n) >= 2:
        tasks = [(n, s, q, max_mult, objective, budget, prefix)
                 for prefix in _prefixes(n, s, q, max_mult, objective)]
        with Pool(n_jobs) as pool:
            results = pool.starmap(_search_prefix, tasks)
        for value, vector, branch_nodes, branch_done in results:
            nodes += branch_nodes
            done = done and branch_done
            if _merge_better(objective, value, vector, best_value, best_vector):
                best_value, best_vector = value, vector
    else:
        search = EdgeSearch(n, s, q, max_mult, objective, budget)
        done = search()
        best_value, best_vector, nodes = search.best_value, search.best_vector, search.nodes

    witness = _to_multigraph(n, best_vector) if best_vector is not None else None
    if not done or nodes > budget:
        lower = OracleResult(objective, best_value, witness, nodes, False)
        raise BudgetExceededError(f"Oracle ran out of budget after {nodes} nodes; best value so far is only a "
                                  f"lower bound", best=lower, nodes=nodes)
    logger.info(f"ex_{objective}({n}, {s}, {q}) = {best_value} after {nodes} nodes")
    return OracleResult(objective, best_value, witness, nodes, True)
