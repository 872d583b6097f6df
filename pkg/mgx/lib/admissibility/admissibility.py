from multiprocessing import Pool
from typing import List, Optional, Sequence, Tuple

from ..blowup.blowup import optimize_blowup, sum_upper_bound
from ..core.multigraph import Multigraph, Pattern, _check_subset
from ..logging import get_logger
from ..utilities.config import get_n_jobs
from ..utilities.exceptions import InputError
from ..utilities.utils import colex_key

logger = get_logger(__name__)


def blowup_sum_range(P: Pattern, s: int, budget: Optional[int] = None,
                     n_jobs: Optional[int] = None, exact: bool = True) -> Tuple[int, int]:
    """
    Lower and upper estimate of Sigma_P(s); both equal Sigma_P(s) when exact is set

    Returns:
        (local value, quadratic-form bound) or (Sigma_P(s), Sigma_P(s))
    """
    upper = sum_upper_bound(P, s)
    lower = optimize_blowup(P, s, "sum", "local").value
    if lower == upper or not exact:
        return lower, upper
    value = optimize_blowup(P, s, "sum", "exact", budget=budget, n_jobs=n_jobs).value
    return value, value


def is_admissible(P: Pattern, s: int, q: int, budget: Optional[int] = None, n_jobs: Optional[int] = None) -> bool:
    """
    Every blow-up of P is an (s, q)-graph iff Sigma_P(s) <= q: an s-set of any blow-up spans an s-vertex blow-up

    Args:
        P: pattern
        s: set size
        q: allowed edge sum
        budget: node budget for the exact blow-up search
        n_jobs: worker processes

    Returns:
        bool
    """
    if s < 2:
        raise InputError("Need s >= 2")
    if sum_upper_bound(P, s) <= q:
        return True
    if optimize_blowup(P, s, "sum", "local").value > q:
        return False
    return optimize_blowup(P, s, "sum", "exact", budget=budget, n_jobs=n_jobs).value <= q


def _heavy_with_first(weights: List[List[int]], n: int, size: int, bound: int, first: int) -> List[Tuple[int, ...]]:
    out = []
    chosen = [first]

    def dfs(start: int, current: int):
        if len(chosen) == size:
            if current == bound:
                out.append(tuple(chosen))
            return
        for v in range(start, n - (size - len(chosen)) + 1):
            row = weights[v]
            add = sum(row[u] for u in chosen)
            chosen.append(v)
            dfs(v + 1, current + add)
            chosen.pop()

    dfs(first + 1, 0)
    return out


def find_heavy_sets(G: Multigraph, size: int, bound: int, n_jobs: Optional[int] = None) -> List[Tuple[int, ...]]:
    """
    All size-subsets X with e_G(X) = bound, in colex order
    """
    n = G.n
    if size < 1 or size > n:
        raise InputError(f"Heavy-set size must lie in [1, {n}], got {size}")
    weights = G.weights.astype(int).tolist()
    firsts = range(n - size + 1)
    n_jobs = get_n_jobs(n_jobs)
    if n_jobs > 1:
        with Pool(n_jobs) as pool:
            parts = pool.starmap(_heavy_with_first, [(weights, n, size, bound, first) for first in firsts])
    else:
        parts = [_heavy_with_first(weights, n, size, bound, first) for first in firsts]
    found = sorted((X for part in parts for X in part), key=colex_key)
    logger.debug(f"{len(found)} heavy {size}-sets at bound {bound}")
    return found


def heavy_set_degrees(G: Multigraph, X: Sequence[int]) -> List[int]:
    """
    d_X(v) for every v in X
    """
    idx = _check_subset(G, X)
    return [G.degree(v, idx) for v in idx]


def self_admissible(P: Pattern, s: int, **kwargs) -> bool:
    value = optimize_blowup(P, s, "sum", "exact", **kwargs).value
    return is_admissible(P, s, value, **kwargs)
