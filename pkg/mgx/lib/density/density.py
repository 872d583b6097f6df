import warnings
from collections import namedtuple
from functools import lru_cache
from fractions import Fraction
from math import floor, log
from multiprocessing import Pool
from typing import List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy import linalg

from ..catalog.catalog import girth, lift_graph_pattern, max_degree
from ..core.multigraph import Pattern
from ..logging import DuplicateFilter, get_logger
from ..utilities.config import DEFAULT_PARAMS, get_n_jobs, make_params
from ..utilities.exceptions import BudgetExceededError, CertificationError, DomainError, InputError
from ..utilities.utils import chunked, mask_to_subset, solve_fraction_free, unit_simplex_projection

logger = get_logger(__name__)
# sweeps re-evaluate the same patterns
logger.addFilter(DuplicateFilter())

DensityResult = namedtuple("DensityResult",
                           ["objective", "value", "weighting", "support", "kkt_residual", "ties", "certified"])

TuranAsymptotics = namedtuple("TuranAsymptotics", ["x_star", "pi", "weighting", "x_star_limit"])

# float prefilter: supports whose float weights dip below this are dropped before the exact solve
_PREFILTER_NEG = -1e-7
_TIE_TOL = 1e-9
# the parallel path only pays off on large support families
_PARALLEL_MIN_VERTICES = 12


def _bordered(block: np.ndarray) -> np.ndarray:
    m = block.shape[0]
    out = np.zeros((m + 1, m + 1), dtype=block.dtype)
    out[:m, :m] = block
    out[:m, m] = -1
    out[m, :m] = 1
    return out


def _sigma_candidate(adj: List[List[int]], mask: int) -> Optional[Tuple[Fraction, int, List[Fraction]]]:
    """
    Exact KKT point of the sum objective on the support encoded by mask, None when there is none
    """
    S = mask_to_subset(mask)
    m = len(S)
    block = [[adj[i][j] for j in S] for i in S]
    matrix = [row + [-1] for row in block] + [[1] * m + [0]]
    rhs = [0] * m + [1]

    if m > 1:
        try:
            approx = np.linalg.solve(np.array(matrix, dtype=float), np.array(rhs, dtype=float))
            if (approx[:m] < _PREFILTER_NEG).any():
                return None
        except np.linalg.LinAlgError:
            pass

    sol = solve_fraction_free(matrix, rhs)
    if sol is None:
        return None
    x, sigma = sol[:m], sol[m]
    if any(v <= 0 for v in x):
        return None
    support = set(S)
    for j in range(len(adj)):
        if j in support:
            continue
        degree = sum(adj[j][i] * xi for i, xi in zip(S, x))
        if degree > sigma:
            return None
    return sigma, mask, x


def _sigma_chunk(adj: List[List[int]], masks: Sequence[int]) -> list:
    out = []
    for mask in masks:
        cand = _sigma_candidate(adj, mask)
        if cand is not None:
            out.append(cand)
    return out


def _check_size(P: Pattern, max_vertices: Optional[int]):
    limit = DEFAULT_PARAMS["max_support_vertices"] if max_vertices is None else max_vertices
    if P.k > limit:
        raise BudgetExceededError(f"Support enumeration over {P.k} vertices exceeds the limit of {limit}")


def sigma_density(P: Pattern, n_jobs: Optional[int] = None, max_vertices: Optional[int] = None) -> DensityResult:
    """
    Exact arithmetic density sigma_P = max x^T A_P x over the simplex.

    Every support is tried: the balance system A_S x = sigma 1, sum(x) = 1 is solved over the rationals,
    positive solutions whose excluded vertices have degree <= sigma are kept. Singular supports are skipped;
    a minimal-support optimum always has a regular system.

    Args:
        P: pattern
        n_jobs: worker processes
        max_vertices: enumeration limit on the pattern size

    Returns:
        DensityResult with an exact Fraction value and weighting
    """
    _check_size(P, max_vertices)
    return _sigma_scan(P, get_n_jobs(n_jobs))


# keyed on the multiplicity matrix; Pattern is immutable
@lru_cache(maxsize=512)
def _sigma_scan(P: Pattern, n_jobs: int) -> DensityResult:
    adj = P.adjacency.tolist()
    k = P.k
    masks = range(1, 1 << k)

    if n_jobs > 1 and k >= _PARALLEL_MIN_VERTICES:
        with Pool(n_jobs) as pool:
            parts = pool.starmap(_sigma_chunk, [(adj, chunk) for chunk in chunked(masks, n_jobs)])
        candidates = sorted((c for part in parts for c in part), key=lambda c: c[1])
    else:
        candidates = _sigma_chunk(adj, masks)

    assert candidates, "Every singleton support is a KKT candidate; none found"
    value = max(c[0] for c in candidates)
    winners = [c for c in candidates if c[0] == value]
    _, mask, x = winners[0]
    support = mask_to_subset(mask)
    weighting = [Fraction(0)] * k
    for i, xi in zip(support, x):
        weighting[i] = xi
    logger.debug(f"sigma of {P!r}: {value} from {len(candidates)} KKT supports")
    return DensityResult(
        objective="sum",
        value=value,
        weighting=tuple(weighting),
        support=support,
        kkt_residual=0.0,
        ties=tuple(mask_to_subset(c[1]) for c in winners),
        certified=True,
    )


def log_adjacency(P: Pattern) -> np.ndarray:
    """
    (A'_P)_{uv} = ln P({u, v}), -inf where the multiplicity is zero
    """
    a = P.adjacency.astype(float)
    with np.errstate(divide="ignore"):
        return np.log(a)


def _pi_candidate(L: np.ndarray, mask: int, valid_mask: int) -> Optional[Tuple[float, int, np.ndarray, float]]:
    S = list(mask_to_subset(mask))
    m = len(S)
    block = L[np.ix_(S, S)]
    if not np.isfinite(block).all():
        return None
    matrix = _bordered(block)
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", linalg.LinAlgWarning)
            z = linalg.solve(matrix, rhs)
            # one step of iterative refinement
            z = z + linalg.solve(matrix, rhs - matrix @ z)
    except (linalg.LinAlgError, linalg.LinAlgWarning):
        return None
    x, value = z[:m], float(z[m])
    if (x <= 1e-12).any():
        return None

    weights = np.zeros(L.shape[0])
    weights[S] = x
    weights = weights / weights.sum()
    residual = float(np.abs(block @ weights[S] - value).max())
    # loop-0 vertices can never carry weight, so only positive-loop vertices are tested
    outside = [j for j in range(L.shape[0]) if valid_mask >> j & 1 and not mask >> j & 1]
    if outside:
        with np.errstate(invalid="ignore"):
            degrees = np.array([np.sum(L[j, S] * weights[S]) if np.isfinite(L[j, S]).all() else -np.inf
                                for j in outside])
        residual = max(residual, float(np.max(np.maximum(degrees - value, 0.0))))
    return value, mask, weights, residual


def _pi_chunk(L: np.ndarray, masks: Sequence[int], tol: float, valid_mask: int) -> list:
    out = []
    for mask in masks:
        cand = _pi_candidate(L, mask, valid_mask)
        if cand is not None and cand[3] <= max(tol, 1e-7):
            out.append(cand)
    return out


def _quadratic_value(L: np.ndarray, x: np.ndarray) -> float:
    support = np.flatnonzero(x > 0)
    block = L[np.ix_(support, support)]
    if not np.isfinite(block).all():
        return float("-inf")
    return float(x[support] @ block @ x[support])


def projected_ascent(L: np.ndarray, starts: int = None, iters: int = None, seed: int = None) -> Tuple[float, np.ndarray]:
    """
    Multi-start projected gradient ascent of x^T L x over the simplex; -inf entries become a large penalty
    """
    params = make_params(ascent_starts=starts, ascent_iters=iters, seed=seed)
    starts, iters = params["ascent_starts"], params["ascent_iters"]
    k = L.shape[0]
    finite = L[np.isfinite(L)]
    penalty = -10.0 * (1.0 + (np.abs(finite).max() if finite.size else 0.0))
    Lp = np.where(np.isfinite(L), L, penalty)
    step = 1.0 / (2.0 * np.linalg.norm(Lp, 2) + 1e-12)
    rng = np.random.RandomState(params["seed"])

    best_value, best_x = float("-inf"), np.full(k, 1.0 / k)
    for start in range(starts):
        x = np.full(k, 1.0 / k) if start == 0 else rng.dirichlet(np.ones(k))
        for _ in range(iters):
            x_new = unit_simplex_projection(x + step * 2.0 * (Lp @ x))
            if np.abs(x_new - x).max() < 1e-14:
                x = x_new
                break
            x = x_new
        x = np.where(x > 1e-12, x, 0.0)
        x = x / x.sum()
        value = _quadratic_value(L, x)
        if value > best_value:
            best_value, best_x = value, x
    return best_value, best_x


def pi_density(P: Pattern, tol: Optional[float] = None, n_jobs: Optional[int] = None, strict: bool = False,
               cross_check: bool = True, max_vertices: Optional[int] = None) -> DensityResult:
    """
    Geometric density pi_P = max x^T A'_P x with (A'_P)_{uv} = ln P({u, v}).

    Supports must carry only positive multiplicities; each is solved in floating point with one refinement step,
    and a multi-start projected ascent cross-validates the maximum.

    Args:
        P: pattern
        tol: KKT residual tolerance
        n_jobs: worker processes
        strict: raise CertificationError instead of returning a flagged result
        cross_check: run the projected-ascent pass
        max_vertices: enumeration limit on the pattern size

    Returns:
        DensityResult with a float value; ties lists every support within 1e-9 of the maximum
    """
    tol = DEFAULT_PARAMS["pi_tol"] if tol is None else tol
    _check_size(P, max_vertices)
    L = log_adjacency(P)
    k = P.k
    valid = [v for v in range(k) if P.loop(v) >= 1]
    valid_mask = sum(1 << v for v in valid)
    masks = [mask for mask in range(1, 1 << k) if mask & ~valid_mask == 0]
    n_jobs = get_n_jobs(n_jobs)

    if not masks:
        logger.info(f"{P!r} has no positive loop: pi is -inf")
        weighting = np.zeros(k)
        weighting[0] = 1.0
        return DensityResult("product", float("-inf"), tuple(weighting), (0,), 0.0, ((0,),), True)

    if n_jobs > 1 and k >= _PARALLEL_MIN_VERTICES:
        with Pool(n_jobs) as pool:
            parts = pool.starmap(_pi_chunk, [(L, chunk, tol, valid_mask) for chunk in chunked(masks, n_jobs)])
        candidates = sorted((c for part in parts for c in part), key=lambda c: c[1])
    else:
        candidates = _pi_chunk(L, masks, tol, valid_mask)

    if not candidates:
        raise CertificationError(f"No KKT support found for {P!r}")

    best = candidates[0]
    for cand in candidates[1:]:
        if cand[0] > best[0] + 1e-12:
            best = cand
    value, mask, weights, residual = best
    ties = tuple(mask_to_subset(c[1]) for c in candidates if abs(c[0] - value) <= _TIE_TOL)
    certified = residual <= tol

    if cross_check:
        ascent_value, _ = projected_ascent(L)
        if ascent_value > value + 1e-7:
            logger.warning(f"Projected ascent found {ascent_value} above the support optimum {value} for {P!r}")
            certified = False

    result = DensityResult("product", value, tuple(float(v) for v in weights), mask_to_subset(mask),
                           residual, ties, certified)
    if not certified:
        logger.warning(f"pi of {P!r} not certified: residual {residual:.3e} > {tol:.1e}")
        if strict:
            raise CertificationError(f"pi of {P!r} failed certification", result)
    return result


def density(P: Pattern, objective: str = "sum", **kwargs) -> DensityResult:
    if objective == "sum":
        return sigma_density(P, **kwargs)
    if objective == "product":
        return pi_density(P, **kwargs)
    raise InputError(f"objective is sum or product, got {objective!r}")


def turan_asymptotics(r0: int, rd: int, d: int, a: int) -> TuranAsymptotics:
    """
    Product-optimal weighting of TUR((r0, 0, ..., 0, rd), a)

    Args:
        r0: number of heavy blocks (loop a)
        rd: number of light blocks (loop a - d)
        d: depth of the light block
        a: ambient multiplicity, at least d + 1

    Returns:
        x_star, pi, weighting (heavy vertices first) and the a -> infinity limit of x_star
    """
    if min(r0, rd, d) < 1:
        raise DomainError("r0, rd and d must be positive")
    if a <= d:
        raise DomainError(f"Need a >= d + 1, got a = {a}, d = {d}")
    numerator = log((a + 1) / a)
    denominator = (rd * (r0 + 1) * log(a + 1) - rd * log(a)
                   - r0 * (rd - 1) * log(a - d + 1) - r0 * log(a - d))
    x_star = numerator / denominator
    heavy = (1 - rd * x_star) / r0
    pi = log(a) + (1 - heavy) * numerator
    weighting = (heavy,) * r0 + (x_star,) * rd
    limit = 1.0 / (rd + r0 * (d * rd + 1))
    return TuranAsymptotics(x_star, pi, weighting, limit)


def _deletion_side(A: np.ndarray, x: Sequence, i: int, j: int) -> int:
    """
    Endpoint of the pair ij to delete: the one with the smaller weighted degree outside {i, j}
    """
    others = [t for t in range(len(x)) if t not in (i, j)]

    def weighted(v):
        total = 0
        for t in others:
            if x[t]:
                if A[v][t] == float("-inf"):
                    return float("-inf")
                total += A[v][t] * x[t]
        return total

    return j if weighted(i) >= weighted(j) else i


def clone_reduce(P: Pattern, objective: str = "sum", return_kept: bool = False, **kwargs):
    """
    Delete cloned vertices while some pair has multiplicity <= the common loop value m.

    The endpoint with the smaller weighted degree (under an optimal weighting of the current pattern) goes;
    moving its weight onto the other endpoint never lowers the objective, so the density is unchanged.

    Args:
        P: pattern whose loops all equal m
        objective: sum or product
        return_kept: also return the surviving original vertex indices

    Returns:
        reduced Pattern (and kept indices)
    """
    m = P.uniform_loop()
    if m is None:
        raise InputError("Cloning needs all loops equal")
    if objective == "product" and m < 1:
        raise InputError("Product cloning needs loops of multiplicity at least 1")
    kept = list(range(P.k))
    while len(kept) > 1:
        sub = P.subpattern(kept)
        A = sub.adjacency
        low = next(((i, j) for i in range(sub.k) for j in range(i + 1, sub.k) if A[i, j] <= m), None)
        if low is None:
            break
        result = density(sub, objective, **kwargs)
        matrix = A.tolist() if objective == "sum" else log_adjacency(sub).tolist()
        victim = _deletion_side(matrix, result.weighting, *low)
        logger.debug(f"cloning: pair {kept[low[0]]}-{kept[low[1]]} <= {m}, deleting {kept[victim]}")
        kept.pop(victim)
    reduced = P.subpattern(kept)
    return (reduced, tuple(kept)) if return_kept else reduced


def connected_reduce(H: nx.Graph, a: int, objective: str = "sum", **kwargs) -> Optional[nx.Graph]:
    """
    Component of H whose lifted pattern has the largest density.

    Returns:
        the component (a new graph), or None when no component beats the ambient density a (ln a)
    """
    threshold = Fraction(a) if objective == "sum" else log(a)
    best_graph, best_value = None, None
    for comp in sorted(nx.connected_components(H), key=min):
        sub = H.subgraph(comp).copy()
        value = density(lift_graph_pattern(sub, a), objective, **kwargs).value
        if best_value is None or value > best_value:
            best_graph, best_value = sub, value
    if best_graph is None or best_value <= threshold:
        logger.info("trivial: no component of the lifted pattern exceeds the ambient density")
        return None
    return best_graph


def vertex_count_bound(H: nx.Graph, a: int, objective: str = "sum", **kwargs) -> int:
    """
    Vertex bound for a lifted graph pattern beating the ambient density:
    (Delta - 1)/(sigma - a) for sums, ln((a+1)^Delta (a-1)/a^(Delta+1))/(pi - ln a) for products

    Returns:
        floor of the bound
    """
    delta = max_degree(H)
    P = lift_graph_pattern(H, a)
    if objective == "sum":
        sigma = sigma_density(P, **kwargs).value
        if sigma <= a:
            raise DomainError(f"sigma = {sigma} does not exceed a = {a}")
        return floor(Fraction(delta - 1) / (sigma - a))
    if objective == "product":
        if a < 2:
            raise DomainError("The product bound needs a >= 2")
        pi = pi_density(P, **kwargs).value
        if pi <= log(a) + 1e-12:
            raise DomainError(f"pi = {pi} does not exceed ln a = {log(a)}")
        top = delta * log(a + 1) + log(a - 1) - (delta + 1) * log(a)
        return floor(top / (pi - log(a)) + 1e-9)
    raise InputError(f"objective is sum or product, got {objective!r}")


def subcubic_girth5_bound(H: nx.Graph, a: int = 1, **kwargs) -> bool:
    """
    sigma of H^(a) is at most a + 1/5 for graphs of maximum degree <= 3 and girth >= 5
    """
    if max_degree(H) > 3 or girth(H) < 5:
        raise InputError("Need maximum degree at most 3 and girth at least 5")
    return sigma_density(lift_graph_pattern(H, a), **kwargs).value <= a + Fraction(1, 5)


def pattern_report(P: Pattern, tol: Optional[float] = None) -> dict:
    """
    sigma and pi side by side with the pattern-level AM-GM law pi <= ln sigma
    """
    sigma = sigma_density(P)
    pi = pi_density(P, tol=tol)
    return {
        "sigma": sigma,
        "pi": pi,
        "cross_law": pi.value <= log(sigma.value) + 1e-9 if sigma.value > 0 else pi.value == float("-inf"),
    }
