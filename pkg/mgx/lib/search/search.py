from collections import namedtuple
from fractions import Fraction
from itertools import combinations
from multiprocessing import Pool
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx
import pandas as pd

from ..admissibility.admissibility import blowup_sum_range
from ..catalog.catalog import lift_graph_pattern, named_pattern
from ..core.multigraph import Pattern
from ..density.density import pi_density, sigma_density
from ..logging import get_logger
from ..utilities.config import get_n_jobs
from ..utilities.exceptions import BudgetExceededError, InputError

logger = get_logger(__name__)

MAX_GRAPH_VERTICES = 11
SURVEY_LABEL = "best pattern density (lower bound; equals extremal value where the small-a theorems apply)"
_TIE_TOL = 1e-9

Candidate = namedtuple("Candidate", ["name", "pattern", "sigma_s", "density", "experimental"])


def _refine(adj: List[set], cells: List[List[int]]) -> List[List[int]]:
    """
    Equitable refinement of an ordered partition; cells split by neighbour counts into every current cell
    """
    while True:
        where = {}
        for idx, cell in enumerate(cells):
            for v in cell:
                where[v] = idx
        refined = []
        for cell in cells:
            if len(cell) == 1:
                refined.append(cell)
                continue
            signature = {}
            for v in cell:
                counts = [0] * len(cells)
                for u in adj[v]:
                    counts[where[u]] += 1
                signature[v] = tuple(counts)
            for key in sorted(set(signature.values())):
                refined.append(sorted(v for v in cell if signature[v] == key))
        if len(refined) == len(cells):
            return refined
        cells = refined


def _bits(adj: List[set], order: Sequence[int]) -> Tuple[int, ...]:
    # graph6 bit order: column by column over the upper triangle
    return tuple(1 if order[i] in adj[order[j]] else 0 for j in range(1, len(order)) for i in range(j))


def _canonical_order(adj: List[set]) -> List[int]:
    n = len(adj)
    if n == 0:
        return []
    by_degree = {}
    for v in range(n):
        by_degree.setdefault(len(adj[v]), []).append(v)
    start = [by_degree[deg] for deg in sorted(by_degree)]
    best = [None, None]

    def search(cells):
        cells = _refine(adj, cells)
        target = next((i for i, cell in enumerate(cells) if len(cell) > 1), None)
        if target is None:
            order = [cell[0] for cell in cells]
            bits = _bits(adj, order)
            if best[0] is None or bits < best[0]:
                best[0], best[1] = bits, order
            return
        cell = cells[target]
        tried = []
        for v in cell:
            # twins give the same leaves
            if any(adj[v] - {u} == adj[u] - {v} for u in tried):
                continue
            tried.append(v)
            rest = [u for u in cell if u != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:])

    search(start)
    return best[1]


def _adjacency(H: nx.Graph) -> Tuple[List[set], List]:
    nodes = sorted(H.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    adj = [set() for _ in nodes]
    for u, v in H.edges():
        adj[index[u]].add(index[v])
        adj[index[v]].add(index[u])
    return adj, nodes


def canonical_graph(H: nx.Graph) -> nx.Graph:
    """
    Relabelled copy of H on 0..n-1 whose graph6 bit string is the smallest among all labellings reached by
    colour refinement and individualisation
    """
    adj, _ = _adjacency(H)
    order = _canonical_order(adj)
    position = {v: i for i, v in enumerate(order)}
    G = nx.Graph()
    G.add_nodes_from(range(len(order)))
    G.add_edges_from((position[u], position[v]) for u in range(len(adj)) for v in adj[u] if u < v)
    return G


def _graph6(G: nx.Graph) -> str:
    if G.number_of_nodes() == 0:
        return "?"
    return nx.to_graph6_bytes(G, header=False).decode("ascii").strip()


def canonical_form(H: nx.Graph) -> str:
    """
    graph6 string of the canonical labelling; equal strings mean isomorphic graphs
    """
    return _graph6(canonical_graph(H))


def _extensions(H: nx.Graph, max_deg: int, min_girth: float, connected_only: bool) -> Iterator[nx.Graph]:
    n = H.number_of_nodes()
    open_vertices = [v for v in H.nodes() if H.degree(v) < max_deg]
    dist = dict(nx.all_pairs_shortest_path_length(H))
    low = 1 if connected_only else 0
    for size in range(low, min(max_deg, len(open_vertices)) + 1):
        for S in combinations(open_vertices, size):
            # a new vertex on u and v closes cycles of length dist(u, v) + 2
            if any(dist[u].get(v, float("inf")) + 2 < min_girth for u, v in combinations(S, 2)):
                continue
            G = H.copy()
            G.add_node(n)
            G.add_edges_from((n, u) for u in S)
            yield G


def enumerate_graphs(max_n: int, max_deg: int, min_girth: float = 3, connected_only: bool = True,
                     min_n: Optional[int] = None) -> Iterator[nx.Graph]:
    """
    One canonical graph per isomorphism class with maximum degree <= max_deg and girth >= min_girth.

    Graphs grow one vertex at a time. Every graph arises from one of its vertex-deleted subgraphs, which obey
    the same caps; for connected graphs a non-cut vertex is deleted, so the parent stays connected.

    Args:
        max_n: largest vertex count
        max_deg: degree cap
        min_girth: girth floor (forests have infinite girth)
        connected_only: skip disconnected graphs
        min_n: smallest vertex count emitted, max_n by default

    Yields:
        graphs on 0..n-1 in canonical labelling, by vertex count and then canonical string; the canonical string
        is stored in graph attribute "canonical"
    """
    if max_n > MAX_GRAPH_VERTICES:
        raise BudgetExceededError(f"Graph enumeration is limited to {MAX_GRAPH_VERTICES} vertices, got {max_n}")
    if max_n < 1 or max_deg < 0:
        raise InputError("Need max_n >= 1 and max_deg >= 0")
    min_n = max_n if min_n is None else max(1, min_n)
    single = nx.Graph()
    single.add_node(0)
    level = {_graph6(single): single}
    for n in range(1, max_n + 1):
        if n >= min_n:
            for key in sorted(level):
                G = level[key]
                G.graph["canonical"] = key
                yield G
        if n == max_n:
            break
        grown = {}
        for H in level.values():
            for G in _extensions(H, max_deg, min_girth, connected_only):
                G = canonical_graph(G)
                grown.setdefault(_graph6(G), G)
        logger.debug(f"{len(grown)} graphs on {n + 1} vertices")
        level = grown


def _density_of(P: Pattern, objective: str):
    if objective == "sum":
        return sigma_density(P).value
    return pi_density(P, cross_check=False).value


def _evaluate(name: str, P: Pattern, s: int, q_min: int, q_max: int, objective: str, experimental: bool):
    lower, upper = blowup_sum_range(P, s, exact=False)
    if upper <= q_min:
        sigma_s = upper
    elif lower > q_max:
        return Candidate(name, P, lower, None, experimental)
    else:
        sigma_s, _ = blowup_sum_range(P, s, n_jobs=1)
    if sigma_s > q_max:
        return Candidate(name, P, sigma_s, None, experimental)
    return Candidate(name, P, sigma_s, _density_of(P, objective), experimental)


def _ties(objective: str, value, best) -> bool:
    if objective == "sum":
        return value == best
    return abs(value - best) <= _TIE_TOL


def survey(s: int, a: int, q_list: Sequence[int], max_n: int, max_deg: int, min_girth: float = 3,
           objective: str = "sum", extra_patterns: Optional[Sequence[Union[str, Pattern]]] = None,
           n_jobs: Optional[int] = None) -> pd.DataFrame:
    """
    Best admissible lifted graph pattern per q

    Candidates are the connected graphs of enumerate_graphs with 2..max_n vertices, lifted to ambient
    multiplicity a, plus the single-vertex ambient pattern. Sigma of each candidate at s is computed once;
    a candidate is admissible for q when it is at most q.

    Args:
        s: set size
        a: ambient multiplicity
        q_list: q values
        max_n: vertex cap of the generated graphs
        max_deg: degree cap
        min_girth: girth floor
        objective: sum or product
        extra_patterns: named patterns (or patterns) added to the pool as experiment targets
        n_jobs: worker processes for the density evaluations

    Returns:
        DataFrame with columns q, best_density, witness, tie_count, ties, experimental; the values are lower
        bounds on the extremal density
    """
    if objective not in ("sum", "product"):
        raise InputError(f"objective is sum or product, got {objective!r}")
    q_list = sorted(set(int(q) for q in q_list))
    if not q_list:
        raise InputError("q_list is empty")

    pool_items = [("ambient", named_pattern("ambient", a), False)]
    for H in enumerate_graphs(max_n, max_deg, min_girth, connected_only=True, min_n=2):
        pool_items.append((H.graph["canonical"], lift_graph_pattern(H, a), False))
    for extra in extra_patterns or []:
        P = named_pattern(extra, a) if isinstance(extra, str) else extra
        pool_items.append((P.name or str(extra), P, True))
    logger.info(f"Survey at s = {s}, a = {a}: {len(pool_items)} candidate patterns")

    tasks = [(name, P, s, q_list[0], q_list[-1], objective, experimental) for name, P, experimental in pool_items]
    n_jobs = get_n_jobs(n_jobs)
    if n_jobs > 1:
        with Pool(n_jobs) as pool:
            candidates = pool.starmap(_evaluate, tasks)
    else:
        candidates = [_evaluate(*task) for task in tasks]

    rows = []
    for q in q_list:
        admissible = [c for c in candidates if c.density is not None and c.sigma_s <= q]
        if not admissible:
            rows.append({"q": q, "best_density": None, "witness": None, "tie_count": 0, "ties": "",
                         "experimental": False})
            continue
        best = max(c.density for c in admissible)
        ties = [c for c in admissible if _ties(objective, c.density, best)]
        rows.append({
            "q": q,
            "best_density": float(best) if objective == "product" else str(Fraction(best)),
            "witness": ties[0].name,
            "tie_count": len(ties),
            "ties": " ".join(c.name for c in ties),
            "experimental": any(c.experimental for c in ties),
        })
    table = pd.DataFrame(rows, columns=["q", "best_density", "witness", "tie_count", "ties", "experimental"])
    table.attrs["label"] = SURVEY_LABEL
    table.attrs["objective"] = objective
    return table


def certify_winner(name: str, a: int, objective: str = "product") -> bool:
    """
    Re-run the density of a surveyed winner with the projected-ascent cross-check.

    Winners are catalogue names (ambient, experiment targets) or graph6 strings of enumerated graphs.
    """
    if objective == "sum":
        return True
    try:
        P = named_pattern(name, a)
    except InputError:
        try:
            H = nx.from_graph6_bytes(name.encode("ascii"))
        except (nx.NetworkXError, ValueError) as exc:
            raise InputError(f"Winner {name!r} is neither a catalogue name nor graph6: {exc}")
        P = lift_graph_pattern(H, a)
    return pi_density(P).certified
