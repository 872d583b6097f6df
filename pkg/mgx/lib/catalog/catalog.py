import json
import re
from collections import namedtuple
from itertools import product
from typing import Iterable, List, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from ..core.multigraph import Pattern
from ..logging import get_logger
from ..utilities.exceptions import DomainError, InputError

logger = get_logger(__name__)

# 1-based edge lists of the small sparse graphs sharing the K_{1,3} blow-up maximum
H6_EDGES = ((1, 2), (1, 3), (1, 4), (2, 5), (2, 6))
H7_EDGES = ((1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (1, 6), (6, 7), (7, 4))
H9_EDGES = ((1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6), (1, 7), (7, 4), (2, 8), (8, 5), (3, 9), (9, 6))
PETERSEN_EDGES = (
    (6, 7), (7, 8), (8, 9), (9, 10), (10, 6),
    (1, 6), (2, 7), (3, 8), (4, 9), (5, 10),
    (1, 3), (2, 4), (3, 5), (4, 1), (5, 2),
)

C5_FAMILY = ("K1_3", "C_5", "H6", "H7", "H9", "Petersen")

_PARAM_NAMES = {
    "K1_": "star",
    "P_": "path",
    "C_": "cycle",
}


class TuranSpec(namedtuple("TuranSpec", ["r", "a"])):
    """
    Block sizes r = (r_0, ..., r_d) with r_0, r_d > 0 and ambient multiplicity a
    """

    __slots__ = ()

    def __new__(cls, r: Sequence[int], a: int):
        r = tuple(int(x) for x in r)
        if not r or any(x < 0 for x in r):
            raise InputError(f"Block sizes must be a non-empty tuple of non-negative integers, got {r}")
        if r[0] <= 0 or r[-1] <= 0:
            raise InputError(f"First and last block must be non-empty, got {r}")
        if int(a) < 0:
            raise InputError("Ambient multiplicity must be non-negative")
        return super().__new__(cls, r, int(a))

    @classmethod
    def two_block(cls, r0: int, rd: int, d: int, a: int) -> "TuranSpec":
        """
        r = (r0, 0, ..., 0, rd) with d - 1 empty middle blocks
        """
        if d < 1:
            raise InputError("Two-block shapes need depth d >= 1")
        return cls((r0,) + (0,) * (d - 1) + (rd,), a)

    @property
    def d(self) -> int:
        return len(self.r) - 1

    @property
    def R(self) -> int:
        return sum(self.r)

    @property
    def valid(self) -> bool:
        return self.a >= self.d

    @property
    def r0(self) -> int:
        return self.r[0]

    @property
    def rd(self) -> int:
        return self.r[-1]

    @property
    def is_single_block(self) -> bool:
        return self.d == 0

    @property
    def is_two_block(self) -> bool:
        return self.d >= 1 and all(x == 0 for x in self.r[1:-1])

    @property
    def s0(self) -> int:
        if self.is_single_block:
            return self.r0 + 1
        return self.r0 + self.rd + self.d * self.r0 * self.rd + 1

    @property
    def s1(self) -> int:
        return 2 * self.s0 - self.d * self.r0 - 2

    def blocks(self) -> List[int]:
        """
        Block index of every pattern vertex, in vertex order
        """
        return [j for j, size in enumerate(self.r) for _ in range(size)]

    def to_dict(self) -> dict:
        return {"turan": {"r": list(self.r), "a": self.a}}


def make_turan_pattern(spec: TuranSpec) -> Pattern:
    """
    TUR(r, a): vertex v in block j has loop a - j and pair a - i + 1 to every vertex of a block j >= i

    Args:
        spec: block sizes and ambient multiplicity

    Returns:
        pattern on R vertices, blocks laid out in order
    """
    if not spec.valid:
        raise DomainError(f"TUR({spec.r}, {spec.a}) would need negative multiplicities (a < d = {spec.d})")
    blocks = np.array(spec.blocks(), dtype=np.int64)
    earlier = np.minimum.outer(blocks, blocks)
    pairs = spec.a - earlier + 1
    loops = spec.a - blocks
    return Pattern(loops, pairs, name=f"TUR({','.join(map(str, spec.r))};{spec.a})")


def turan_order_compare(first: TuranSpec, second: TuranSpec) -> int:
    """
    Linear order on (r, a): smaller a first, then the first differing block size, then initial segments first

    Returns:
        -1, 0 or 1
    """
    key_1, key_2 = (first.a, first.r), (second.a, second.r)
    return (key_1 > key_2) - (key_1 < key_2)


def lift_graph_pattern(H: nx.Graph, a: int, name: str = None) -> Pattern:
    """
    G^(a): loops a - 1, non-edges a, edges a + 1; vertices taken in sorted node order
    """
    if a < 1:
        raise DomainError("Lifted graph patterns need a >= 1 (loops are a - 1)")
    if nx.number_of_selfloops(H):
        raise InputError("Lifted graph patterns need a loopless simple graph")
    nodes = sorted(H.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    k = len(nodes)
    pairs = np.full((k, k), a, dtype=np.int64)
    for u, v in H.edges():
        pairs[index[u], index[v]] = pairs[index[v], index[u]] = a + 1
    return Pattern([a - 1] * k, pairs, name=name)


def graph_from_edges(k: int, edges: Iterable[Tuple[int, int]], one_based: bool = False) -> nx.Graph:
    shift = 1 if one_based else 0
    H = nx.Graph()
    H.add_nodes_from(range(k))
    H.add_edges_from((u - shift, v - shift) for u, v in edges)
    return H


def clebsch_graph() -> nx.Graph:
    """
    Folded 5-cube: 4-bit words adjacent when they differ in one bit or in all four
    """
    H = nx.Graph()
    H.add_nodes_from(range(16))
    for u in range(16):
        for v in range(u + 1, 16):
            diff = bin(u ^ v).count("1")
            if diff in (1, 4):
                H.add_edge(u, v)
    return H


def pg23_incidence_graph() -> nx.Graph:
    """
    Point-line incidence graph of PG(2,3): 13 points, 13 lines, 4-regular, girth 6
    """
    reps = []
    for vec in product(range(3), repeat=3):
        if any(vec):
            lead = next(x for x in vec if x)
            normal = tuple((x * lead) % 3 for x in vec)  # lead^-1 == lead mod 3
            if normal not in reps:
                reps.append(normal)
    H = nx.Graph()
    H.add_nodes_from(range(2 * len(reps)))
    for i, p in enumerate(reps):
        for j, line in enumerate(reps):
            if sum(x * y for x, y in zip(p, line)) % 3 == 0:
                H.add_edge(i, len(reps) + j)
    return H


def named_graph(name: str) -> nx.Graph:
    fixed = {
        "H6": lambda: graph_from_edges(6, H6_EDGES, one_based=True),
        "H7": lambda: graph_from_edges(7, H7_EDGES, one_based=True),
        "H9": lambda: graph_from_edges(9, H9_EDGES, one_based=True),
        "Petersen": lambda: graph_from_edges(10, PETERSEN_EDGES, one_based=True),
        "Clebsch": clebsch_graph,
        "H26": pg23_incidence_graph,
    }
    if name in fixed:
        return fixed[name]()
    match = re.fullmatch(r"(K1_|P_|C_)(\d+)", name)
    if match is None:
        raise InputError(f"Unknown graph name {name!r}")
    kind, size = _PARAM_NAMES[match.group(1)], int(match.group(2))
    if kind == "star":
        if size < 1:
            raise InputError("Stars need at least one leaf")
        return nx.star_graph(size)
    if kind == "path":
        if size < 1:
            raise InputError("Paths need at least one vertex")
        return nx.path_graph(size)
    if size < 3:
        raise InputError("Cycles need at least three vertices")
    return nx.cycle_graph(size)


def named_pattern(name: str, a: int) -> Pattern:
    """
    Named small-a patterns: lifted graphs (K1_l, P_l, C_l, H6, H7, H9, Petersen, Clebsch, H26),
    Pplus2 (pair a + 2, loops a - 1), K1_inf (pair a + 1, loops a and a - 1) and ambient (single loop a)
    """
    if name == "Pplus2":
        if a < 1:
            raise DomainError("Pplus2 needs a >= 1")
        return Pattern([a - 1, a - 1], [[0, a + 2], [a + 2, 0]], name=name)
    if name == "K1_inf":
        if a < 1:
            raise DomainError("K1_inf needs a >= 1")
        return Pattern([a, a - 1], [[0, a + 1], [a + 1, 0]], name=name)
    if name == "ambient":
        return Pattern([a], [[0]], name=name)
    return lift_graph_pattern(named_graph(name), a, name=name)


def pattern_from_json(obj: Union[dict, str]) -> Pattern:
    """
    Plain {"vertices", "loops", "edges"}, or shorthands {"turan": {"r", "a"}}, {"named", "a"},
    {"graph": {"vertices", "edges"}, "a"}
    """
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise InputError(f"Pattern is not valid JSON: {exc}")
    if not isinstance(obj, dict):
        raise InputError("Pattern description must be a JSON object")
    try:
        if "turan" in obj:
            spec = TuranSpec(obj["turan"]["r"], obj["turan"]["a"])
            return make_turan_pattern(spec)
        if "named" in obj:
            return named_pattern(str(obj["named"]), int(obj["a"]))
        if "graph" in obj:
            graph = obj["graph"]
            H = graph_from_edges(int(graph["vertices"]), [tuple(e) for e in graph.get("edges", [])])
            return lift_graph_pattern(H, int(obj["a"]), name=obj.get("name"))
    except (KeyError, TypeError) as exc:
        raise InputError(f"Malformed pattern shorthand: {exc}")
    return Pattern.from_dict(obj)


def load_pattern(path: str) -> Pattern:
    try:
        with open(path, "r", encoding="utf-8") as f:
            obj = json.load(f)
    except OSError as exc:
        raise InputError(f"Cannot read pattern file {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"Pattern file {path} is not valid JSON: {exc}")
    return pattern_from_json(obj)


def save_pattern(P: Pattern, path: str):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(P.to_dict(), f, indent=2)


def girth(H: nx.Graph) -> float:
    """
    Length of a shortest cycle by BFS from every vertex, inf for forests
    """
    best = float("inf")
    for root in H.nodes():
        dist = {root: 0}
        parent = {root: None}
        queue = [root]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            if 2 * dist[u] + 1 >= best:
                break
            for v in H.neighbors(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif parent[u] != v:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def max_degree(H: nx.Graph) -> int:
    return max((deg for _, deg in H.degree()), default=0)
