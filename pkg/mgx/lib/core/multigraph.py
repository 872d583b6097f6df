from collections import namedtuple
from math import log
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..logging import get_logger
from ..utilities.exceptions import InputError
from ..utilities.utils import comb2

logger = get_logger(__name__)

MAX_MULTIPLICITY = 2 ** 32 - 1
# log-values closer than this (relative) are compared exactly
LOG_TIE_TOL = 1e-9

SqCheck = namedtuple("SqCheck", ["ok", "witness"])


class MultiplicityProfile:
    """
    Exact product of edge multiplicities kept as a map multiplicity -> number of edges
    """

    __slots__ = ("_counts",)

    def __init__(self, counts: Mapping[int, int]):
        clean = {}
        for m, c in counts.items():
            m, c = int(m), int(c)
            if m < 0 or c < 0:
                raise InputError("Multiplicities and counts must be non-negative")
            if c:
                clean[m] = clean.get(m, 0) + c
        self._counts = dict(sorted(clean.items()))

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "MultiplicityProfile":
        vals, cnts = np.unique(np.asarray(list(values), dtype=np.int64), return_counts=True)
        return cls(dict(zip(vals.tolist(), cnts.tolist())))

    @property
    def counts(self) -> Dict[int, int]:
        return dict(self._counts)

    @property
    def total(self) -> int:
        return sum(self._counts.values())

    @property
    def edge_sum(self) -> int:
        return sum(m * c for m, c in self._counts.items())

    @property
    def is_zero(self) -> bool:
        return self._counts.get(0, 0) > 0

    @property
    def log_value(self) -> float:
        if self.is_zero:
            return float("-inf")
        return sum(c * log(m) for m, c in self._counts.items() if m > 1)

    def value(self) -> int:
        """
        Exact integer product; meant for display and near-tie comparisons only
        """
        if self.is_zero:
            return 0
        out = 1
        for m, c in self._counts.items():
            if m > 1:
                out *= m ** c
        return out

    def compare(self, other: "MultiplicityProfile") -> int:
        la, lb = self.log_value, other.log_value
        if la == lb == float("-inf"):
            return 0
        if abs(la - lb) > LOG_TIE_TOL * max(1.0, abs(la), abs(lb)):
            return 1 if la > lb else -1
        va, vb = self.value(), other.value()
        return (va > vb) - (va < vb)

    def __add__(self, other: "MultiplicityProfile") -> "MultiplicityProfile":
        merged = dict(self._counts)
        for m, c in other._counts.items():
            merged[m] = merged.get(m, 0) + c
        return MultiplicityProfile(merged)

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        if isinstance(other, MultiplicityProfile):
            return self._counts == other._counts
        if isinstance(other, Mapping):
            return self._counts == MultiplicityProfile(other)._counts
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._counts.items()))

    def __repr__(self):
        return f"MultiplicityProfile({self._counts})"

    def to_dict(self) -> dict:
        out = {"counts": {str(m): c for m, c in self._counts.items()}, "log": self.log_value}
        # exact rendering only while it stays printable
        if self.log_value < 2000:
            out["value"] = str(self.value())
        return out


class Multigraph:
    """
    Weighted complete graph on n labelled vertices with non-negative integer multiplicities
    """

    def __init__(self, weights):
        w = np.asarray(weights, dtype=np.int64)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise InputError("Multiplicity matrix must be square")
        if (w < 0).any() or (w > MAX_MULTIPLICITY).any():
            raise InputError("Multiplicities must lie in [0, 2^32 - 1]")
        if not np.array_equal(w, w.T):
            raise InputError("Multiplicity matrix must be symmetric")
        w = w.astype(np.uint32)
        np.fill_diagonal(w, 0)
        w.setflags(write=False)
        self._w = w

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int, int]]) -> "Multigraph":
        w = np.zeros((n, n), dtype=np.int64)
        for u, v, m in edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise InputError(f"Bad pair ({u}, {v}) for a multigraph on {n} vertices")
            w[u, v] = w[v, u] = m
        return cls(w)

    @classmethod
    def constant(cls, n: int, m: int) -> "Multigraph":
        return cls(np.full((n, n), m, dtype=np.int64))

    @property
    def n(self) -> int:
        return self._w.shape[0]

    @property
    def weights(self) -> np.ndarray:
        return self._w

    def mult(self, u: int, v: int) -> int:
        return int(self._w[u, v])

    def pairs(self) -> Iterable[Tuple[int, int, int]]:
        iu, ju = np.triu_indices(self.n, k=1)
        for u, v in zip(iu.tolist(), ju.tolist()):
            yield u, v, int(self._w[u, v])

    def degree(self, v: int, X: Optional[Sequence[int]] = None) -> int:
        """
        d_X(v): sum of multiplicities from v into X (all vertices when X is None)
        """
        idx = _check_subset(self, [v])[0]
        if X is None:
            return int(self._w[idx].sum(dtype=np.int64))
        cols = _check_subset(self, X)
        return int(self._w[idx, cols].sum(dtype=np.int64))

    def degrees(self) -> np.ndarray:
        return self._w.sum(axis=1, dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, Multigraph) and np.array_equal(self._w, other._w)

    def __hash__(self):
        return hash(self._w.tobytes())

    def __repr__(self):
        return f"Multigraph(n={self.n})"

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [[u, v, m] for u, v, m in self.pairs() if m]}


class Pattern:
    """
    Loop multiplicities on k vertices plus symmetric pair multiplicities.

    The adjacency matrix A_P carries pair(u, v) off the diagonal and loop(v) on it.
    """

    def __init__(self, loops: Sequence[int], pairs, name: Optional[str] = None):
        loops = [int(v) for v in loops]
        k = len(loops)
        a = np.array(pairs, dtype=np.int64).reshape(k, k) if k else np.zeros((0, 0), dtype=np.int64)
        if not np.array_equal(a, a.T):
            raise InputError("Pair multiplicities must be symmetric")
        np.fill_diagonal(a, loops)
        if (a < 0).any():
            raise InputError("Pattern multiplicities must be non-negative")
        if k == 0:
            raise InputError("A pattern needs at least one vertex")
        a.setflags(write=False)
        self._a = a
        self.name = name

    @classmethod
    def from_edges(cls, k: int, loops: Sequence[int], edges: Iterable[Tuple[int, int, int]],
                   name: Optional[str] = None) -> "Pattern":
        if len(loops) != k:
            raise InputError(f"Expected {k} loops, got {len(loops)}")
        pairs = np.zeros((k, k), dtype=np.int64)
        for u, v, m in edges:
            if not (0 <= u < k and 0 <= v < k) or u == v:
                raise InputError(f"Bad pattern pair ({u}, {v})")
            pairs[u, v] = pairs[v, u] = m
        return cls(loops, pairs, name=name)

    @classmethod
    def from_dict(cls, obj: dict) -> "Pattern":
        try:
            k = int(obj["vertices"])
            loops = obj.get("loops", [0] * k)
            edges = [tuple(int(x) for x in e) for e in obj.get("edges", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"Malformed pattern description: {exc}")
        return cls.from_edges(k, loops, edges, name=obj.get("name"))

    @property
    def k(self) -> int:
        return self._a.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        return self._a

    @property
    def loops(self) -> Tuple[int, ...]:
        return tuple(int(v) for v in np.diag(self._a))

    def loop(self, v: int) -> int:
        return int(self._a[v, v])

    def pair(self, u: int, v: int) -> int:
        if u == v:
            raise InputError("pair() needs two distinct vertices; use loop()")
        return int(self._a[u, v])

    def uniform_loop(self) -> Optional[int]:
        loops = set(self.loops)
        return loops.pop() if len(loops) == 1 else None

    def subpattern(self, vertices: Sequence[int]) -> "Pattern":
        idx = list(vertices)
        sub = self._a[np.ix_(idx, idx)]
        return Pattern(np.diag(sub), sub)

    def without(self, v: int) -> "Pattern":
        return self.subpattern([u for u in range(self.k) if u != v])

    def max_multiplicity(self) -> int:
        return int(self._a.max())

    def to_dict(self) -> dict:
        edges = [[u, v, int(self._a[u, v])] for u in range(self.k) for v in range(u + 1, self.k) if self._a[u, v]]
        out = {"vertices": self.k, "loops": list(self.loops), "edges": edges}
        if self.name:
            out["name"] = self.name
        return out

    def __eq__(self, other):
        return isinstance(other, Pattern) and np.array_equal(self._a, other._a)

    def __hash__(self):
        return hash(self._a.tobytes())

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"Pattern({self.k} vertices{label})"


def _check_subset(G: Multigraph, X: Iterable[int]) -> List[int]:
    idx = [int(v) for v in X]
    for v in idx:
        if not 0 <= v < G.n:
            raise InputError(f"Vertex {v} out of range for a multigraph on {G.n} vertices")
    if len(set(idx)) != len(idx):
        raise InputError("Vertex subset contains repeated vertices")
    return idx


def edge_sum(G: Multigraph, X: Iterable[int]) -> int:
    """
    e_G(X), the sum of multiplicities over pairs inside X
    """
    idx = _check_subset(G, X)
    if len(idx) < 2:
        return 0
    sub = G.weights[np.ix_(idx, idx)]
    return int(sub.sum(dtype=np.int64)) // 2


def edge_product(G: Multigraph, X: Iterable[int]) -> MultiplicityProfile:
    """
    Exact product of multiplicities over pairs inside X
    """
    idx = _check_subset(G, X)
    if len(idx) < 2:
        return MultiplicityProfile({})
    sub = G.weights[np.ix_(idx, idx)]
    iu = np.triu_indices(len(idx), k=1)
    return MultiplicityProfile.from_values(sub[iu].tolist())


def is_sq_graph(G: Multigraph, s: int, q: int, allow_vacuous: bool = False) -> SqCheck:
    """
    Check that every s-set of G spans at most q

    Args:
        G: multigraph
        s: size of the checked sets
        q: allowed edge sum
        allow_vacuous: accept s > n as trivially true instead of raising

    Returns:
        SqCheck(ok, witness) where witness is the lexicographically smallest violating s-set
    """
    if s < 2 or q < 0:
        raise InputError("Need s >= 2 and q >= 0")
    n = G.n
    if s > n:
        if allow_vacuous:
            return SqCheck(True, None)
        raise InputError(f"s = {s} exceeds the vertex count {n}")

    w = G.weights.astype(np.int64).tolist()
    max_w = int(G.weights.max()) if n > 1 else 0
    chosen: List[int] = []

    def dfs(start: int, current: int) -> Optional[Tuple[int, ...]]:
        k = len(chosen)
        if k == s:
            return tuple(chosen) if current > q else None
        remaining = s - k
        if current + max_w * (remaining * k + comb2(remaining)) <= q:
            return None
        for v in range(start, n - remaining + 1):
            add = 0
            row = w[v]
            for u in chosen:
                add += row[u]
            chosen.append(v)
            found = dfs(v + 1, current + add)
            chosen.pop()
            if found is not None:
                return found
        return None

    witness = dfs(0, 0)
    if witness is not None:
        logger.debug(f"s-set {witness} spans {edge_sum(G, witness)} > {q}")
    return SqCheck(witness is None, witness)


def read_multigraph(path: str) -> Multigraph:
    """
    Text format: first line n, then lines `u v m` (0-based, u < v); missing pairs are 0
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = [ln.split("#", 1)[0].strip() for ln in f]
    except OSError as exc:
        raise InputError(f"Cannot read multigraph file {path}: {exc}")
    lines = [ln for ln in lines if ln]
    if not lines:
        raise InputError(f"Empty multigraph file {path}")
    try:
        n = int(lines[0])
        edges = []
        for ln in lines[1:]:
            u, v, m = (int(x) for x in ln.split())
            if u >= v:
                raise InputError(f"Pairs must satisfy u < v, got {u} {v}")
            edges.append((u, v, m))
    except ValueError as exc:
        raise InputError(f"Malformed multigraph file {path}: {exc}")
    return Multigraph.from_edges(n, edges)


def write_multigraph(G: Multigraph, path: str):
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"{G.n}\n")
        for u, v, m in G.pairs():
            if m:
                f.write(f"{u} {v} {m}\n")
