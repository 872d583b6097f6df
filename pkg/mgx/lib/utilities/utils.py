from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import comb

Number = Union[int, Fraction, float]


def comb2(n: int) -> int:
    """
    C(n, 2), zero for n < 2
    """
    return n * (n - 1) // 2 if n > 1 else 0


def colex_key(subset: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sorted(subset, reverse=True))


def mask_to_subset(mask: int) -> Tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def solve_fraction_free(matrix: Sequence[Sequence[int]], rhs: Sequence[int]) -> Optional[List[Fraction]]:
    """
    Exact solve of a square integer system by fraction-free (Bareiss) elimination

    Args:
        matrix: n x n integer matrix
        rhs: right-hand side of length n

    Returns:
        solution as Fractions, None when the system is singular
    """
    n = len(matrix)
    aug = [[int(v) for v in row] + [int(r)] for row, r in zip(matrix, rhs)]
    prev = 1
    for k in range(n):
        pivot = next((p for p in range(k, n) if aug[p][k] != 0), None)
        if pivot is None:
            return None
        if pivot != k:
            aug[k], aug[pivot] = aug[pivot], aug[k]
        akk = aug[k][k]
        row_k = aug[k]
        for i in range(k + 1, n):
            row_i = aug[i]
            aik = row_i[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk

    x: List[Fraction] = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(aug[i][n])
        for j in range(i + 1, n):
            if aug[i][j]:
                acc -= aug[i][j] * x[j]
        x[i] = acc / aug[i][i]
    return x


def unit_simplex_projection(c: np.ndarray) -> np.ndarray:
    """
    Euclidean projection onto {x >= 0, sum(x) = 1}
    """
    n = len(c)
    a = -np.sort(-c)
    lambdas = (np.cumsum(a) - 1) / np.arange(1, n + 1)
    for k in range(n - 1, -1, -1):
        if a[k] > lambdas[k]:
            return np.maximum(c - lambdas[k], 0)
    return np.full(n, 1.0 / n)


def fraction_to_json(value: Fraction) -> Dict[str, int]:
    value = Fraction(value)
    return {"num": value.numerator, "den": value.denominator}


def fraction_from_json(obj) -> Fraction:
    if isinstance(obj, dict):
        return Fraction(int(obj["num"]), int(obj["den"]))
    return Fraction(obj)


def format_float(value: float) -> float:
    """
    Round to 15 significant digits for serialization
    """
    if value is None or not np.isfinite(value):
        return value
    return float(f"{value:.15g}")


def to_jsonable(obj):
    """
    Recursively convert results (Fractions, numpy scalars, tuples, namedtuples) into JSON-friendly structures
    """
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, Fraction):
        return fraction_to_json(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if np.isfinite(value):
            return format_float(value)
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if hasattr(obj, "_asdict"):
        return to_jsonable(obj._asdict())
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    return str(obj)


def chunked(items: Iterable, n_chunks: int) -> List[list]:
    items = list(items)
    n_chunks = max(1, min(n_chunks, len(items)))
    return [items[i::n_chunks] for i in range(n_chunks)]


def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return int(comb(n, k, exact=True))
