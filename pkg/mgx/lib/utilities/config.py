import os
from typing import Optional

from .exceptions import InputError

DEFAULT_PARAMS = {
    "budget": 10 ** 9,
    "pi_tol": 1e-10,
    "boundary_margin": 1e-12,
    "max_support_vertices": 24,
    "ascent_starts": 8,
    "ascent_iters": 2000,
    "seed": 42,
}

THREADS_ENV = "MGX_THREADS"


def get_n_jobs(n_jobs: Optional[int] = None, default: Optional[int] = 1) -> int:
    """
    Resolve the worker count

    Args:
        n_jobs: explicit value, wins when given
        default: used when neither the argument nor MGX_THREADS is set; None means os.cpu_count()

    Returns:

    """
    if n_jobs is None:
        env = os.environ.get(THREADS_ENV)
        if env:
            try:
                n_jobs = int(env)
            except ValueError:
                raise InputError(f"{THREADS_ENV} must be an integer, got {env!r}")
        elif default is None:
            n_jobs = os.cpu_count() or 1
        else:
            n_jobs = default
    if n_jobs < 1:
        raise InputError("n_jobs must be positive")
    return n_jobs


def make_params(**overrides) -> dict:
    unknown = set(overrides) - set(DEFAULT_PARAMS)
    assert not unknown, f"Unknown parameters {sorted(unknown)}"
    params = dict(DEFAULT_PARAMS)
    params.update({k: v for k, v in overrides.items() if v is not None})
    return params
