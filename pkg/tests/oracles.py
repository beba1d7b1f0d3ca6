"""Reference implementations used only by the tests.

Each one is written from first principles and shares no code with the
package beyond its data types.
"""

from __future__ import annotations

import math
from fractions import Fraction


# -- paging ---------------------------------------------------------------------------------

def naive_faults(policy: str, k: int, requests) -> int:
    """LRU/FIFO on a plain list; the front of the list is evicted."""
    cache: list[int] = []
    n = 0
    for p in requests:
        if p in cache:
            if policy == "lru":
                cache.remove(p)
                cache.append(p)
            continue
        n += 1
        if len(cache) == k:
            cache.pop(0)
        cache.append(p)
    return n


# -- routing: parallel links ---------------------------------------------------------------

def _cost(d: dict, x: float) -> float:
    kind = d["kind"]
    if kind == "affine":
        return float(d["a"]) * x + float(d["b"])
    if kind == "monomial":
        return float(d["a"]) * x ** float(d["d"])
    if kind == "mm1":
        u = float(d["u"])
        return 1.0 / (u - x) if x < u else math.inf
    if kind == "constant":
        return float(d["c"])
    if kind == "polynomial":
        return sum(float(c) * x ** i for i, c in enumerate(d["coeffs"]))
    raise ValueError(kind)


def _marginal(d: dict, x: float) -> float:
    """d/dx of x c(x), written out per kind."""
    kind = d["kind"]
    if kind == "affine":
        return 2 * float(d["a"]) * x + float(d["b"])
    if kind == "monomial":
        return (float(d["d"]) + 1) * float(d["a"]) * x ** float(d["d"])
    if kind == "mm1":
        u = float(d["u"])
        return u / (u - x) ** 2 if x < u else math.inf
    if kind == "constant":
        return float(d["c"])
    if kind == "polynomial":
        return sum((i + 1) * float(c) * x ** i for i, c in enumerate(d["coeffs"]))
    raise ValueError(kind)


def _inverse(fn, level: float, hi: float) -> float:
    """Largest x in [0, hi] with fn(x) <= level, for nondecreasing fn."""
    if fn(0.0) >= level:
        return 0.0
    lo = 0.0
    if fn(hi) <= level:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if fn(mid) <= level:
            lo = mid
        else:
            hi = mid
    return lo


def _level_split(cost_dicts: list[dict], rate: float, fn) -> list[float]:
    """Split ``rate`` so that every used link has the same ``fn`` value."""
    funcs = [lambda x, d=d: fn(d, x) for d in cost_dicts]
    lo = min(f(0.0) for f in funcs)
    hi = max(lo, 1.0)
    while sum(_inverse(f, hi, rate) for f in funcs) < rate:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if sum(_inverse(f, mid, rate) for f in funcs) < rate:
            lo = mid
        else:
            hi = mid
    xs = [_inverse(f, hi, rate) for f in funcs]
    total = sum(xs)
    return [x * rate / total for x in xs]


def parallel_equilibrium(cost_dicts: list[dict], rate: float) -> list[float]:
    """Equilibrium link flows by bisection on the common cost level."""
    return _level_split(cost_dicts, rate, _cost)


def parallel_optimum(cost_dicts: list[dict], rate: float) -> list[float]:
    """Optimal link flows by bisection on the common marginal cost."""
    return _level_split(cost_dicts, rate, _marginal)


def parallel_cost(cost_dicts: list[dict], flows: list[float]) -> float:
    return math.fsum(x * _cost(d, x) for d, x in zip(cost_dicts, flows) if x > 0)


def bellman_ford(num_vertices: int, arcs: list[tuple[int, int, float]], source: int) -> list[float]:
    dist = [math.inf] * num_vertices
    dist[source] = 0.0
    for _ in range(num_vertices - 1):
        for a, b, w in arcs:
            if dist[a] + w < dist[b]:
                dist[b] = dist[a] + w
    return dist


# -- scheduling ----------------------------------------------------------------------------

def processor_sharing_completions(sizes: list[Fraction], speed: Fraction = Fraction(1)) -> list[Fraction]:
    """SETF completion times when every job is released at time 0.

    With sizes sorted ascending, job i finishes once every job has received
    min(p_j, p_i) work: C_i = (sum_{j<i} p_j + (n-i) p_i) / speed (0-based i).
    """
    ps = sorted(sizes)
    n = len(ps)
    return [(sum(ps[:i], Fraction(0)) + (n - i) * ps[i]) / speed for i in range(n)]


def stepwise_srpt_flow(jobs: list[tuple[int, int]]) -> int:
    """SRPT with integer releases and sizes, stepping one unit of time at a time."""
    remaining: dict[int, int] = {}
    release = dict(enumerate(r for r, _ in jobs))
    sizes = dict(enumerate(p for _, p in jobs))
    done: dict[int, int] = {}
    t = 0
    while len(done) < len(jobs):
        for i, r in release.items():
            if r == t:
                remaining[i] = sizes[i]
        if remaining:
            i = min(remaining, key=lambda j: (remaining[j], release[j], j))
            remaining[i] -= 1
            if remaining[i] == 0:
                del remaining[i]
                done[i] = t + 1
        t += 1
    return sum(done[i] - release[i] for i in done)
