"""Selfish routing with flow-dependent edge costs.

Equilibrium flows minimize the Beckmann potential (sum of cost integrals);
optimal flows minimize total cost. Both solves share one iterative scheme:
shortest paths under the current edge lengths (costs for equilibria,
marginal costs for optima) supply descent directions, and an exact one-
dimensional line search moves flow along them.
"""

from __future__ import annotations

import heapq
import json
import math
import random
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Any, Callable, Sequence

from auglab.report import format_number

MM1_MARGIN = 1e-6
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 100_000


class RoutingError(ValueError):
    pass


class InfeasibleRoutingError(RoutingError):
    """The demand cannot be routed below the M/M/1 capacities."""


# -- cost functions -------------------------------------------------------------

def _f(x) -> float:
    return float(x)


class CostFunction:
    """Nonnegative, continuous, nondecreasing edge cost ``c(x)``."""

    kind = "abstract"
    capacity = math.inf

    def __call__(self, x: float) -> float:
        raise NotImplementedError

    def primitive(self, x: float) -> float:
        """Integral of the cost from 0 to ``x``."""
        raise NotImplementedError

    def derivative(self, x: float) -> float:
        raise NotImplementedError

    def second_derivative(self, x: float) -> float:
        raise NotImplementedError

    def marginal(self, x: float) -> float:
        """Derivative of ``x * c(x)``."""
        if x == 0:
            return self(0.0)
        return self(x) + x * self.derivative(x)

    def marginal_derivative(self, x: float) -> float:
        return 2 * self.derivative(x) + x * self.second_derivative(x)

    def slower(self) -> CostFunction:
        """The cost ``c(x/2) / 2``."""
        raise NotImplementedError

    def params(self) -> dict[str, Any]:
        raise NotImplementedError

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, **self.params()}


@dataclass(frozen=True)
class Constant(CostFunction):
    c: float
    kind = "constant"

    def __post_init__(self):
        object.__setattr__(self, "c", _f(self.c))
        if not self.c >= 0:
            raise RoutingError("constant cost must be >= 0")

    def __call__(self, x):
        return self.c

    def primitive(self, x):
        return self.c * x

    def derivative(self, x):
        return 0.0

    def second_derivative(self, x):
        return 0.0

    def slower(self):
        return Constant(self.c / 2)

    def params(self):
        return {"c": format_number(self.c)}


@dataclass(frozen=True)
class Affine(CostFunction):
    a: float
    b: float
    kind = "affine"

    def __post_init__(self):
        object.__setattr__(self, "a", _f(self.a))
        object.__setattr__(self, "b", _f(self.b))
        if not (self.a >= 0 and self.b >= 0):
            raise RoutingError("affine coefficients must be >= 0")

    def __call__(self, x):
        return self.a * x + self.b

    def primitive(self, x):
        return 0.5 * self.a * x * x + self.b * x

    def derivative(self, x):
        return self.a

    def second_derivative(self, x):
        return 0.0

    def slower(self):
        return Affine(self.a / 4, self.b / 2)

    def params(self):
        return {"a": format_number(self.a), "b": format_number(self.b)}


@dataclass(frozen=True)
class Monomial(CostFunction):
    """``a * x**d``."""

    a: float
    d: float
    kind = "monomial"

    def __post_init__(self):
        object.__setattr__(self, "a", _f(self.a))
        object.__setattr__(self, "d", _f(self.d))
        if not (self.a >= 0 and self.d >= 0):
            raise RoutingError("monomial needs a >= 0 and d >= 0")

    def __call__(self, x):
        return self.a * x**self.d

    def primitive(self, x):
        return self.a * x ** (self.d + 1) / (self.d + 1)

    def derivative(self, x):
        if self.d == 0:
            return 0.0
        if x == 0:
            return self.a if self.d == 1 else (0.0 if self.d > 1 else math.inf)
        return self.a * self.d * x ** (self.d - 1)

    def second_derivative(self, x):
        if self.d in (0, 1):
            return 0.0
        if x == 0:
            return 2 * self.a if self.d == 2 else (0.0 if self.d > 2 else math.inf)
        return self.a * self.d * (self.d - 1) * x ** (self.d - 2)

    def slower(self):
        return Monomial(self.a / 2 ** (self.d + 1), self.d)

    def params(self):
        return {"a": format_number(self.a), "d": format_number(self.d)}


@dataclass(frozen=True)
class Polynomial(CostFunction):
    """``sum(coeffs[i] * x**i)`` with nonnegative coefficients."""

    coeffs: tuple[float, ...]
    kind = "polynomial"

    def __post_init__(self):
        coeffs = tuple(_f(c) for c in self.coeffs)
        if not coeffs or any(not c >= 0 for c in coeffs):
            raise RoutingError("polynomial needs at least one coefficient, all >= 0")
        object.__setattr__(self, "coeffs", coeffs)
        # sparse view; high-degree capacity-like costs are mostly zeros
        object.__setattr__(self, "_terms", tuple((i, c) for i, c in enumerate(coeffs) if c))

    def __call__(self, x):
        return sum(c * x ** i for i, c in self._terms)

    def primitive(self, x):
        return sum(c * x ** (i + 1) / (i + 1) for i, c in self._terms)

    def derivative(self, x):
        return sum(i * c * x ** (i - 1) for i, c in self._terms if i >= 1)

    def second_derivative(self, x):
        return sum(i * (i - 1) * c * x ** (i - 2) for i, c in self._terms if i >= 2)

    def slower(self):
        return Polynomial(tuple(c / 2 ** (i + 1) for i, c in enumerate(self.coeffs)))

    def params(self):
        return {"coeffs": [format_number(c) for c in self.coeffs]}


@dataclass(frozen=True)
class MM1(CostFunction):
    """M/M/1 delay ``1 / (u - x)``, infinite at and beyond capacity ``u``."""

    u: float
    kind = "mm1"

    def __post_init__(self):
        object.__setattr__(self, "u", _f(self.u))
        if not self.u > 0:
            raise RoutingError("mm1 capacity must be > 0")

    @property
    def capacity(self):
        return self.u

    def __call__(self, x):
        return 1.0 / (self.u - x) if x < self.u else math.inf

    def primitive(self, x):
        return math.log(self.u / (self.u - x)) if x < self.u else math.inf

    def derivative(self, x):
        return 1.0 / (self.u - x) ** 2 if x < self.u else math.inf

    def second_derivative(self, x):
        return 2.0 / (self.u - x) ** 3 if x < self.u else math.inf

    def marginal(self, x):
        return self.u / (self.u - x) ** 2 if x < self.u else math.inf

    def marginal_derivative(self, x):
        return 2.0 * self.u / (self.u - x) ** 3 if x < self.u else math.inf

    def slower(self):
        return MM1(2 * self.u)

    def params(self):
        return {"u": format_number(self.u)}


@dataclass(frozen=True)
class Clamped(CostFunction):
    """``max(base(x), base(floor_at))``: the base cost held flat below ``floor_at``."""

    base: CostFunction
    floor_at: float
    kind = "clamped"

    def __post_init__(self):
        object.__setattr__(self, "floor_at", _f(self.floor_at))
        if not self.floor_at >= 0:
            raise RoutingError("clamp point must be >= 0")

    @property
    def capacity(self):
        return self.base.capacity

    @cached_property
    def level(self) -> float:
        return self.base(self.floor_at)

    def __call__(self, x):
        return self.level if x <= self.floor_at else self.base(x)

    def primitive(self, x):
        if x <= self.floor_at:
            return self.level * x
        return (self.level * self.floor_at + self.base.primitive(x)
                - self.base.primitive(self.floor_at))

    def derivative(self, x):
        return 0.0 if x < self.floor_at else self.base.derivative(x)

    def second_derivative(self, x):
        return 0.0 if x < self.floor_at else self.base.second_derivative(x)

    def marginal(self, x):
        return self.level if x < self.floor_at else self.base.marginal(x)

    def marginal_derivative(self, x):
        return 0.0 if x < self.floor_at else self.base.marginal_derivative(x)

    def slower(self):
        return Clamped(self.base.slower(), 2 * self.floor_at)

    def params(self):
        return {"floor_at": format_number(self.floor_at), "base": self.base.to_dict()}


def cost_from_dict(d: dict[str, Any]) -> CostFunction:
    kind = d.get("kind")
    try:
        if kind == "constant":
            return Constant(float(d["c"]))
        if kind == "affine":
            return Affine(float(d["a"]), float(d["b"]))
        if kind == "monomial":
            return Monomial(float(d["a"]), float(d["d"]))
        if kind == "polynomial":
            return Polynomial(tuple(float(c) for c in d["coeffs"]))
        if kind == "mm1":
            return MM1(float(d["u"]))
        if kind == "clamped":
            return Clamped(cost_from_dict(d["base"]), float(d["floor_at"]))
    except KeyError as exc:
        raise RoutingError(f"cost of kind {kind!r} is missing field {exc.args[0]!r}") from None
    raise RoutingError(f"unknown cost kind {kind!r}")


# -- networks and flows ------------------------------------------------------------

@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    cost: CostFunction


@dataclass(frozen=True)
class Commodity:
    source: int
    sink: int
    rate: float


@dataclass(frozen=True)
class RoutingNetwork:
    num_vertices: int
    edges: tuple[Edge, ...]
    commodities: tuple[Commodity, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        for i, e in enumerate(self.edges):
            for v in (e.tail, e.head):
                if not 0 <= v < self.num_vertices:
                    raise RoutingError(f"edge {i} touches vertex {v}, outside [0, {self.num_vertices})")
            if e.tail == e.head:
                raise RoutingError(f"edge {i} is a self-loop at vertex {e.tail}")
        coms = []
        for i, c in enumerate(self.commodities):
            rate = float(c.rate)
            if rate < 0 or math.isnan(rate):
                raise RoutingError(f"commodity {i} has negative rate {c.rate!r}")
            if rate == 0:
                continue
            if c.source == c.sink:
                raise RoutingError(f"commodity {i} has source == sink")
            if c.sink not in self.reachable_from(c.source):
                raise RoutingError(f"commodity {i}: sink {c.sink} unreachable from source {c.source}")
            coms.append(Commodity(c.source, c.sink, rate))
        object.__setattr__(self, "commodities", tuple(coms))

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.num_vertices)]
        for i, e in enumerate(self.edges):
            out[e.tail].append(i)
        return tuple(tuple(x) for x in out)

    def reachable_from(self, source: int) -> set[int]:
        seen = {source}
        todo = [source]
        while todo:
            v = todo.pop()
            for i in self.out_edges[v]:
                w = self.edges[i].head
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    @property
    def total_rate(self) -> float:
        return sum(c.rate for c in self.commodities)


@dataclass(frozen=True)
class EdgeFlow:
    values: tuple[float, ...]
    by_commodity: tuple[tuple[float, ...], ...] | None = None

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    @classmethod
    def from_commodities(cls, parts: Sequence[Sequence[float]]) -> EdgeFlow:
        parts = tuple(tuple(float(x) for x in p) for p in parts)
        total = tuple(math.fsum(col) for col in zip(*parts))
        return cls(total, parts)


def check_flow(net: RoutingNetwork, flow: EdgeFlow, tol: float = 1e-7) -> None:
    """Raise RoutingError unless ``flow`` routes every commodity's demand."""
    if len(flow.values) != len(net.edges):
        raise RoutingError(f"flow has {len(flow.values)} entries for {len(net.edges)} edges")
    if any(not x >= -tol for x in flow.values):
        raise RoutingError("edge flows must be nonnegative")
    scale = max(1.0, net.total_rate)
    if flow.by_commodity is not None:
        parts = flow.by_commodity
        demands = [[c] for c in net.commodities]
    else:
        parts = [flow.values]
        demands = [list(net.commodities)]
    for part, coms in zip(parts, demands):
        balance = [0.0] * net.num_vertices
        for x, e in zip(part, net.edges):
            balance[e.tail] += x
            balance[e.head] -= x
        for c in coms:
            balance[c.source] -= c.rate
            balance[c.sink] += c.rate
        worst = max((abs(b) for b in balance), default=0.0)
        if worst > tol * scale:
            raise RoutingError(f"flow conservation violated by {worst:.3g}")


def total_cost(net: RoutingNetwork, flow: EdgeFlow, check: bool = True) -> float:
    """Sum of ``c_e(f_e) * f_e``; infinite if an M/M/1 edge is at capacity."""
    if check:
        check_flow(net, flow)
    total = 0.0
    for x, e in zip(flow.values, net.edges):
        if x > 0:
            total += e.cost(x) * x
    return total


def potential(net: RoutingNetwork, flow: EdgeFlow, check: bool = True) -> float:
    """Sum over edges of the cost integral up to the edge flow (may be +inf)."""
    if check:
        check_flow(net, flow)
    return math.fsum(e.cost.primitive(x) for x, e in zip(flow.values, net.edges))


# -- shortest paths ------------------------------------------------------------------

def shortest_path(net: RoutingNetwork, lengths: Sequence[float], source: int, sink: int
                  ) -> tuple[tuple[int, ...], float]:
    """Label-setting shortest path for nonnegative lengths; returns (edge indices, length)."""
    dist = [math.inf] * net.num_vertices
    pred = [-1] * net.num_vertices
    dist[source] = 0.0
    heap = [(0.0, source)]
    done = [False] * net.num_vertices
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        if v == sink:
            break
        for i in net.out_edges[v]:
            w = net.edges[i].head
            nd = d + lengths[i]
            if nd < dist[w]:
                dist[w] = nd
                pred[w] = i
                heapq.heappush(heap, (nd, w))
    if dist[sink] == math.inf:
        raise InfeasibleRoutingError(f"no finite-cost path from {source} to {sink}")
    path = []
    v = sink
    while v != source:
        i = pred[v]
        path.append(i)
        v = net.edges[i].tail
    return tuple(reversed(path)), dist[sink]


# -- solvers ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolveReport:
    kind: str  # "equilibrium" or "optimal"
    flow: EdgeFlow
    objective: float
    cost: float
    gap: float
    iterations: int
    shortest_lengths: tuple[float, ...]
    converged: bool
    path_flows: tuple[dict[tuple[int, ...], float], ...] = field(default=(), compare=False)

    @property
    def approximate(self) -> bool:
        """The flow is certified only up to ``gap``; its cost is not asserted exact."""
        return self.gap > 0

    def to_dict(self) -> dict[str, Any]:
        d = {
            "kind": self.kind,
            "edge_flows": [format_number(x) for x in self.flow.values],
            "objective": format_number(self.objective),
            "cost": format_number(self.cost),
            "gap": format_number(self.gap),
            "iterations": self.iterations,
            "shortest_lengths": [format_number(x) for x in self.shortest_lengths],
            "converged": self.converged,
            "approximate": self.approximate,
        }
        if self.flow.by_commodity is not None:
            d["commodity_flows"] = [[format_number(x) for x in p] for p in self.flow.by_commodity]
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> SolveReport:
        by_com = None
        if "commodity_flows" in d:
            by_com = tuple(tuple(float(x) for x in p) for p in d["commodity_flows"])
        return cls(
            kind=d["kind"],
            flow=EdgeFlow(tuple(float(x) for x in d["edge_flows"]), by_com),
            objective=float(d["objective"]),
            cost=float(d["cost"]),
            gap=float(d["gap"]),
            iterations=int(d["iterations"]),
            shortest_lengths=tuple(float(x) for x in d["shortest_lengths"]),
            converged=bool(d["converged"]),
        )


@dataclass(frozen=True)
class _Objective:
    """Per-edge objective term, its derivative (the edge length) and slope."""

    name: str
    term: Callable[[CostFunction, float], float]
    length: Callable[[CostFunction, float], float]
    slope: Callable[[CostFunction, float], float]


_EQUILIBRIUM = _Objective(
    "equilibrium",
    lambda c, x: c.primitive(x),
    lambda c, x: c(x),
    lambda c, x: c.derivative(x),
)
_OPTIMAL = _Objective(
    "optimal",
    lambda c, x: c(x) * x if x > 0 else 0.0,
    lambda c, x: c.marginal(x),
    lambda c, x: c.marginal_derivative(x),
)


def _line_root(gp: Callable[[float], float], gpp: Callable[[float], float], hi: float) -> float:
    """Root of the nondecreasing ``gp`` on (0, hi), given gp(0) < 0 < gp(hi).

    Newton steps safeguarded by bisection; ``gp`` may return +inf.
    """
    lo = 0.0
    x = 0.5 * hi
    for _ in range(200):
        g = gp(x)
        if g == 0:
            return x
        if g < 0:
            lo = x
        else:
            hi = x
        d = gpp(x)
        step_ok = False
        if 0 < d < math.inf and math.isfinite(g):
            nx = x - g / d
            step_ok = lo < nx < hi
        if not step_ok:
            nx = 0.5 * (lo + hi)
        if abs(nx - x) <= 1e-16 * max(1.0, abs(x)) or hi - lo <= 2e-16 * max(1.0, hi):
            return nx
        x = nx
    return x


class _State:
    """Mutable path-flow state for one solve."""

    def __init__(self, net: RoutingNetwork, obj: _Objective):
        self.net = net
        self.obj = obj
        self.costs = [e.cost for e in net.edges]
        self.caps = [c.capacity * (1 - MM1_MARGIN) for c in self.costs]
        self.paths: list[dict[tuple[int, ...], float]] = [{} for _ in net.commodities]
        self.f = [0.0] * len(net.edges)

    def refresh(self) -> None:
        f = [[] for _ in self.f]
        for paths in self.paths:
            for p, x in paths.items():
                for e in p:
                    f[e].append(x)
        self.f = [math.fsum(v) for v in f]

    def lengths(self) -> list[float]:
        ln = self.obj.length
        return [ln(c, x) for c, x in zip(self.costs, self.f)]

    def objective(self) -> float:
        term = self.obj.term
        return math.fsum(term(c, x) for c, x in zip(self.costs, self.f))

    def feasible(self) -> bool:
        return all(x <= cap for x, cap in zip(self.f, self.caps))

    def gap(self) -> tuple[float, float, list[float]]:
        lens = self.lengths()
        shortest = [shortest_path(self.net, lens, c.source, c.sink)[1] for c in self.net.commodities]
        used = math.fsum(l * x for l, x in zip(lens, self.f) if x > 0)
        bound = math.fsum(c.rate * L for c, L in zip(self.net.commodities, shortest))
        obj = self.objective()
        return max(0.0, used - bound) / max(1.0, obj), obj, shortest

    def shift(self, i: int, src: tuple[int, ...], dst: tuple[int, ...]) -> None:
        """Move the best amount of commodity ``i``'s flow from path ``src`` onto ``dst``."""
        xq = self.paths[i].get(src, 0.0)
        if xq <= 0 or src == dst:
            return
        gain = [e for e in dst if e not in src]
        lose = [e for e in src if e not in dst]
        f, costs, ln, sl = self.f, self.costs, self.obj.length, self.obj.slope
        hi = xq
        for e in gain:
            hi = min(hi, self.caps[e] - f[e])
        if hi <= 0:
            return

        def gp(t):
            return (math.fsum(ln(costs[e], f[e] + t) for e in gain)
                    - math.fsum(ln(costs[e], max(0.0, f[e] - t)) for e in lose))

        def gpp(t):
            return (math.fsum(sl(costs[e], f[e] + t) for e in gain)
                    + math.fsum(sl(costs[e], max(0.0, f[e] - t)) for e in lose))

        if not gp(0.0) < 0:
            return
        t = hi if gp(hi) <= 0 else _line_root(gp, gpp, hi)
        if t <= 0:
            return
        for e in gain:
            f[e] += t
        for e in lose:
            f[e] = max(0.0, f[e] - t)
        paths = self.paths[i]
        if t >= xq:
            del paths[src]
        else:
            paths[src] = xq - t
        paths[dst] = paths.get(dst, 0.0) + t

    def edge_flow(self) -> EdgeFlow:
        parts = []
        for paths in self.paths:
            part = [[] for _ in self.f]
            for p, x in paths.items():
                for e in p:
                    part[e].append(x)
            parts.append([math.fsum(v) for v in part])
        return EdgeFlow.from_commodities(parts)


def _feasible_start(state: _State) -> None:
    """Find strictly feasible path flows under M/M/1 capacities via an LP.

    Maximizes the common demand multiplier ``theta`` subject to the (margin-
    shrunk) capacities, then scales back to the true demand.
    """
    from scipy.optimize import linprog

    net = state.net
    m, n, K = len(net.edges), net.num_vertices, len(net.commodities)
    nvar = K * m + 1
    c = [0.0] * nvar
    c[-1] = -1.0
    a_eq, b_eq = [], []
    for k, com in enumerate(net.commodities):
        for v in range(n):
            row = [0.0] * nvar
            for i, e in enumerate(net.edges):
                if e.tail == v:
                    row[k * m + i] += 1.0
                if e.head == v:
                    row[k * m + i] -= 1.0
            if v == com.source:
                row[-1] -= com.rate
            if v == com.sink:
                row[-1] += com.rate
            a_eq.append(row)
            b_eq.append(0.0)
    a_ub, b_ub = [], []
    for i, cap in enumerate(state.caps):
        if math.isfinite(cap):
            row = [0.0] * nvar
            for k in range(K):
                row[k * m + i] = 1.0
            a_ub.append(row)
            b_ub.append(cap)
    res = linprog(c, A_ub=a_ub or None, b_ub=b_ub or None, A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0, None)] * (nvar - 1) + [(0, 2.0)], method="highs")
    if res.status != 0 or res.x[-1] < 1.0:
        theta = res.x[-1] if res.status == 0 else 0.0
        raise InfeasibleRoutingError(
            f"demand exceeds M/M/1 capacity: at most {theta:.6g} of the rates can be routed"
        )
    theta = res.x[-1]
    for k, com in enumerate(net.commodities):
        x = [max(0.0, v / theta) for v in res.x[k * m:(k + 1) * m]]
        state.paths[k] = _decompose(net, x, com)
    state.refresh()


def _decompose(net: RoutingNetwork, x: list[float], com: Commodity) -> dict[tuple[int, ...], float]:
    x = list(x)
    paths: dict[tuple[int, ...], float] = {}
    routed = 0.0
    eps = 1e-12 * max(1.0, com.rate)
    while com.rate - routed > eps:
        pred = {com.source: None}
        queue = deque([com.source])
        while queue and com.sink not in pred:
            v = queue.popleft()
            for i in net.out_edges[v]:
                w = net.edges[i].head
                if x[i] > eps and w not in pred:
                    pred[w] = i
                    queue.append(w)
        if com.sink not in pred:
            break
        path = []
        v = com.sink
        while v != com.source:
            i = pred[v]
            path.append(i)
            v = net.edges[i].tail
        path = tuple(reversed(path))
        amt = min(min(x[i] for i in path), com.rate - routed)
        for i in path:
            x[i] -= amt
        paths[path] = paths.get(path, 0.0) + amt
        routed += amt
    scale = com.rate / routed
    return {p: v * scale for p, v in paths.items()}


def _solve(net: RoutingNetwork, obj: _Objective, tol: float, max_iter: int, method: str) -> SolveReport:
    if not tol > 0:
        raise RoutingError("tolerance must be > 0")
    if method not in ("paths", "frank-wolfe"):
        raise RoutingError(f"unknown solver method {method!r}")
    state = _State(net, obj)
    if not net.commodities:
        return SolveReport(obj.name, EdgeFlow(tuple(state.f), ()), 0.0, 0.0, 0.0, 0, (), True, ())

    # all-or-nothing on zero-flow lengths
    lens = state.lengths()
    for i, com in enumerate(net.commodities):
        p, _ = shortest_path(net, lens, com.source, com.sink)
        state.paths[i] = {p: com.rate}
    state.refresh()
    if not state.feasible():
        _feasible_start(state)

    step = _paths_step if method == "paths" else _frank_wolfe_step
    it = 0
    while True:
        state.refresh()
        gap, value, shortest = state.gap()
        if gap <= tol or it >= max_iter:
            break
        step(state)
        it += 1
    flow = state.edge_flow()
    return SolveReport(
        kind=obj.name,
        flow=flow,
        objective=value,
        cost=total_cost(net, flow, check=False),
        gap=gap,
        iterations=it,
        shortest_lengths=tuple(shortest),
        converged=gap <= tol,
        path_flows=tuple(dict(p) for p in state.paths),
    )


def _paths_step(state: _State) -> None:
    net = state.net
    for i, com in enumerate(net.commodities):
        sp, _ = shortest_path(net, state.lengths(), com.source, com.sink)
        for p in sorted(state.paths[i]):
            if p != sp:
                state.shift(i, p, sp)


def _frank_wolfe_step(state: _State) -> None:
    net = state.net
    lens = state.lengths()
    targets = [shortest_path(net, lens, c.source, c.sink)[0] for c in net.commodities]
    y = [0.0] * len(state.f)
    for com, p in zip(net.commodities, targets):
        for e in p:
            y[e] += com.rate
    f, costs, ln, sl = state.f, state.costs, state.obj.length, state.obj.slope
    d = [b - a for a, b in zip(f, y)]
    hi = 1.0
    for e, de in enumerate(d):
        if de > 0:
            hi = min(hi, (state.caps[e] - f[e]) / de)
    moving = [e for e, de in enumerate(d) if de != 0]

    def gp(t):
        return math.fsum(ln(costs[e], max(0.0, f[e] + t * d[e])) * d[e] for e in moving)

    def gpp(t):
        return math.fsum(sl(costs[e], max(0.0, f[e] + t * d[e])) * d[e] * d[e] for e in moving)

    if hi <= 0 or not gp(0.0) < 0:
        return
    t = hi if gp(hi) <= 0 else _line_root(gp, gpp, hi)
    for i, (com, target) in enumerate(zip(net.commodities, targets)):
        paths = {p: x * (1 - t) for p, x in state.paths[i].items() if x * (1 - t) > 0}
        paths[target] = paths.get(target, 0.0) + t * com.rate
        state.paths[i] = paths


def equilibrium_flow(net: RoutingNetwork, tol: float = DEFAULT_TOL, *,
                     max_iter: int = DEFAULT_MAX_ITER, method: str = "paths") -> SolveReport:
    """Equilibrium (all traffic on shortest paths) as the potential minimizer."""
    return _solve(net, _EQUILIBRIUM, tol, max_iter, method)


def optimal_flow(net: RoutingNetwork, tol: float = DEFAULT_TOL, *,
                 max_iter: int = DEFAULT_MAX_ITER, method: str = "paths") -> SolveReport:
    """Minimum total cost flow; edge lengths are marginal costs."""
    return _solve(net, _OPTIMAL, tol, max_iter, method)


def price_of_anarchy(net: RoutingNetwork, tol: float = 1e-9) -> float | None:
    """Equilibrium cost over optimal cost; None when the optimal cost is zero."""
    eq = equilibrium_flow(net, tol)
    opt = optimal_flow(net, tol)
    if opt.cost <= 0:
        return None
    return eq.cost / opt.cost


def path_length(net: RoutingNetwork, flow: EdgeFlow, path: Sequence[int]) -> float:
    return math.fsum(net.edges[e].cost(flow.values[e]) for e in path)


# -- network transformations ---------------------------------------------------------

def scale_rates(net: RoutingNetwork, factor: float) -> RoutingNetwork:
    if not factor > 0:
        raise RoutingError("rate factor must be > 0")
    coms = tuple(replace(c, rate=c.rate * factor) for c in net.commodities)
    return RoutingNetwork(net.num_vertices, net.edges, coms)


def with_rates(net: RoutingNetwork, rates: Sequence[float]) -> RoutingNetwork:
    coms = tuple(replace(c, rate=float(r)) for c, r in zip(net.commodities, rates, strict=True))
    return RoutingNetwork(net.num_vertices, net.edges, coms)


def make_fictitious(net: RoutingNetwork, flow: EdgeFlow) -> RoutingNetwork:
    """Replace each cost by ``max(c_e(x), c_e(f_e))``."""
    check_flow(net, flow)
    edges = tuple(
        e if isinstance(e.cost, Constant) else replace(e, cost=Clamped(e.cost, x))
        for e, x in zip(net.edges, flow.values)
    )
    return RoutingNetwork(net.num_vertices, edges, net.commodities)


def make_slower(net: RoutingNetwork) -> RoutingNetwork:
    """Replace each cost by ``c_e(x/2) / 2`` (M/M/1 capacity u becomes 2u)."""
    edges = tuple(replace(e, cost=e.cost.slower()) for e in net.edges)
    return RoutingNetwork(net.num_vertices, edges, net.commodities)


# -- instance families ------------------------------------------------------------------

def parallel_links(costs: Sequence[CostFunction], rate: float = 1.0) -> RoutingNetwork:
    """Vertex 0 -> vertex 1 over one edge per cost function."""
    return RoutingNetwork(2, tuple(Edge(0, 1, c) for c in costs), (Commodity(0, 1, rate),))


def pigou(rate: float = 1.0) -> RoutingNetwork:
    return parallel_links([Constant(1.0), Affine(1.0, 0.0)], rate)


def nonlinear_pigou(d: float, rate: float = 1.0) -> RoutingNetwork:
    return parallel_links([Constant(1.0), Monomial(1.0, d)], rate)


def mm1_link(u: float, rate: float = 1.0) -> RoutingNetwork:
    return parallel_links([MM1(u)], rate)


def capacity_ladder(n: int, rho: float = 2.0, degree: int = 64, rate: float = 1.0) -> RoutingNetwork:
    """``n`` parallel links with cost ``rho**i * (1 + (n*x/rate)**degree)``.

    Each link behaves like a soft capacity of ``rate/n`` at base level
    ``rho**i``. At equilibrium every used link is priced at the level of the
    most expensive one in use, while the optimum pays roughly each link's own
    base level, so the price of anarchy stays large across all of
    [rate/2, rate] and grows with ``n``.
    """
    if n < 1 or not rho > 1 or degree < 1:
        raise RoutingError("need n >= 1, rho > 1 and degree >= 1")
    scale = (n / rate) ** degree
    costs = [
        Polynomial((rho ** i,) + (0.0,) * (degree - 1) + (rho ** i * scale,))
        for i in range(n)
    ]
    return parallel_links(costs, rate)


def _random_cost(rng: random.Random, kinds: Sequence[str]) -> CostFunction:
    kind = rng.choice(kinds)
    if kind == "constant":
        return Constant(round(rng.uniform(0.5, 3.0), 3))
    if kind == "affine":
        return Affine(round(rng.uniform(0.1, 2.0), 3), round(rng.uniform(0.0, 2.0), 3))
    if kind == "monomial":
        return Monomial(round(rng.uniform(0.1, 2.0), 3), rng.choice([2, 3, 4]))
    if kind == "polynomial":
        return Polynomial(tuple(round(rng.uniform(0.0, 1.0), 3) for _ in range(rng.randint(2, 4))))
    raise RoutingError(f"unknown random cost kind {kind!r}")


def random_network(num_vertices: int = 10, seed: int = 0, *, extra_edges: int = 15,
                   rate: float = 1.0, commodities: int = 1) -> RoutingNetwork:
    """Seeded random digraph: a spine 0 -> 1 -> ... -> n-1 plus random chords.

    Costs are affine, monomial, polynomial or constant. With two commodities
    the second routes from vertex 1 to vertex n-2.
    """
    if num_vertices < 3:
        raise RoutingError("need at least 3 vertices")
    rng = random.Random(seed)
    kinds = ("affine", "monomial", "polynomial", "constant")
    edges = [Edge(v, v + 1, _random_cost(rng, kinds[:3])) for v in range(num_vertices - 1)]
    pairs = {(e.tail, e.head) for e in edges}
    attempts = 0
    while len(edges) < num_vertices - 1 + extra_edges and attempts < 100 * extra_edges:
        attempts += 1
        a, b = rng.randrange(num_vertices), rng.randrange(num_vertices)
        if a == b or (a, b) in pairs:
            continue
        pairs.add((a, b))
        edges.append(Edge(a, b, _random_cost(rng, kinds)))
    coms = [Commodity(0, num_vertices - 1, rate)]
    if commodities >= 2:
        coms.append(Commodity(1, num_vertices - 2, round(rng.uniform(0.5, 1.5), 3) * rate))
    return RoutingNetwork(num_vertices, tuple(edges), tuple(coms))


def random_parallel_network(seed: int, max_links: int = 6, rate: float | None = None) -> RoutingNetwork:
    """Seeded 2..max_links parallel links with affine, monomial or M/M/1 costs."""
    rng = random.Random(seed)
    n = rng.randint(2, max_links)
    r = round(rng.uniform(0.5, 3.0), 3) if rate is None else rate
    costs: list[CostFunction] = []
    for _ in range(n):
        kind = rng.choice(("affine", "monomial", "mm1"))
        if kind == "mm1":
            costs.append(MM1(round(rng.uniform(0.6, 1.5) * r, 3)))
        else:
            costs.append(_random_cost(rng, (kind,)))
    if not any(isinstance(c, (Affine, Monomial)) for c in costs):
        total_u = sum(c.capacity for c in costs)
        if total_u <= 1.05 * r:
            costs.append(Affine(1.0, 0.5))
    return parallel_links(costs, r)


# -- file formats ------------------------------------------------------------------------

def network_to_dict(net: RoutingNetwork) -> dict[str, Any]:
    return {
        "vertices": net.num_vertices,
        "edges": [{"tail": e.tail, "head": e.head, "cost": e.cost.to_dict()} for e in net.edges],
        "commodities": [
            {"source": c.source, "sink": c.sink, "rate": format_number(c.rate)}
            for c in net.commodities
        ],
    }


def network_from_dict(d: dict[str, Any]) -> RoutingNetwork:
    try:
        edges = tuple(
            Edge(int(e["tail"]), int(e["head"]), cost_from_dict(e["cost"])) for e in d["edges"]
        )
        coms = tuple(
            Commodity(int(c["source"]), int(c["sink"]), float(c["rate"])) for c in d["commodities"]
        )
        return RoutingNetwork(int(d["vertices"]), edges, coms)
    except KeyError as exc:
        raise RoutingError(f"network file is missing field {exc.args[0]!r}") from None


def read_network(path: str | Path) -> RoutingNetwork:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise RoutingError(f"{path}: invalid JSON ({exc})") from None
    return network_from_dict(data)


def write_network(net: RoutingNetwork, path: str | Path) -> None:
    Path(path).write_text(json.dumps(network_to_dict(net), indent=2, sort_keys=True) + "\n")
