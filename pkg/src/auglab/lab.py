"""Performance curves and resource-augmentation checks across the three engines."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from auglab import paging, routing, scheduling
from auglab.paging import Policy
from auglab.report import VerificationReport, format_number, parse_number

ROUTING_SLACK = 1e-5
ROUTING_TOL = 1e-10

ENGINES = (
    "paging:lru", "paging:fifo", "paging:fif",
    "routing:equilibrium", "routing:optimal",
    "scheduling:srpt", "scheduling:setf",
)


class LabError(ValueError):
    pass


@dataclass(frozen=True)
class PerformanceCurve:
    levels: tuple
    values: tuple
    algorithm: str
    instance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.levels) != len(self.values):
            raise LabError("levels and values differ in length")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise LabError("resource levels must be strictly increasing")
        if any(v < 0 for v in self.values):
            raise LabError("curve values must be nonnegative")

    def to_dict(self) -> dict[str, Any]:
        return {
            "algorithm": self.algorithm,
            "instance": self.instance,
            "levels": [format_number(x) for x in self.levels],
            "values": [format_number(v) for v in self.values],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> PerformanceCurve:
        return cls(
            tuple(parse_number(x) for x in d["levels"]),
            tuple(parse_number(v) for v in d["values"]),
            d["algorithm"],
            d.get("instance", ""),
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["resource", "value"])
        for x, v in zip(self.levels, self.values):
            w.writerow([format_number(x), format_number(v)])
        return buf.getvalue()


def _point(engine: str, instance, level):
    family, algo = engine.split(":")
    if family == "paging":
        return paging.faults(algo, int(level), instance)
    if family == "routing":
        net = routing.scale_rates(instance, float(level) / instance.total_rate)
        solve = routing.equilibrium_flow if algo == "equilibrium" else routing.optimal_flow
        return solve(net, ROUTING_TOL).cost
    if algo == "srpt":
        return scheduling.total_flow_time(scheduling.simulate_srpt(instance, level))
    return scheduling.total_flow_time(scheduling.simulate_setf(instance, level))


def curve(engine: str, instance, levels: Sequence, *, jobs: int = 1, name: str = "") -> PerformanceCurve:
    """Cost at each resource level.

    Paging levels are cache sizes, routing levels are total traffic rates
    (commodity rates scaled proportionally), scheduling levels are speeds.
    """
    if engine not in ENGINES:
        raise LabError(f"unknown engine {engine!r}; expected one of {', '.join(ENGINES)}")
    levels = list(levels)
    if jobs > 1 and len(levels) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_point, [engine] * len(levels), [instance] * len(levels), levels))
    else:
        values = [_point(engine, instance, x) for x in levels]
    return PerformanceCurve(tuple(levels), tuple(values), engine, name)


# -- paging: resource augmentation ----------------------------------------------------

def _ra_report(policy: Policy, k: int, h: int, online: int, fif: int, blocks: int, length: int
               ) -> VerificationReport:
    return VerificationReport(
        claim=f"{policy.value}-resource-augmentation",
        left=online,
        right=Fraction(k, k - h + 1) * fif,
        slack=k,
        context={
            "policy": policy.value, "k": k, "h": h, "len": length,
            "online_faults": online, "fif_faults": fif, "blocks": blocks,
            "block_upper_ok": online <= blocks * k,
            "shifted_lower_ok": fif >= (blocks - 1) * (k - h + 1),
        },
    )


def verify_lru_ra(z, k: int, h: int, policy: Policy | str = Policy.LRU) -> VerificationReport:
    """Online faults at cache size k against k/(k-h+1) times FIF faults at size h.

    The additive slack is k: the last block is the only one without a
    matching shifted block on the FIF side.
    """
    policy = Policy.parse(policy)
    if policy is Policy.FIF:
        raise LabError("the protagonist must be an online policy")
    if not 1 <= h <= k:
        raise LabError(f"need 1 <= h <= k, got h={h}, k={k}")
    z = paging._as_sequence(z)
    online = paging.faults(policy, k, z)
    fif = paging.faults(Policy.FIF, h, z)
    blocks = paging.decompose_blocks(z, k).count
    return _ra_report(policy, k, h, online, fif, blocks, len(z))


def verify_lru_ra_sweep(z, k_max: int, policy: Policy | str = Policy.LRU) -> list[VerificationReport]:
    """`verify_lru_ra` for every 1 <= h <= k <= k_max, sharing simulations."""
    policy = Policy.parse(policy)
    z = paging._as_sequence(z)
    if policy is Policy.LRU:
        online = paging.lru_fault_curve(z, k_max)
    else:
        online = [paging.faults(policy, k, z) for k in range(1, k_max + 1)]
    fif = [paging.faults(Policy.FIF, h, z) for h in range(1, k_max + 1)]
    blocks = [paging.decompose_blocks(z, k).count for k in range(1, k_max + 1)]
    return [
        _ra_report(policy, k, h, online[k - 1], fif[h - 1], blocks[k - 1], len(z))
        for k in range(1, k_max + 1)
        for h in range(1, k + 1)
    ]


# -- paging: loose competitiveness ------------------------------------------------------

COMPETITIVE, LOW_FAULT_RATE, EXEMPT = "competitive", "low_fault_rate", "exempt"


@dataclass(frozen=True)
class SizeClass:
    k: int
    category: str
    online: int
    online_augmented: int  # faults with cache size k + b
    fif: int
    bound: Fraction | None
    slack: int

    @property
    def holds(self) -> bool:
        return self.bound is None or self.online <= self.bound + self.slack

    def to_dict(self) -> dict[str, Any]:
        return {
            "k": self.k, "category": self.category,
            "lru": self.online, "lru_augmented": self.online_augmented, "fif": self.fif,
            "bound": None if self.bound is None else format_number(self.bound),
            "slack": self.slack, "holds": self.holds,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> SizeClass:
        bound = d["bound"]
        size = cls(int(d["k"]), d["category"], int(d["lru"]), int(d["lru_augmented"]),
                   int(d["fif"]), None if bound is None else Fraction(bound), int(d["slack"]))
        if "holds" in d and bool(d["holds"]) != size.holds:
            raise LabError(f"k={size.k}: stored holds flag disagrees with the stored values")
        return size


@dataclass(frozen=True)
class LooseClassification:
    policy: Policy
    eps: Fraction
    delta: Fraction
    n: int
    b: int
    length: int
    sizes: tuple[SizeClass, ...]

    @property
    def max_exempt(self) -> int:
        return math.ceil(self.delta * self.n)

    @property
    def exempt_count(self) -> int:
        return sum(1 for s in self.sizes if s.category == EXEMPT)

    @property
    def violations(self) -> list[str]:
        out = [f"k={s.k} ({s.category}): {s.online} > {s.bound} + {s.slack}"
               for s in self.sizes if not s.holds]
        if self.exempt_count > self.max_exempt:
            out.append(f"{self.exempt_count} exempt sizes exceed {self.max_exempt}")
        return out

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def slack_material(self) -> list[int]:
        """Competitive sizes whose FIF fault count is under 10k, where the additive slack matters."""
        return [s.k for s in self.sizes if s.category == COMPETITIVE and s.fif < 10 * s.k]

    def to_dict(self) -> dict[str, Any]:
        return {
            "policy": self.policy.value,
            "eps": format_number(self.eps), "delta": format_number(self.delta),
            "n": self.n, "b": self.b, "len": self.length,
            "exempt": self.exempt_count, "max_exempt": self.max_exempt,
            "slack_material": self.slack_material,
            "ok": self.ok,
            "sizes": [s.to_dict() for s in self.sizes],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> LooseClassification:
        return cls(Policy.parse(d["policy"]), Fraction(d["eps"]), Fraction(d["delta"]),
                   int(d["n"]), int(d["b"]), int(d["len"]),
                   tuple(SizeClass.from_dict(x) for x in d["sizes"]))


def _exact(x) -> Fraction:
    return Fraction(str(x)) if isinstance(x, float) else Fraction(x)


def loose_classify(z, n: int, eps, delta, policy: Policy | str = Policy.LRU) -> LooseClassification:
    """Sort cache sizes 1..n into competitive / low-fault-rate / exempt.

    With ``b = ceil(delta*n / log2(1/eps))``, size k is good when adding b
    pages at most halves the fault count; good sizes are held to the ratio
    2(k+b)/(b+1) against FIF at the same size (additive slack 2(k+b), twice
    the resource-augmentation slack at size k+b). The first ceil(delta*n) bad
    sizes are exempt, and later bad sizes are held to eps*|z| faults.
    """
    policy = Policy.parse(policy)
    if policy is Policy.FIF:
        raise LabError("the protagonist must be an online policy")
    eps, delta = _exact(eps), _exact(delta)
    if not (0 < eps < 1 and 0 < delta < 1 and n >= 1):
        raise LabError("need 0 < eps < 1, 0 < delta < 1 and n >= 1")
    b = math.ceil(float(delta * n) / math.log2(1 / eps))
    if b <= 0:
        raise LabError("degenerate parameters: b = 0")
    z = paging._as_sequence(z)
    if policy is Policy.LRU:
        online = paging.lru_fault_curve(z, n + b)
    else:
        online = [paging.faults(policy, k, z) for k in range(1, n + b + 1)]
    max_exempt = math.ceil(delta * n)
    bad_seen = 0
    sizes = []
    for k in range(1, n + 1):
        cur, aug = online[k - 1], online[k + b - 1]
        fif = paging.faults(Policy.FIF, k, z)
        if 2 * aug >= cur:
            sizes.append(SizeClass(k, COMPETITIVE, cur, aug, fif,
                                   Fraction(2 * (k + b), b + 1) * fif, 2 * (k + b)))
            continue
        if bad_seen >= max_exempt:
            sizes.append(SizeClass(k, LOW_FAULT_RATE, cur, aug, fif, eps * len(z), 0))
        else:
            sizes.append(SizeClass(k, EXEMPT, cur, aug, fif, None, 0))
        bad_seen += 1
    return LooseClassification(policy, eps, delta, n, b, len(z), tuple(sizes))


# -- routing ---------------------------------------------------------------------------------

def verify_routing_ra(net: routing.RoutingNetwork, delta: float, *, tol: float = ROUTING_TOL,
                      slack: float = ROUTING_SLACK) -> VerificationReport:
    """Equilibrium cost at rates r against 1/delta times optimal cost at (1+delta) r.

    The context also records the fictitious-cost steps of the argument: under
    costs max(c_e(x), c_e(f_e)) the optimal flow costs at least
    (1+delta) sum_i r_i L_i, and at most the equilibrium cost more than its true cost.
    """
    if not delta > 0:
        raise LabError("delta must be > 0")
    eq = routing.equilibrium_flow(net, tol)
    big = routing.scale_rates(net, 1 + delta)
    opt = routing.optimal_flow(big, tol)
    fict = routing.make_fictitious(net, eq.flow)
    fict_cost = math.fsum(
        e.cost(x) * x for e, x in zip(fict.edges, opt.flow.values) if x > 0
    )
    lengths_bound = (1 + delta) * math.fsum(
        c.rate * L for c, L in zip(net.commodities, eq.shortest_lengths)
    )
    return VerificationReport(
        claim="equilibrium-vs-augmented-optimum",
        left=eq.cost,
        right=opt.cost / delta,
        slack=slack,
        context={
            "delta": delta,
            "rates": [c.rate for c in net.commodities],
            "eq_cost": eq.cost, "opt_cost_augmented": opt.cost,
            "eq_gap": eq.gap, "opt_gap": opt.gap,
            "fictitious_lower_ok": fict_cost >= lengths_bound - slack,
            "fictitious_excess_ok": fict_cost - opt.cost <= eq.cost + slack,
        },
    )


def verify_bicriteria(net: routing.RoutingNetwork, *, tol: float = ROUTING_TOL,
                      slack: float = ROUTING_SLACK) -> VerificationReport:
    """Equilibrium cost with costs c(x/2)/2 against the optimal cost with the original costs."""
    slow = routing.make_slower(net)
    eq = routing.equilibrium_flow(slow, tol)
    opt = routing.optimal_flow(net, tol)
    doubled = all(
        s.cost.u == 2 * e.cost.u
        for e, s in zip(net.edges, slow.edges) if isinstance(e.cost, routing.MM1)
    )
    return VerificationReport(
        claim="slower-network-equilibrium-vs-optimum",
        left=eq.cost,
        right=opt.cost,
        slack=slack,
        context={"eq_gap": eq.gap, "opt_gap": opt.gap, "mm1_capacity_doubled": doubled},
    )


@dataclass(frozen=True)
class RoutingLooseReport:
    rate: float
    beta: float
    pi: float | None
    threshold: float | None
    rates: tuple[float, ...]
    poa: tuple[float | None, ...]

    @property
    def alpha_hat(self) -> float | None:
        if self.threshold is None:
            return None
        ok = sum(1 for p in self.poa if p is not None and p <= self.threshold)
        return ok / len(self.rates)

    def to_dict(self) -> dict[str, Any]:
        return {
            "rate": self.rate, "beta": self.beta, "pi": self.pi, "threshold": self.threshold,
            "rates": list(self.rates), "poa": list(self.poa), "alpha_hat": self.alpha_hat,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> RoutingLooseReport:
        return cls(d["rate"], d["beta"], d["pi"], d["threshold"], tuple(d["rates"]), tuple(d["poa"]))


def routing_loose_curve(net: routing.RoutingNetwork, r: float, samples: int, beta: float,
                        *, tol: float = ROUTING_TOL) -> RoutingLooseReport:
    """Fraction of rates in [r/2, r] whose price of anarchy is at most beta * ln(pi).

    ``pi`` is the ratio of equilibrium costs at total rates r and r/2; rates are
    an evenly spaced grid of ``samples`` points including both ends.
    """
    if samples < 2 or not beta > 0 or not r > 0:
        raise LabError("need samples >= 2, beta > 0 and r > 0")

    def at(rate):
        return routing.scale_rates(net, rate / net.total_rate)

    eq_full = routing.equilibrium_flow(at(r), tol).cost
    eq_half = routing.equilibrium_flow(at(r / 2), tol).cost
    pi = eq_full / eq_half if eq_half > 0 else None
    threshold = beta * math.log(pi) if pi is not None else None
    rates = tuple(r / 2 + (r / 2) * i / (samples - 1) for i in range(samples))
    poa = tuple(routing.price_of_anarchy(at(x), tol) for x in rates)
    return RoutingLooseReport(r, beta, pi, threshold, rates, poa)
