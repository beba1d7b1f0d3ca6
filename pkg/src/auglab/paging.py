"""Demand-paging simulation: LRU, FIFO and the offline FIF (Belady) policy.

Caches start empty, so compulsory misses count as faults. Page IDs are
dense integers in ``[0, N)``; `from_tokens` maps arbitrary tokens onto them.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import json
import random
from collections import OrderedDict, deque
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass
from pathlib import Path


class PagingError(ValueError):
    pass


class Policy(str, enum.Enum):
    LRU = "lru"
    FIFO = "fifo"
    FIF = "fif"

    @classmethod
    def parse(cls, value: str | Policy) -> Policy:
        if isinstance(value, Policy):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise PagingError(f"unknown paging policy {value!r}") from None


@dataclass(frozen=True)
class PageRequestSequence:
    requests: tuple[int, ...]
    universe_size: int

    def __post_init__(self):
        object.__setattr__(self, "requests", tuple(int(p) for p in self.requests))
        if self.universe_size < 1:
            raise PagingError("universe_size must be >= 1")
        for i, p in enumerate(self.requests):
            if not 0 <= p < self.universe_size:
                raise PagingError(
                    f"request {i} is page {p}, outside [0, {self.universe_size})"
                )

    def __len__(self) -> int:
        return len(self.requests)

    def __iter__(self):
        return iter(self.requests)

    def __getitem__(self, i):
        return self.requests[i]

    @classmethod
    def of(cls, requests: Iterable[int], universe_size: int | None = None) -> PageRequestSequence:
        """Build a sequence, inferring ``N = max + 1`` when not given."""
        reqs = tuple(int(p) for p in requests)
        if universe_size is None:
            universe_size = max(reqs, default=0) + 1
        return cls(reqs, universe_size)


def from_tokens(tokens: Iterable[Hashable]) -> tuple[PageRequestSequence, dict[Hashable, int]]:
    """Map arbitrary page tokens to dense IDs in order of first appearance."""
    ids: dict[Hashable, int] = {}
    reqs = [ids.setdefault(tok, len(ids)) for tok in tokens]
    return PageRequestSequence(tuple(reqs), max(1, len(ids))), ids


def _as_sequence(z) -> PageRequestSequence:
    if isinstance(z, PageRequestSequence):
        return z
    return PageRequestSequence.of(z)


def _check_k(k: int) -> None:
    if int(k) != k or k < 1:
        raise PagingError(f"cache size must be a positive integer, got {k!r}")


@dataclass(frozen=True)
class PagingSimResult:
    policy: Policy
    cache_size: int
    fault_flags: tuple[bool, ...]
    final_cache: frozenset[int]

    @property
    def fault_count(self) -> int:
        return sum(self.fault_flags)

    def to_dict(self) -> dict:
        return {
            "policy": self.policy.value,
            "k": self.cache_size,
            "faults": self.fault_count,
            "len": len(self.fault_flags),
            "fault_flags": "".join("1" if f else "0" for f in self.fault_flags),
            "final_cache": sorted(self.final_cache),
        }

    @classmethod
    def from_dict(cls, d: dict) -> PagingSimResult:
        flags = tuple(c == "1" for c in d["fault_flags"])
        if len(flags) != d["len"] or sum(flags) != d["faults"]:
            raise PagingError("fault record is inconsistent")
        return cls(Policy.parse(d["policy"]), int(d["k"]), flags, frozenset(d["final_cache"]))


class OnlineCache:
    """Step-by-step LRU or FIFO cache, used by `simulate` and the adaptive adversary."""

    def __init__(self, policy: Policy | str, k: int):
        self.policy = Policy.parse(policy)
        if self.policy is Policy.FIF:
            raise PagingError("FIF needs the whole sequence; it is not an online policy")
        _check_k(k)
        self.k = k
        # LRU: least recently used first. FIFO: oldest insertion first.
        self._order: OrderedDict[int, None] = OrderedDict()

    def __contains__(self, page: int) -> bool:
        return page in self._order

    @property
    def contents(self) -> frozenset[int]:
        return frozenset(self._order)

    def request(self, page: int) -> bool:
        """Serve one request; return True on a fault."""
        order = self._order
        if page in order:
            if self.policy is Policy.LRU:
                order.move_to_end(page)
            return False
        if len(order) >= self.k:
            order.popitem(last=False)
        order[page] = None
        return True


def _simulate_fif(k: int, reqs: Sequence[int]) -> tuple[list[bool], set[int]]:
    n = len(reqs)
    never = n  # stands in for +inf: larger than any real index
    next_use = [never] * n
    last_seen: dict[int, int] = {}
    for i in range(n - 1, -1, -1):
        next_use[i] = last_seen.get(reqs[i], never)
        last_seen[reqs[i]] = i

    cache: dict[int, int] = {}  # page -> index of its next request
    heap: list[tuple[int, int]] = []  # (-next_use, page); stale entries skipped lazily
    flags = []
    for i, page in enumerate(reqs):
        if page in cache:
            flags.append(False)
        else:
            flags.append(True)
            if len(cache) >= k:
                while True:
                    neg_next, victim = heapq.heappop(heap)
                    if cache.get(victim) == -neg_next:
                        break
                del cache[victim]
        cache[page] = next_use[i]
        heapq.heappush(heap, (-next_use[i], page))
    return flags, set(cache)


def simulate(policy: Policy | str, k: int, z) -> PagingSimResult:
    """Run one policy with cache size ``k`` over ``z`` from a cold cache.

    FIF evicts the page whose next request is furthest away; pages never
    requested again count as infinitely far, ties going to the lowest page ID.
    """
    policy = Policy.parse(policy)
    _check_k(k)
    z = _as_sequence(z)
    if policy is Policy.FIF:
        flags, final = _simulate_fif(k, z.requests)
    else:
        cache = OnlineCache(policy, k)
        flags = [cache.request(p) for p in z.requests]
        final = cache.contents
    return PagingSimResult(policy, k, tuple(flags), frozenset(final))


def faults(policy: Policy | str, k: int, z) -> int:
    return simulate(policy, k, z).fault_count


def lru_fault_curve(z, k_max: int) -> list[int]:
    """LRU fault counts for every cache size 1..k_max in one pass.

    Uses LRU stack distances: a request faults with cache size k iff its page
    is absent from the top k of the recency stack.
    """
    _check_k(k_max)
    z = _as_sequence(z)
    hist = [0] * (k_max + 1)  # hist[d] = hits at stack depth d (1-based), capped
    cold = 0
    stack: list[int] = []  # most recent first
    for page in z.requests:
        try:
            depth = stack.index(page)
        except ValueError:
            cold += 1
            stack.insert(0, page)
            continue
        if depth < k_max:
            hist[depth + 1] += 1
        del stack[depth]
        stack.insert(0, page)
    n = len(z)
    out = []
    hits = 0
    for k in range(1, k_max + 1):
        hits += hist[k]
        out.append(n - hits)
    return out


class BruteForceGuardError(PagingError):
    pass


def offline_opt_bruteforce(z, k: int, *, max_pages: int = 8, max_len: int = 20) -> int:
    """Minimum fault count over every demand-paging eviction strategy.

    Exhaustive dynamic programming over reachable cache states; independent of
    the FIF rule and meant as its oracle on small inputs.
    """
    _check_k(k)
    z = _as_sequence(z)
    if z.universe_size > max_pages or len(z) > max_len:
        raise BruteForceGuardError(
            f"oracle guard exceeded: N={z.universe_size} (max {max_pages}), "
            f"|z|={len(z)} (max {max_len})"
        )
    # cache contents as bitmasks over page IDs
    states: dict[int, int] = {0: 0}
    for page in z.requests:
        bit = 1 << page
        nxt: dict[int, int] = {}
        for cache, cost in states.items():
            if cache & bit:
                options = [cache]
            elif cache.bit_count() < k:
                options = [cache | bit]
                cost += 1
            else:
                options = []
                rest = cache
                while rest:
                    low = rest & -rest
                    options.append(cache ^ low | bit)
                    rest ^= low
                cost += 1
            for state in options:
                if cost < nxt.get(state, cost + 1):
                    nxt[state] = cost
        states = nxt
    return min(states.values())


@dataclass(frozen=True)
class BlockDecomposition:
    """Greedy maximal blocks, each with at most ``k`` distinct pages."""

    k: int
    blocks: tuple[tuple[int, int], ...]  # half-open [start, stop) index ranges

    @property
    def count(self) -> int:
        return len(self.blocks)

    def slices(self, z) -> list[tuple[int, ...]]:
        reqs = _as_sequence(z).requests
        return [reqs[a:b] for a, b in self.blocks]


def decompose_blocks(z, k: int) -> BlockDecomposition:
    _check_k(k)
    reqs = _as_sequence(z).requests
    blocks = []
    start = 0
    seen: set[int] = set()
    for i, page in enumerate(reqs):
        if page not in seen and len(seen) == k:
            blocks.append((start, i))
            start = i
            seen = set()
        seen.add(page)
    if reqs:
        blocks.append((start, len(reqs)))
    return BlockDecomposition(k, tuple(blocks))


def gen_cyclic_adversary(k: int, length: int) -> PageRequestSequence:
    """0, 1, ..., k, 0, 1, ... over k+1 pages."""
    _check_k(k)
    if length < 1:
        raise PagingError("length must be >= 1")
    return PageRequestSequence(tuple(i % (k + 1) for i in range(length)), k + 1)


def gen_adaptive_adversary(policy: Policy | str, k: int, length: int) -> PageRequestSequence:
    """Always request the lowest-numbered of k+1 pages missing from the policy's cache."""
    if length < 1:
        raise PagingError("length must be >= 1")
    cache = OnlineCache(policy, k)
    pool = range(k + 1)
    reqs = []
    for _ in range(length):
        page = next(p for p in pool if p not in cache)
        cache.request(page)
        reqs.append(page)
    return PageRequestSequence(tuple(reqs), k + 1)


def gen_locality_workload(
    N: int, length: int, seed: int, locality_param: float, window: int = 8
) -> PageRequestSequence:
    """Seeded workload mixing recency re-references with uniform requests.

    With probability ``locality_param`` the next request re-uses one of the
    ``window`` most recently requested distinct pages (chosen uniformly);
    otherwise it is uniform over all ``N`` pages.
    """
    if not 0 <= locality_param <= 1:
        raise PagingError("locality_param must lie in [0, 1]")
    if N < 1 or length < 0 or window < 1:
        raise PagingError("need N >= 1, length >= 0, window >= 1")
    rng = random.Random(seed)
    recent: list[int] = []  # distinct pages, most recent first
    reqs = []
    for _ in range(length):
        if recent and rng.random() < locality_param:
            page = recent[rng.randrange(min(window, len(recent)))]
        else:
            page = rng.randrange(N)
        if page in recent:
            recent.remove(page)
        recent.insert(0, page)
        del recent[window:]
        reqs.append(page)
    return PageRequestSequence(tuple(reqs), N)


def all_sequences(N: int, max_len: int) -> Iterable[tuple[int, ...]]:
    """Every request sequence over ``N`` pages with length 0..max_len."""
    for n in range(max_len + 1):
        yield from itertools.product(range(N), repeat=n)


# -- trace files --------------------------------------------------------------

def write_trace(z: PageRequestSequence, path: str | Path) -> None:
    lines = [f"N={z.universe_size}"] + [str(p) for p in z.requests]
    Path(path).write_text("\n".join(lines) + "\n")


def read_trace(path: str | Path) -> PageRequestSequence:
    """One page ID per line, optionally preceded by a header ``N=<int>``.

    Without the header the universe is inferred as ``max + 1``, so an empty
    file is the empty sequence.
    """
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    numbered = [(i, ln) for i, ln in enumerate(lines, start=1) if ln]
    N = None
    if numbered and numbered[0][1].startswith("N="):
        try:
            N = int(numbered[0][1][2:])
        except ValueError:
            raise PagingError(f"{path}: bad header {numbered[0][1]!r}") from None
        numbered = numbered[1:]
    reqs = []
    for lineno, ln in numbered:
        try:
            reqs.append(int(ln))
        except ValueError:
            raise PagingError(f"{path}:{lineno}: not an integer: {ln!r}") from None
    return PageRequestSequence.of(reqs, N)


def result_record(result: PagingSimResult) -> str:
    return json.dumps(
        {"policy": result.policy.value, "k": result.cache_size,
         "faults": result.fault_count, "len": len(result.fault_flags)},
        sort_keys=True,
    )
