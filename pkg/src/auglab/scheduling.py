"""Preemptive single-machine scheduling in exact rational time.

SRPT and SETF (least attained service) are simulated event by event with
``fractions.Fraction`` so that completions, catch-up instants and flow times
are exact and re-simulation is bit-identical. Jobs are active on the
right-open interval ``[release, completion)``.
"""

from __future__ import annotations

import json
import math
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Any, Iterable, Mapping

from auglab.report import VerificationReport, format_number, parse_rational


class ScheduleError(ValueError):
    pass


def _q(x) -> Fraction:
    if isinstance(x, float):
        raise ScheduleError("use exact rationals (Fraction, int or 'num/den' strings), not floats")
    return parse_rational(x)


@dataclass(frozen=True)
class Job:
    id: int
    release: Fraction
    processing: Fraction

    def __post_init__(self):
        object.__setattr__(self, "release", _q(self.release))
        object.__setattr__(self, "processing", _q(self.processing))
        if self.release < 0:
            raise ScheduleError(f"job {self.id}: release must be >= 0")
        if self.processing <= 0:
            raise ScheduleError(f"job {self.id}: processing must be > 0")


@dataclass(frozen=True)
class JobSet:
    jobs: tuple[Job, ...]

    def __post_init__(self):
        jobs = tuple(sorted(self.jobs, key=lambda j: (j.release, j.id)))
        ids = [j.id for j in jobs]
        if len(set(ids)) != len(ids):
            raise ScheduleError("job ids must be unique")
        object.__setattr__(self, "jobs", jobs)

    @classmethod
    def of(cls, pairs: Iterable[tuple[Any, Any]]) -> JobSet:
        """Jobs numbered 1, 2, ... from (release, processing) pairs."""
        return cls(tuple(Job(i, r, p) for i, (r, p) in enumerate(pairs, start=1)))

    def __len__(self):
        return len(self.jobs)

    def __iter__(self):
        return iter(self.jobs)

    @cached_property
    def by_id(self) -> dict[int, Job]:
        return {j.id: j for j in self.jobs}


def _as_jobset(jobs) -> JobSet:
    return jobs if isinstance(jobs, JobSet) else JobSet(tuple(jobs))


def _speed(speed) -> Fraction:
    s = _q(speed)
    if s <= 0:
        raise ScheduleError("speed must be > 0")
    return s


@dataclass(frozen=True)
class Interval:
    """Constant processing rates over ``[start, end)``; ``rates`` holds (job id, rate)."""

    start: Fraction
    end: Fraction
    rates: tuple[tuple[int, Fraction], ...]

    @property
    def processed(self) -> frozenset[int]:
        return frozenset(j for j, r in self.rates if r > 0)


@dataclass(frozen=True)
class Timeline:
    policy: str
    jobs: JobSet
    speed: Fraction
    intervals: tuple[Interval, ...]
    completion_pairs: tuple[tuple[int, Fraction], ...]

    @cached_property
    def completions(self) -> dict[int, Fraction]:
        return dict(self.completion_pairs)

    @property
    def events(self) -> tuple[Fraction, ...]:
        if not self.intervals:
            return ()
        return (self.intervals[0].start,) + tuple(iv.end for iv in self.intervals)

    @property
    def horizon(self) -> Fraction:
        return self.intervals[-1].end if self.intervals else Fraction(0)

    def is_active(self, job: Job, t) -> bool:
        return job.release <= t < self.completions[job.id]

    def validate(self) -> None:
        """Raise ScheduleError on any broken timeline invariant."""
        s = self.speed
        work = {j.id: Fraction(0) for j in self.jobs}
        last_end = {j.id: None for j in self.jobs}
        prev_end = None
        for iv in self.intervals:
            if not iv.start < iv.end:
                raise ScheduleError(f"empty or reversed interval at {iv.start}")
            if prev_end is not None and iv.start != prev_end:
                raise ScheduleError(f"timeline has a hole or overlap at {iv.start}")
            prev_end = iv.end
            total = sum((r for _, r in iv.rates), Fraction(0))
            if total > s:
                raise ScheduleError(f"rates exceed speed on [{iv.start}, {iv.end})")
            if any(self.is_active(j, iv.start) for j in self.jobs) and total != s:
                raise ScheduleError(f"machine idles with active jobs on [{iv.start}, {iv.end})")
            for jid, r in iv.rates:
                job = self.jobs.by_id[jid]
                if r < 0 or iv.start < job.release or iv.end > self.completions[jid]:
                    raise ScheduleError(f"job {jid} processed outside its lifetime")
                work[jid] += r * (iv.end - iv.start)
                if r > 0:
                    last_end[jid] = iv.end
        for job in self.jobs:
            if work[job.id] != job.processing:
                raise ScheduleError(f"job {job.id} received {work[job.id]} of {job.processing}")
            if last_end[job.id] != self.completions[job.id]:
                raise ScheduleError(f"job {job.id} completion time is not its last processing instant")

    def elapsed(self, t) -> dict[int, Fraction]:
        """Work each job has received by time ``t``."""
        out = {j.id: Fraction(0) for j in self.jobs}
        for iv in self.intervals:
            if iv.start >= t:
                break
            dt = min(iv.end, t) - iv.start
            for jid, r in iv.rates:
                out[jid] += r * dt
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "policy": self.policy,
            "speed": format_number(self.speed),
            "jobs": jobs_to_list(self.jobs),
            "events": [format_number(t) for t in self.events],
            "intervals": [
                {"start": format_number(iv.start), "end": format_number(iv.end),
                 "rates": {str(j): format_number(r) for j, r in iv.rates}}
                for iv in self.intervals
            ],
            "completions": {str(j): format_number(c) for j, c in self.completion_pairs},
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> Timeline:
        intervals = tuple(
            Interval(Fraction(iv["start"]), Fraction(iv["end"]),
                     tuple((int(j), Fraction(r)) for j, r in iv["rates"].items()))
            for iv in d["intervals"]
        )
        completions = tuple((int(j), Fraction(c)) for j, c in d["completions"].items())
        return cls(d["policy"], jobs_from_list(d["jobs"]), Fraction(d["speed"]), intervals, completions)


def simulate_srpt(jobs, speed=1) -> Timeline:
    """Process the active job with least remaining work (ties: lowest id) at full speed."""
    jobs, speed = _as_jobset(jobs), _speed(speed)
    pending = deque(jobs.jobs)
    remaining: dict[int, Fraction] = {}
    intervals, completions = [], []
    t = Fraction(0)
    while pending or remaining:
        while pending and pending[0].release <= t:
            job = pending.popleft()
            remaining[job.id] = job.processing
        if not remaining:
            nt = pending[0].release
            intervals.append(Interval(t, nt, ()))
            t = nt
            continue
        jid = min(remaining, key=lambda j: (remaining[j], j))
        nt = t + remaining[jid] / speed
        if pending and pending[0].release < nt:
            nt = pending[0].release
        remaining[jid] -= (nt - t) * speed
        intervals.append(Interval(t, nt, ((jid, speed),)))
        if remaining[jid] == 0:
            del remaining[jid]
            completions.append((jid, nt))
        t = nt
    return Timeline("srpt", jobs, speed, tuple(intervals), tuple(completions))


def simulate_setf(jobs, speed=1) -> Timeline:
    """Share the machine equally among active jobs with the least work received so far."""
    jobs, speed = _as_jobset(jobs), _speed(speed)
    pending = deque(jobs.jobs)
    size = {j.id: j.processing for j in jobs}
    elapsed: dict[int, Fraction] = {}
    intervals, completions = [], []
    t = Fraction(0)
    while pending or elapsed:
        while pending and pending[0].release <= t:
            elapsed[pending.popleft().id] = Fraction(0)
        if not elapsed:
            nt = pending[0].release
            intervals.append(Interval(t, nt, ()))
            t = nt
            continue
        low = min(elapsed.values())
        sharing = sorted(j for j, w in elapsed.items() if w == low)
        rate = speed / len(sharing)
        # next event: a sharing job completes, the sharing set catches up, or a release
        dw = min(size[j] for j in sharing) - low
        higher = [w for w in elapsed.values() if w > low]
        if higher:
            dw = min(dw, min(higher) - low)
        nt = t + dw / rate
        if pending and pending[0].release < nt:
            nt = pending[0].release
        reached = low + (nt - t) * rate
        for j in sharing:
            elapsed[j] = reached
        intervals.append(Interval(t, nt, tuple((j, rate) for j in sharing)))
        for j in sharing:
            if reached == size[j]:
                del elapsed[j]
                completions.append((j, nt))
        t = nt
    return Timeline("setf", jobs, speed, tuple(intervals), tuple(completions))


@dataclass(frozen=True)
class FlowMetrics:
    total_flow_time: Fraction
    active_profile: tuple[tuple[Fraction, Fraction, int], ...]  # (start, end, |X_t|)
    idle_times: tuple[tuple[int, Fraction], ...]

    @property
    def max_idle_time(self) -> Fraction:
        return max((v for _, v in self.idle_times), default=Fraction(0))

    def integral(self) -> Fraction:
        return sum(((b - a) * n for a, b, n in self.active_profile), Fraction(0))


def flow_metrics(tl: Timeline) -> FlowMetrics:
    """Total flow time two ways (per-job sum and integral of |X_t|) plus idle times."""
    tl.validate()
    C = tl.completions
    total = sum((C[j.id] - j.release for j in tl.jobs), Fraction(0))
    points = sorted({j.release for j in tl.jobs} | set(C.values()))
    profile = []
    for a, b in zip(points, points[1:]):
        n = sum(1 for j in tl.jobs if tl.is_active(j, a))
        if n:
            profile.append((a, b, n))
    metrics = FlowMetrics(
        total,
        tuple(profile),
        tuple((j.id, C[j.id] - j.release - j.processing / tl.speed) for j in tl.jobs),
    )
    if metrics.integral() != total:
        raise ScheduleError(f"flow time mismatch: sum {total} vs integral {metrics.integral()}")
    return metrics


def total_flow_time(tl: Timeline) -> Fraction:
    C = tl.completions
    return sum((C[j.id] - j.release for j in tl.jobs), Fraction(0))


def active_sets(tl: Timeline, t) -> frozenset[int]:
    """Jobs released at or before ``t`` and not yet complete."""
    if t < 0:
        raise ScheduleError("time must be >= 0")
    return frozenset(j.id for j in tl.jobs if tl.is_active(j, t))


def _sample_times(*timelines: Timeline) -> list[Fraction]:
    pts = sorted(set().union(*(tl.events for tl in timelines)))
    mids = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    return sorted(set(pts) | set(mids))


def verify_pointwise_bound(jobs, eps) -> VerificationReport:
    """Check |X_t| <= (1 + 1/eps) |X*_t| at every merged event and midpoint.

    X_t: active jobs of SETF at speed 1+eps; X*_t: active jobs of SRPT at speed 1.
    Active counts are constant between merged events, so the check is exhaustive.
    """
    eps = _q(eps)
    if eps <= 0:
        raise ScheduleError("eps must be > 0")
    jobs = _as_jobset(jobs)
    setf = simulate_setf(jobs, 1 + eps)
    srpt = simulate_srpt(jobs, 1)
    factor = 1 + 1 / eps
    worst = (Fraction(0), Fraction(0), 0, 0)  # (ratio, t, |X|, |X*|) at the largest ratio
    first_violation = None
    times = _sample_times(setf, srpt)
    for t in times:
        x, xs = len(active_sets(setf, t)), len(active_sets(srpt, t))
        if not x:
            continue
        ratio = Fraction(x, xs) if xs else math.inf
        if ratio > worst[0]:
            worst = (ratio, t, x, xs)
        if x > factor * xs and first_violation is None:
            first_violation = t
    max_ratio, t, x, xs = worst
    return VerificationReport(
        claim="setf-active-jobs-pointwise",
        left=x,
        right=factor * xs,
        context={
            "eps": format_number(eps),
            "jobs": len(jobs),
            "worst_time": format_number(t),
            "max_ratio": "inf" if max_ratio == math.inf else format_number(max_ratio),
            "first_violation": None if first_violation is None else format_number(first_violation),
            "points_checked": len(times),
        },
    )


def verify_kp00(jobs, eps) -> VerificationReport:
    """Total flow time of SETF at speed 1+eps against (1 + 1/eps) times SRPT at speed 1."""
    eps = _q(eps)
    if eps <= 0:
        raise ScheduleError("eps must be > 0")
    jobs = _as_jobset(jobs)
    setf = total_flow_time(simulate_setf(jobs, 1 + eps))
    srpt = total_flow_time(simulate_srpt(jobs, 1))
    return VerificationReport(
        claim="setf-speed-augmented-flow-time",
        left=setf,
        right=(1 + 1 / eps) * srpt,
        context={
            "eps": format_number(eps),
            "jobs": len(jobs),
            "setf_flow": format_number(setf),
            "srpt_flow": format_number(srpt),
            "ratio": format_number(setf / srpt),
        },
    )


# -- interference sets ---------------------------------------------------------------

@dataclass(frozen=True)
class InterferenceResult:
    t: Fraction | float
    sets: dict[int, frozenset[int]]
    starts: dict[int, Fraction]
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _union_is_interval(spans: list[tuple[Fraction, Fraction]], lo, hi) -> bool:
    spans = sorted(spans)
    if not spans or spans[0][0] != lo:
        return False
    end = spans[0][1]
    for a, b in spans[1:]:
        if a > end:
            return False
        end = max(end, b)
    return end == hi


def interference_sets(tl: Timeline, t, jobs: Iterable[int] | None = None) -> InterferenceResult:
    """Transitive closure of "processed in parallel with or instead of" up to time ``t``.

    ``t = math.inf`` means after every completion. By default the sets are built
    for the jobs active at ``t`` (all jobs when ``t`` is infinite). The union-of-
    lifetimes, closed-under-processing and elapsed-work dominance properties are
    checked for every job active at ``t``; failures are listed in ``violations``.
    """
    if tl.policy != "setf":
        raise ScheduleError("interference sets are defined for SETF timelines")
    infinite = t == math.inf
    if not infinite:
        t = _q(t)
        if t < 0 or t > tl.horizon:
            raise ScheduleError(f"t={t} lies outside the timeline [0, {tl.horizon}]")
    C = tl.completions
    if jobs is None:
        targets = [j.id for j in tl.jobs] if infinite else sorted(active_sets(tl, t))
    else:
        targets = list(jobs)

    windows = []  # (start, end, active ids, processed ids), clipped to [0, t)
    for iv in tl.intervals:
        if not infinite and iv.start >= t:
            break
        end = iv.end if infinite else min(iv.end, t)
        active = frozenset(j.id for j in tl.jobs if tl.is_active(j, iv.start))
        windows.append((iv.start, end, active, iv.processed))

    sets, starts, violations = {}, {}, []
    rel = {j.id: j.release for j in tl.jobs}
    hi = tl.horizon if infinite else t
    work_t = None if infinite else tl.elapsed(t)
    for j in targets:
        closure = {j}
        grew = True
        while grew:
            grew = False
            for _, _, active, processed in windows:
                if active & closure and not processed <= closure:
                    closure |= processed
                    grew = True
        sets[j] = frozenset(closure)
        s_j = min(rel[i] for i in closure)
        starts[j] = s_j
        if not (infinite or j in active_sets(tl, t)):
            continue
        spans = [(rel[i], min(C[i], hi)) for i in closure]
        if not _union_is_interval(spans, s_j, hi):
            violations.append(f"job {j}: lifetimes of its interference set do not cover [{s_j}, {hi}]")
        for a, b, _, processed in windows:
            if b > s_j and not processed <= closure:
                violations.append(f"job {j}: jobs {sorted(processed - closure)} processed at {a} lie outside its set")
        if work_t is not None:
            over = [i for i in closure if work_t[i] > work_t[j]]
            if over:
                violations.append(f"job {j}: jobs {over} have more elapsed work than it at t={t}")
    return InterferenceResult(t, sets, starts, tuple(violations))


# -- instance generators --------------------------------------------------------------

def gen_example_setf(eps, delta) -> JobSet:
    """m = floor(1/eps) - 1 jobs released at 0, 1, ..., each of size 1 + eps + delta."""
    eps, delta = _q(eps), _q(delta)
    if not 0 < delta < eps < 1:
        raise ScheduleError("need 0 < delta < eps < 1")
    m = math.floor(1 / eps) - 1
    if m < 1:
        raise ScheduleError(f"eps={eps} leaves m = floor(1/eps) - 1 = {m} < 1 jobs")
    return JobSet(tuple(Job(j, j - 1, 1 + eps + delta) for j in range(1, m + 1)))


def random_jobs(seed: int, max_jobs: int = 12, max_release: int = 20) -> JobSet:
    """Seeded job set with 1..max_jobs jobs and small-denominator rational data."""
    rng = random.Random(seed)
    n = rng.randint(1, max_jobs)
    pairs = []
    for _ in range(n):
        r = Fraction(rng.randint(0, max_release * 2), rng.choice((1, 2, 3, 4)))
        p = Fraction(rng.randint(1, 12), rng.choice((1, 2, 3, 5)))
        pairs.append((r, p))
    return JobSet.of(pairs)


def random_grid_jobs(seed: int, n: int, horizon: int) -> JobSet:
    """Integer releases and sizes with max release + total size <= horizon."""
    rng = random.Random(seed)
    while True:
        sizes = [rng.randint(1, max(1, horizon // n)) for _ in range(n)]
        slack = horizon - sum(sizes)
        if slack >= 0:
            break
    return JobSet.of((rng.randint(0, slack), p) for p in sizes)


# -- offline benchmarks ----------------------------------------------------------------

def edf_feasible(jobs, deadlines: Mapping[int, Fraction], speed=1) -> bool:
    """Preemptive earliest-deadline-first run; True iff every job meets its deadline."""
    jobs, speed = _as_jobset(jobs), _speed(speed)
    pending = deque(jobs.jobs)
    remaining: dict[int, Fraction] = {}
    t = Fraction(0)
    while pending or remaining:
        while pending and pending[0].release <= t:
            job = pending.popleft()
            remaining[job.id] = job.processing
        if not remaining:
            t = pending[0].release
            continue
        jid = min(remaining, key=lambda j: (deadlines[j], j))
        nt = t + remaining[jid] / speed
        if pending and pending[0].release < nt:
            nt = pending[0].release
        remaining[jid] -= (nt - t) * speed
        if remaining[jid] == 0:
            del remaining[jid]
            if nt > deadlines[jid]:
                return False
        t = nt
    return True


def opt_max_idle(jobs, speed=1) -> Fraction:
    """Least achievable maximum idle time ``C_j - r_j - p_j/speed``.

    Binary search over the finite candidate budgets T, each tested by EDF with
    deadlines ``r_j + p_j/speed + T``. Deadline order does not depend on T, so
    the optimum is one of the window-overload values ``sum(q) - (e_k - a)``.
    """
    jobs, speed = _as_jobset(jobs), _speed(speed)
    if not jobs.jobs:
        return Fraction(0)
    q = {j.id: j.processing / speed for j in jobs}
    due = {j.id: j.release + q[j.id] for j in jobs}
    candidates = {Fraction(0)}
    for a in {j.release for j in jobs}:
        inside = [j for j in jobs if j.release >= a]
        for k in inside:
            load = sum((q[j.id] for j in inside if due[j.id] <= due[k.id]), Fraction(0))
            candidates.add(load - (due[k.id] - a))
    cands = sorted(c for c in candidates if c >= 0)
    lo, hi = 0, len(cands) - 1
    if not edf_feasible(jobs, {j: d + cands[hi] for j, d in due.items()}, speed):
        raise ScheduleError("no candidate idle budget is feasible")
    while lo < hi:
        mid = (lo + hi) // 2
        if edf_feasible(jobs, {j: d + cands[mid] for j, d in due.items()}, speed):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


def _grid_units(jobs: JobSet, grid, max_jobs: int, max_steps: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    grid = _q(grid)
    if grid <= 0:
        raise ScheduleError("grid must be > 0")
    if len(jobs) > max_jobs:
        raise ScheduleError(f"brute force guard: {len(jobs)} jobs > {max_jobs}")
    rel, size = [], []
    for j in jobs:
        r, p = j.release / grid, j.processing / grid
        if r.denominator != 1 or p.denominator != 1:
            raise ScheduleError(f"job {j.id} is not aligned to grid {grid}")
        rel.append(int(r))
        size.append(int(p))
    if rel and max(rel) + sum(size) > max_steps:
        raise ScheduleError(f"brute force guard: horizon exceeds {max_steps} grid steps")
    return tuple(rel), tuple(size)


def bruteforce_min_flow(jobs, grid=1, *, max_jobs: int = 4, max_steps: int = 24) -> Fraction:
    """Minimum total flow time over every unit-speed grid-slot schedule.

    Each grid slot processes one active job; memoized search over
    (slot, remaining work) states.
    """
    jobs = _as_jobset(jobs)
    rel, size = _grid_units(jobs, grid, max_jobs, max_steps)

    @lru_cache(maxsize=None)
    def best(t: int, rem: tuple[int, ...]) -> int:
        if not any(rem):
            return 0
        active = [i for i, (r, w) in enumerate(zip(rel, rem)) if r <= t and w > 0]
        if not active:
            return best(min(r for r, w in zip(rel, rem) if w > 0), rem)
        out = None
        for i in active:
            nrem = rem[:i] + (rem[i] - 1,) + rem[i + 1:]
            v = len(active) + best(t + 1, nrem)
            out = v if out is None else min(out, v)
        return out

    return best(0, size) * _q(grid)


def bruteforce_min_max_idle(jobs, grid=1, *, max_jobs: int = 4, max_steps: int = 24) -> Fraction:
    """Minimum over unit-speed grid-slot schedules of max_j (C_j - r_j - p_j)."""
    jobs = _as_jobset(jobs)
    rel, size = _grid_units(jobs, grid, max_jobs, max_steps)

    @lru_cache(maxsize=None)
    def best(t: int, rem: tuple[int, ...]) -> int:
        if not any(rem):
            return 0
        active = [i for i, (r, w) in enumerate(zip(rel, rem)) if r <= t and w > 0]
        if not active:
            return best(min(r for r, w in zip(rel, rem) if w > 0), rem)
        out = None
        for i in active:
            nrem = rem[:i] + (rem[i] - 1,) + rem[i + 1:]
            v = best(t + 1, nrem)
            if nrem[i] == 0:
                v = max(v, t + 1 - rel[i] - size[i])
            out = v if out is None else min(out, v)
        return out

    return best(0, size) * _q(grid)


def verify_idle_bound(jobs, eps) -> VerificationReport:
    """SETF max idle at speed 1+eps against (1/eps) times the unit-speed optimum."""
    eps = _q(eps)
    if eps <= 0:
        raise ScheduleError("eps must be > 0")
    jobs = _as_jobset(jobs)
    setf_idle = flow_metrics(simulate_setf(jobs, 1 + eps)).max_idle_time
    opt = opt_max_idle(jobs, 1)
    return VerificationReport(
        claim="setf-max-idle",
        left=setf_idle,
        right=opt / eps,
        context={"eps": format_number(eps), "jobs": len(jobs),
                 "setf_max_idle": format_number(setf_idle), "opt_max_idle": format_number(opt)},
    )


# -- file formats -------------------------------------------------------------------------

def jobs_to_list(jobs: JobSet) -> list[dict[str, Any]]:
    return [
        {"id": j.id, "release": format_number(j.release), "processing": format_number(j.processing)}
        for j in jobs
    ]


def jobs_from_list(items: list[Mapping[str, Any]]) -> JobSet:
    out = []
    for n, d in enumerate(items):
        for key in ("id", "release", "processing"):
            if key not in d:
                raise ScheduleError(f"job entry {n} is missing field {key!r}")
        values = {}
        for key, conv in (("id", int), ("release", lambda v: _q(str(v))), ("processing", lambda v: _q(str(v)))):
            try:
                values[key] = conv(d[key])
            except (ValueError, ZeroDivisionError, TypeError):
                raise ScheduleError(f"job entry {n}: field {key!r}: bad value {d[key]!r}") from None
        try:
            out.append(Job(values["id"], values["release"], values["processing"]))
        except ValueError as exc:
            raise ScheduleError(f"job entry {n}: {exc}") from None
    return JobSet(tuple(out))


def read_jobs(path: str | Path) -> JobSet:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScheduleError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, list):
        raise ScheduleError(f"{path}: expected a JSON list of jobs")
    return jobs_from_list(data)


def write_jobs(jobs: JobSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(jobs_to_list(jobs), indent=2) + "\n")
