"""Seeded trajectory sampling, visit loads and the cycle-trap experiment.

Random draws follow the stream rule in :mod:`nbwalk._rng`: a walk of kind
``nb`` with seed ``s`` reads stream ``(s, NB_WALK)``, a simple walk reads
``(s, SIMPLE_WALK)`` and balls-and-bins reads ``(s, BINS)``.  Trial ``i`` of
an experiment uses seed ``base_seed + i``.

A non-backtracking walk first draws an index in ``0..d-1`` for its initial
edge, then one index in ``0..d-2`` per further step; index ``r`` selects slot
``r`` of the current vertex's sorted neighbour row, or slot ``r + 1`` when
``r`` is at or past the slot leading back to the previous vertex.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from os import PathLike

import numpy as np

from . import _rng
from .errors import Degree2Nb
from .graph import DecoratedGraph, RegularGraph

__all__ = [
    "WalkTrace",
    "LoadRow",
    "LoadReport",
    "TrapResult",
    "simulate_walk",
    "simulate_walks",
    "validate_trace",
    "max_load",
    "visit_histogram",
    "load_profile",
    "balls_and_bins",
    "load_experiment",
    "self_intersection_time",
    "cycle_trap_frequency",
    "write_trace",
]

KINDS = ("simple", "nb")


@dataclass(frozen=True, eq=False)
class WalkTrace:
    vertices: np.ndarray
    kind: str
    seed: int
    start: int

    @property
    def steps(self) -> int:
        return len(self.vertices) - 1


def _check_kind(g: RegularGraph, kind: str) -> None:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if kind == "nb" and g.d < 3:
        raise Degree2Nb("non-backtracking walks need d >= 3")


def simulate_walk(g: RegularGraph, kind: str, start: int, steps: int, seed: int) -> WalkTrace:
    """Sample one walk of ``steps`` steps from ``start``."""
    _check_kind(g, kind)
    if steps < 0:
        raise ValueError("steps must be >= 0")
    d = g.d
    heads = g.heads.tolist()
    out = [start]
    if steps == 0:
        return WalkTrace(np.array(out, dtype=np.int64), kind, seed, start)
    if kind == "simple":
        rng = _rng.stream(seed, _rng.SIMPLE_WALK)
        draws = rng.integers(0, d, size=steps).tolist()
        v = start
        for r in draws:
            v = heads[v * d + r]
            out.append(v)
    else:
        rng = _rng.stream(seed, _rng.NB_WALK)
        first = int(rng.integers(0, d))
        draws = rng.integers(0, d - 1, size=steps - 1).tolist()
        rev = g.reverse.tolist()
        e = start * d + first
        out.append(heads[e])
        for r in draws:
            v = heads[e]
            back = rev[e] - v * d
            e = v * d + r + (r >= back)
            out.append(heads[e])
    return WalkTrace(np.array(out, dtype=np.int64), kind, seed, start)


def simulate_walks(
    g: RegularGraph, kind: str, start: int, steps: int, count: int, seed: int
) -> np.ndarray:
    """``count`` independent walks advanced in lock-step; shape ``(count, steps + 1)``.

    Uses the same streams as :func:`simulate_walk` but consumes them per
    step across all walks, so row 0 is not the single-walk trace.
    """
    _check_kind(g, kind)
    d = g.d
    out = np.empty((count, steps + 1), dtype=np.int64)
    out[:, 0] = start
    if steps == 0:
        return out
    if kind == "simple":
        rng = _rng.stream(seed, _rng.SIMPLE_WALK)
        v = np.full(count, start, dtype=np.int64)
        for t in range(1, steps + 1):
            v = g.heads[v * d + rng.integers(0, d, size=count)]
            out[:, t] = v
        return out
    rng = _rng.stream(seed, _rng.NB_WALK)
    e = start * d + rng.integers(0, d, size=count)
    out[:, 1] = g.heads[e]
    for t in range(2, steps + 1):
        v = g.heads[e]
        back = g.reverse[e] - v * d
        r = rng.integers(0, d - 1, size=count)
        e = v * d + r + (r >= back)
        out[:, t] = g.heads[e]
    return out


def validate_trace(g: RegularGraph, vertices, kind: str) -> None:
    """Raise ``ValueError`` if consecutive vertices are not adjacent or an nb walk backtracks."""
    w = np.asarray(vertices)
    if w.size < 2:
        return
    a, b = w[:-1], w[1:]
    ok = (g.adj[a] == b[:, None]).any(axis=1)
    if not ok.all():
        t = int(np.argmin(ok))
        raise ValueError(f"step {t}: {a[t]} -> {b[t]} is not an edge")
    if kind == "nb" and w.size > 2:
        back = w[:-2] == w[2:]
        if back.any():
            t = int(np.argmax(back)) + 1
            raise ValueError(f"walk backtracks at position {t}")


def visit_histogram(t: WalkTrace | np.ndarray, n: int | None = None) -> np.ndarray:
    """Visit count of every vertex over all ``steps + 1`` positions."""
    w = t.vertices if isinstance(t, WalkTrace) else np.asarray(t)
    return np.bincount(w, minlength=n or 0)


def max_load(t: WalkTrace | np.ndarray) -> int:
    """Largest visit count of any vertex, the start position included."""
    return int(visit_histogram(t).max())


def load_profile(counts: np.ndarray) -> list[int]:
    """``profile[c]`` = number of vertices visited exactly ``c`` times (c >= 1)."""
    prof = np.bincount(counts[counts > 0])
    return prof.tolist()


def balls_and_bins(n_bins: int, n_balls: int, seed: int) -> int:
    """Max load after dropping ``n_balls`` balls into ``n_bins`` bins uniformly."""
    if n_bins < 1 or n_balls < 1:
        raise ValueError("need at least one bin and one ball")
    rng = _rng.stream(seed, _rng.BINS)
    return int(np.bincount(rng.integers(0, n_bins, size=n_balls)).max())


def self_intersection_time(t: WalkTrace | np.ndarray) -> int:
    """First position whose vertex already occurred; ``steps + 1`` if none."""
    w = t.vertices if isinstance(t, WalkTrace) else np.asarray(t)
    seen = set()
    for i, v in enumerate(w.tolist()):
        if v in seen:
            return i
        seen.add(v)
    return len(w)


@dataclass(frozen=True)
class LoadRow:
    trial: int
    seed: int
    nb_max: int
    simple_max: int
    bins_max: int


@dataclass
class LoadReport:
    n: int
    d: int
    steps: int
    base_seed: int
    rows: list[LoadRow] = field(default_factory=list)
    nb_profiles: list[list[int]] = field(default_factory=list)
    simple_profiles: list[list[int]] = field(default_factory=list)

    @property
    def trials(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def summary(self) -> dict:
        out = {}
        for name in ("nb_max", "simple_max", "bins_max"):
            col = self.column(name)
            if col.size == 0:
                out[name] = None
                continue
            q1, med, q3 = np.percentile(col, [25, 50, 75])
            out[name] = {"median": float(med), "q1": float(q1), "q3": float(q3), "max": int(col.max())}
        return out

    def write_csv(self, path: str | PathLike) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["trial", "nb_max", "simple_max", "bins_max"])
            for r in self.rows:
                w.writerow([r.trial, r.nb_max, r.simple_max, r.bins_max])

    def write_json(self, path: str | PathLike, extra: dict | None = None) -> None:
        payload = {
            "n": self.n,
            "d": self.d,
            "steps": self.steps,
            "base_seed": self.base_seed,
            "trials": self.trials,
            "summary": self.summary(),
        }
        if extra:
            payload.update(extra)
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")


def load_experiment(
    g: RegularGraph,
    steps: int | None = None,
    trials: int = 50,
    base_seed: int = 0,
    start: int = 0,
) -> LoadReport:
    """Max visit load of nb and simple walks next to balls-and-bins, per trial.

    Each trial uses seed ``base_seed + trial`` for all three samplers.
    ``steps`` defaults to ``n`` and the bins experiment drops ``steps``
    balls into ``n`` bins.
    """
    steps = g.n if steps is None else steps
    report = LoadReport(n=g.n, d=g.d, steps=steps, base_seed=base_seed)
    for trial in range(trials):
        seed = base_seed + trial
        nb = visit_histogram(simulate_walk(g, "nb", start, steps, seed), g.n)
        sw = visit_histogram(simulate_walk(g, "simple", start, steps, seed), g.n)
        bins = balls_and_bins(g.n, steps, seed) if steps else 0
        report.rows.append(LoadRow(trial, seed, int(nb.max()), int(sw.max()), bins))
        report.nb_profiles.append(load_profile(nb))
        report.simple_profiles.append(load_profile(sw))
    return report


@dataclass
class TrapResult:
    k: int
    g: int
    d: int
    segments_per_trial: int
    predicted: float
    counts: list[int]
    any_direction_counts: list[int]
    max_loads: list[int]

    @property
    def trials(self) -> int:
        return len(self.counts)

    @property
    def segments(self) -> int:
        return self.trials * self.segments_per_trial

    @property
    def observed_freq(self) -> float:
        return sum(self.counts) / self.segments if self.segments else math.nan

    @property
    def std_error(self) -> float:
        p = self.predicted
        return math.sqrt(p * (1 - p) / self.segments) if self.segments else math.nan

    @property
    def z_score(self) -> float:
        return (self.observed_freq - self.predicted) / self.std_error

    @property
    def success_probability(self) -> float:
        """Chance that at least one segment of a walk is trapped."""
        return 1.0 - (1.0 - self.predicted) ** self.segments_per_trial

    @property
    def fired(self) -> list[bool]:
        return [c > 0 for c in self.counts]


def _count_traps(g: DecoratedGraph, w: list[int], k: int) -> tuple[int, int]:
    """Trapped segments: designated-orientation count and either-orientation count.

    The designated orientation of the segment starting at ``v`` continues the
    direction of arrival when the walk entered ``v`` along ``v``'s cycle,
    and is the cycle's own order otherwise; it is always a legal
    non-backtracking continuation, so each segment is trapped with
    probability exactly ``(d-1)**(-k g)`` given the past.
    """
    cyc = g.cycle_length
    span = k * cyc
    segments = (len(w) - 1) // span
    hits = any_hits = 0
    for j in range(segments):
        s = j * span
        v = w[s]
        direction = 1
        if s > 0 and w[s - 1] == g.cycle_step(v, 1):
            direction = -1
        path = [g.cycle_step(v, direction * t) for t in range(1, span + 1)]
        seg = w[s + 1 : s + span + 1]
        if seg == path:
            hits += 1
            any_hits += 1
        elif seg == [g.cycle_step(v, -direction * t) for t in range(1, span + 1)]:
            any_hits += 1
    return hits, any_hits


def cycle_trap_frequency(
    g: DecoratedGraph,
    k: int,
    trials: int,
    seed: int,
    steps: int | None = None,
    start: int = 0,
) -> TrapResult:
    """Fraction of length-``k g`` walk segments that wind ``k`` times round their start's cycle.

    Each trial walks ``steps`` (default ``n``) non-backtracking steps with
    seed ``seed + trial`` and cuts the walk into ``floor(steps / (k g))``
    disjoint segments.
    """
    if not isinstance(g, DecoratedGraph):
        raise TypeError("cycle_trap_frequency needs a graph from cycle_decorated_expander")
    if k < 1:
        raise ValueError("k must be >= 1")
    steps = g.n if steps is None else steps
    span = k * g.cycle_length
    counts, any_counts, loads = [], [], []
    for trial in range(trials):
        trace = simulate_walk(g, "nb", start, steps, seed + trial)
        w = trace.vertices.tolist()
        hits, any_hits = _count_traps(g, w, k)
        counts.append(hits)
        any_counts.append(any_hits)
        loads.append(max_load(trace))
    return TrapResult(
        k=k,
        g=g.cycle_length,
        d=g.d,
        segments_per_trial=steps // span,
        predicted=float(g.d - 1) ** (-span),
        counts=counts,
        any_direction_counts=any_counts,
        max_loads=loads,
    )


def write_trace(t: WalkTrace, path: str | PathLike) -> None:
    with open(path, "w") as fh:
        fh.write("\n".join(str(v) for v in t.vertices.tolist()))
        fh.write("\n")
