"""Exact evolution of walk distributions and empirical mixing rates.

Vertex distributions are length-``n`` arrays, edge distributions are
length-``n*d`` arrays indexed by directed edge id.  Every step function also
accepts a 2-D array and advances each row, which is how all start vertices
are evolved at once.

:func:`mixing_report` tracks ``P^(k) - 1/n`` directly instead of ``P^(k)``:
the centred rows are re-centred and rescaled after every step, so the
deviation keeps full relative precision long after it falls below the
absolute rounding level of the probabilities themselves.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field
from os import PathLike

import numpy as np

from . import _rng
from .errors import Degree2Nb, HorizonTooShort, SandwichViolation
from .graph import RegularGraph
from .nbkernel import mu_k, nb_count_matrix, rates
from .spectra import Spectrum, eigenvalues_dense, lambda_star

__all__ = [
    "MixingReport",
    "Sandwich",
    "check_distribution",
    "simple_step",
    "nb_initial",
    "nb_step",
    "project_to_vertices",
    "deviation_linf",
    "deviation_tv",
    "resolve_threshold",
    "fit_rate",
    "tau_for",
    "mixing_report",
    "claim23_sandwich",
]

FIT_BLOCK = 8
SANDWICH_ABS_SLACK = 1e-14


def check_distribution(p: np.ndarray, tol: float = 1e-12) -> None:
    """Raise ``ValueError`` unless every row of ``p`` is a probability vector."""
    p = np.asarray(p)
    if np.any(p < -1e-15):
        raise ValueError(f"negative mass {p.min():.3g}")
    err = np.max(np.abs(p.sum(axis=-1) - 1.0))
    if err > tol:
        raise ValueError(f"mass off by {err:.3g}")


def simple_step(g: RegularGraph, p: np.ndarray) -> np.ndarray:
    """One step of the simple walk: ``p @ (A / d)``."""
    return p[..., g.adj].sum(axis=-1) / g.d


def nb_initial(g: RegularGraph, w0: int) -> np.ndarray:
    """First-edge distribution of a non-backtracking walk from ``w0``."""
    if g.d < 3:
        warnings.warn("non-backtracking walk on a 2-regular graph does not mix", stacklevel=2)
    p = np.zeros(g.num_directed_edges)
    p[w0 * g.d : (w0 + 1) * g.d] = 1.0 / g.d
    return p


def project_to_vertices(g: RegularGraph, e: np.ndarray) -> np.ndarray:
    """Vertex distribution of the head of the current edge."""
    # edges entering v are the reverses of the edges leaving v
    return e[..., g.reverse.reshape(g.n, g.d)].sum(axis=-1)


def nb_step(g: RegularGraph, e: np.ndarray) -> np.ndarray:
    """Move the mass on ``(u, v)`` equally onto every ``(v, w)`` with ``w != u``."""
    into = project_to_vertices(g, e)
    return (into[..., g.tails] - e[..., g.reverse]) / (g.d - 1)


def deviation_linf(p: np.ndarray) -> float:
    """``max |p_i - 1/n|`` (over all rows for 2-D input)."""
    p = np.asarray(p)
    return float(np.max(np.abs(p - 1.0 / p.shape[-1])))


def deviation_tv(p: np.ndarray) -> float:
    """Total variation distance to uniform (worst row for 2-D input)."""
    p = np.asarray(p)
    return float(np.max(0.5 * np.abs(p - 1.0 / p.shape[-1]).sum(axis=-1)))


def resolve_threshold(threshold: str | float, n: int) -> float:
    """``"half-n"`` is ``1/(2n)``, ``"n-squared"`` is ``1/n^2``; numbers pass through."""
    if threshold == "half-n":
        return 1.0 / (2 * n)
    if threshold == "n-squared":
        return 1.0 / (n * n)
    return float(threshold)


def fit_rate(log_dev: np.ndarray, block: int = FIT_BLOCK) -> tuple[float, tuple[int, int]]:
    """Geometric decay rate of the upper envelope over the last half of the horizon.

    The window is cut into blocks of ``block`` steps; the largest log
    deviation of each block is kept and a least-squares line is fitted
    through those maxima.  Taking block maxima makes the fit insensitive to
    the sign changes and parity oscillations of the deviation sequence.
    Returns ``(rate, (first_k, last_k))``; the rate is ``nan`` when the
    window holds fewer than two usable blocks.
    """
    horizon = len(log_dev) - 1
    lo = max(1, horizon // 2)
    ks, ys = [], []
    for start in range(lo, horizon + 1, block):
        seg = log_dev[start : min(start + block, horizon + 1)]
        if len(seg) < block // 2 + 1 or not np.isfinite(seg).any():
            continue
        i = int(np.nanargmax(np.where(np.isfinite(seg), seg, -np.inf)))
        ks.append(start + i)
        ys.append(seg[i])
    if len(ks) < 2:
        return math.nan, (lo, horizon)
    slope = np.polyfit(np.asarray(ks, dtype=float), np.asarray(ys), 1)[0]
    return float(math.exp(slope)), (lo, horizon)


def tau_for(deviations: np.ndarray, threshold: float) -> int | None:
    """Smallest t with ``deviations[k] <= threshold`` for every k in ``t..horizon``."""
    above = np.nonzero(deviations > threshold)[0]
    if above.size == 0:
        return 0
    t = int(above[-1]) + 1
    return t if t < len(deviations) else None


@dataclass
class MixingReport:
    walk: str
    n: int
    d: int
    horizon: int
    threshold: float
    deviations: np.ndarray
    log_deviations: np.ndarray
    fitted_rate: float
    tau: int | None
    fit_window: tuple[int, int]
    starts: list[int] | None = None
    lam: float | None = None
    theory_rate: float | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def relative_error(self) -> float:
        if self.theory_rate is None:
            return math.nan
        return abs(self.fitted_rate - self.theory_rate) / self.theory_rate

    def to_dict(self) -> dict:
        out = asdict(self)
        out["deviations"] = [float(x) for x in self.deviations]
        out["log_deviations"] = [float(x) for x in self.log_deviations]
        out["fit_window"] = list(self.fit_window)
        out["lambda"] = out.pop("lam")
        return out

    def write_json(self, path: str | PathLike, extra: dict | None = None) -> None:
        payload = self.to_dict()
        if extra:
            payload.update(extra)
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1, allow_nan=True)
            fh.write("\n")

    def write_csv(self, path: str | PathLike) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["k", "deviation"])
            for k, x in enumerate(self.deviations):
                w.writerow([k, f"{x:.17g}"])


def _evolve_log_deviations(g: RegularGraph, walk: str, starts: np.ndarray, horizon: int) -> np.ndarray:
    n, d = g.n, g.d
    log_dev = np.full(horizon + 1, -np.inf)
    log_dev[0] = math.log(1.0 - 1.0 / n)
    if walk == "simple":
        x = np.zeros((len(starts), n))
        x[np.arange(len(starts)), starts] = 1.0
        x -= 1.0 / n
        step, view = (lambda y: simple_step(g, y)), (lambda y: y)
    else:
        x = np.zeros((len(starts), n * d))
        for row, s in enumerate(starts):
            x[row] = nb_initial(g, int(s))
        x -= 1.0 / (n * d)
        step, view = (lambda y: nb_step(g, y)), (lambda y: project_to_vertices(g, y))
    log_scale = 0.0
    for k in range(1, horizon + 1):
        if k > 1 or walk == "simple":
            x = step(x)
        # rounding leaks mass into the stationary direction; remove it
        x -= x.mean(axis=1, keepdims=True)
        peak = float(np.max(np.abs(view(x))))
        if peak == 0.0:
            break
        log_dev[k] = math.log(peak) + log_scale
        norm = float(np.max(np.abs(x)))
        x /= norm
        log_scale += math.log(norm)
    return log_dev


def mixing_report(
    g: RegularGraph,
    walk: str = "nb",
    horizon: int = 200,
    threshold: str | float = "half-n",
    *,
    starts: Sequence[int] | None = None,
    sampled_starts: int | None = None,
    seed: int = 0,
    transitive: bool = False,
    spectrum: Spectrum | None = None,
    fit_block: int = FIT_BLOCK,
) -> MixingReport:
    """Worst-case deviation from uniform per step, fitted rate and mixing time.

    Every start vertex is evolved exactly unless ``starts`` lists them,
    ``sampled_starts`` draws that many at random (stream ``STARTS`` of
    ``seed``), or ``transitive`` declares that vertex 0 stands for all.
    When ``spectrum`` is given the theoretical rate is filled in.

    Raises
    ------
    HorizonTooShort
        if the deviation at the horizon is still above ten times the
        threshold, or above it and not projected, at the fitted rate, to
        get below it within another ``horizon`` steps (bipartite graphs
        stall this way).
    """
    if walk not in ("simple", "nb"):
        raise ValueError(f"walk must be 'simple' or 'nb', got {walk!r}")
    if walk == "nb" and g.d < 3:
        raise Degree2Nb("the non-backtracking walk needs d >= 3")
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    notes = []
    if starts is not None:
        chosen = np.asarray(sorted(set(int(s) for s in starts)), dtype=np.int64)
    elif transitive:
        chosen = np.array([0], dtype=np.int64)
        notes.append("vertex-transitive: start 0 only")
    elif sampled_starts is not None and sampled_starts < g.n:
        rng = _rng.stream(seed, _rng.STARTS)
        chosen = np.sort(rng.choice(g.n, size=sampled_starts, replace=False))
        notes.append(f"{sampled_starts} sampled start vertices (seed {seed})")
    else:
        chosen = np.arange(g.n, dtype=np.int64)
    log_dev = _evolve_log_deviations(g, walk, chosen, horizon)
    with np.errstate(under="ignore"):
        deviations = np.exp(log_dev)
    thr = resolve_threshold(threshold, g.n)
    rate, window = fit_rate(log_dev, fit_block)
    # a stalled sequence (no decay left) would not reach the threshold in another horizon either
    stalled = deviations[-1] > thr and not deviations[-1] * min(rate, 1.0) ** horizon <= thr
    if deviations[-1] > 10 * thr or stalled:
        raise HorizonTooShort(
            f"deviation {deviations[-1]:.3g} at k={horizon} has not decayed below "
            f"threshold {thr:.3g} (fitted rate {rate:.6g})"
        )
    lam = theory = None
    if spectrum is not None:
        lam = lambda_star(spectrum)
        pair = rates(lam, g.d) if g.d >= 3 else None
        theory = lam / g.d if walk == "simple" else (pair.rho_nb if pair else None)
    return MixingReport(
        walk=walk,
        n=g.n,
        d=g.d,
        horizon=horizon,
        threshold=thr,
        deviations=deviations,
        log_deviations=log_dev,
        fitted_rate=rate,
        tau=tau_for(deviations, thr),
        fit_window=window,
        starts=None if len(chosen) == g.n else chosen.tolist(),
        lam=lam,
        theory_rate=theory,
        notes=notes,
    )


@dataclass(frozen=True)
class Sandwich:
    k: int
    lower: float
    observed: float
    upper: float

    @property
    def lower_margin(self) -> float:
        """Relative gap ``(observed - lower) / observed``."""
        return (self.observed - self.lower) / self.observed if self.observed else math.nan

    @property
    def upper_margin(self) -> float:
        """Relative gap ``(upper - observed) / upper``."""
        return (self.upper - self.observed) / self.upper if self.upper else math.nan

    @property
    def holds(self) -> bool:
        # mu is a float: relative slack plus an absolute floor for exactly mixed steps
        slack = 1e-9 * self.upper + SANDWICH_ABS_SLACK
        return self.lower - slack <= self.observed <= self.upper + slack


def claim23_sandwich(g: RegularGraph, k: int, spectrum: Spectrum | None = None) -> Sandwich:
    """Bracket the worst k-step deviation between ``mu(k)/n`` and ``mu(k)``.

    The observed deviation comes from the exact integer walk counts, divided
    out in exact arithmetic; ``mu(k)`` comes from the adjacency spectrum.
    Float rounding in ``mu`` is allowed a relative slack of 1e-9 plus an
    absolute ``SANDWICH_ABS_SLACK``; the latter matters when ``P^(k)`` is
    exactly uniform (K4 at k = 4), where ``mu`` is zero up to rounding.

    Raises
    ------
    SandwichViolation
        if the observed deviation falls outside the bracket.
    """
    if spectrum is None:
        spectrum = eigenvalues_dense(g)
    counts = nb_count_matrix(g, k, wide=True)
    total = counts.row_total
    n = g.n
    hi = int(counts.entries.max())
    lo = int(counts.entries.min())
    # |A_uv / total - 1/n| = |n A_uv - total| / (n total), exactly
    observed = max(n * hi - total, total - n * lo) / (n * total)
    mu = mu_k(spectrum, g.d, k)
    result = Sandwich(k=k, lower=mu / n, observed=observed, upper=mu)
    if not result.holds:
        raise SandwichViolation(
            f"k={k}: {result.lower:.6g} <= {result.observed:.6g} <= {result.upper:.6g} fails"
        )
    return result
