"""Adjacency spectra of regular graphs.

The dense solver is the cyclic-by-row Jacobi method, compiled with numba.
Each sweep costs O(n^3) and about ten sweeps are needed, so past
``JACOBI_LIMIT`` vertices ``method="auto"`` hands the matrix to LAPACK
(``numpy.linalg.eigh``) instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from os import PathLike

import numba
import numpy as np

from . import _rng
from .errors import DenseLimitExceeded, NoConvergence
from .graph import RegularGraph, component_count, is_bipartite

__all__ = [
    "Spectrum",
    "SanityReport",
    "jacobi_eigh",
    "eigh_dense",
    "eigenvalues_dense",
    "lambda_star",
    "lambda_power",
    "trace_lower_bound",
    "spectral_sanity",
    "write_spectrum_csv",
]

DENSE_LIMIT = 4096
JACOBI_LIMIT = 1024
JACOBI_TOL = 1e-12
JACOBI_SWEEPS = 100


@dataclass(frozen=True)
class Spectrum:
    """Adjacency eigenvalues sorted descending, with the max eigenpair residual."""

    eigenvalues: np.ndarray
    residual: float
    method: str = "jacobi"

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def lam(self) -> float:
        return lambda_star(self)


@numba.njit(cache=True)
def _off_norm(a: np.ndarray) -> float:
    n = a.shape[0]
    acc = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                acc += a[i, j] * a[i, j]
    return math.sqrt(acc)


@numba.njit(cache=True)
def _sweep(a: np.ndarray, v: np.ndarray) -> None:
    # One cyclic-by-row pass; v holds eigenvectors as rows until the end.
    n = a.shape[0]
    for p in range(n - 1):
        for q in range(p + 1, n):
            apq = a[p, q]
            if apq == 0.0:
                continue
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = (1.0 if theta >= 0.0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            for k in range(n):
                x, y = a[p, k], a[q, k]
                a[p, k] = c * x - s * y
                a[q, k] = s * x + c * y
            for k in range(n):
                x, y = a[k, p], a[k, q]
                a[k, p] = c * x - s * y
                a[k, q] = s * x + c * y
            for k in range(v.shape[1]):
                x, y = v[p, k], v[q, k]
                v[p, k] = c * x - s * y
                v[q, k] = s * x + c * y


def jacobi_eigh(
    a: np.ndarray,
    tol: float = JACOBI_TOL,
    max_sweeps: int = JACOBI_SWEEPS,
    vectors: bool = True,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm drops below ``tol``.
    Returns ``(values, vectors)`` in the matrix's own diagonal order, with
    eigenvectors as columns (``None`` when ``vectors`` is false).

    Raises
    ------
    NoConvergence
        if ``max_sweeps`` sweeps do not reach ``tol``.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    vt = np.eye(n) if vectors else np.empty((n, 0))
    for _ in range(max_sweeps + 1):
        if _off_norm(a) < tol:
            return np.diag(a).copy(), (vt.T.copy() if vectors else None)
        _sweep(a, vt)
    raise NoConvergence(f"Jacobi did not reach off-norm {tol:g} in {max_sweeps} sweeps")


def _adj_times(g: RegularGraph, x: np.ndarray) -> np.ndarray:
    return x[g.adj].sum(axis=1)


def eigh_dense(
    g: RegularGraph,
    tol: float = JACOBI_TOL,
    method: str = "auto",
    dense_limit: int = DENSE_LIMIT,
) -> tuple[np.ndarray, np.ndarray, str]:
    """Eigenvalues (descending) and matching eigenvector columns of ``A``."""
    if g.n > dense_limit:
        raise DenseLimitExceeded(f"n={g.n} exceeds the dense limit {dense_limit}")
    if method == "auto":
        method = "jacobi" if g.n <= JACOBI_LIMIT else "lapack"
    a = g.adjacency_matrix()
    if method == "jacobi":
        w, v = jacobi_eigh(a, tol=tol)
    elif method == "lapack":
        w, v = np.linalg.eigh(a)
    else:
        raise ValueError(f"unknown method {method!r}")
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order], method


def eigenvalues_dense(
    g: RegularGraph,
    tol: float = JACOBI_TOL,
    method: str = "auto",
    dense_limit: int = DENSE_LIMIT,
) -> Spectrum:
    """Full adjacency spectrum of ``g``.

    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    ``JACOBI_LIMIT`` vertices).  The residual ``max |A v - lambda v|`` is
    computed from the eigenvectors, which are then discarded.
    """
    w, v, used = eigh_dense(g, tol=tol, method=method, dense_limit=dense_limit)
    residual = float(np.max(np.abs(_adj_times(g, v) - v * w))) if g.n else 0.0
    return Spectrum(eigenvalues=w, residual=residual, method=used)


def lambda_star(s: Spectrum) -> float:
    """``max(lambda_2, |lambda_n|)``."""
    ev = s.eigenvalues
    if len(ev) < 2:
        raise ValueError("need at least two eigenvalues")
    return float(max(ev[1], abs(ev[-1])))


def lambda_power(
    g: RegularGraph,
    seed: int = 0,
    max_iter: int = 20_000,
    tol: float = 1e-10,
) -> float:
    """Estimate of ``lambda_star`` for graphs too large for the dense path.

    Power iteration on ``A**2`` restricted to vectors orthogonal to the
    all-ones vector.  Returns ``sqrt`` of the final Rayleigh quotient, which
    approaches ``lambda_star`` from below; slow when the top of the
    nontrivial spectrum is crowded.
    """
    rng = _rng.stream(seed, _rng.STARTS)
    x = rng.standard_normal(g.n)
    x -= x.mean()
    x /= np.linalg.norm(x)
    prev = 0.0
    for _ in range(max_iter):
        y = _adj_times(g, _adj_times(g, x))
        y -= y.mean()
        rq = float(x @ y)
        x = y / np.linalg.norm(y)
        if abs(rq - prev) <= tol * max(1.0, rq):
            break
        prev = rq
    return math.sqrt(max(rq, 0.0))


def trace_lower_bound(n: int, d: int) -> float:
    """``sqrt(d (n - d) / (n - 1))``: no d-regular graph on n vertices beats it."""
    if not n > d >= 1:
        raise ValueError(f"need n > d >= 1, got n={n}, d={d}")
    return math.sqrt(d * (n - d) / (n - 1))


@dataclass(frozen=True)
class SanityReport:
    multiplicity_of_d: int
    components: int
    smallest: float
    bipartite: bool
    max_abs: float
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def spectral_sanity(g: RegularGraph, s: Spectrum, tol: float = 1e-8) -> SanityReport:
    """Check the textbook spectral facts of a d-regular graph against ``s``."""
    ev = s.eigenvalues
    d = g.d
    mult = int(np.sum(np.abs(ev - d) <= tol))
    comps = component_count(g)
    bip = is_bipartite(g)
    smallest = float(ev[-1])
    max_abs = float(np.max(np.abs(ev)))
    failures = []
    if mult != comps:
        failures.append(f"multiplicity of {d} is {mult} but graph has {comps} components")
    if (abs(smallest + d) <= tol) != bip:
        failures.append(f"lambda_n={smallest:.12g} disagrees with bipartite={bip}")
    if max_abs > d + tol:
        failures.append(f"|lambda| reaches {max_abs:.12g} > d")
    if abs(float(ev[0]) - d) > tol:
        failures.append(f"lambda_1={ev[0]:.12g} is not d")
    if abs(float(ev.sum())) > tol * max(1, g.n):
        failures.append(f"trace {ev.sum():.3g} is not 0")
    return SanityReport(mult, comps, smallest, bip, max_abs, failures)


def write_spectrum_csv(s: Spectrum, path: str | PathLike) -> None:
    with open(path, "w") as fh:
        for x in s.eigenvalues:
            fh.write(f"{x:.17g}\n")
