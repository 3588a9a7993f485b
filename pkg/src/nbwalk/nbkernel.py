"""Closed forms for non-backtracking walks on d-regular graphs.

Non-backtracking walk counts obey a three-term matrix recurrence, which makes
them a polynomial in the adjacency matrix built from Chebyshev polynomials of
the second kind.  Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import csv
import math
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from os import PathLike

import numpy as np

from .errors import OverflowRisk
from .graph import RegularGraph
from .spectra import Spectrum, eigh_dense

__all__ = [
    "NbCountMatrix",
    "RatePair",
    "chebyshev_u",
    "q_k",
    "psi",
    "rates",
    "nb_count_matrix",
    "nb_count_spectral",
    "mu_k",
    "figure1_data",
    "write_figure1_csv",
]

INT64_MAX = np.iinfo(np.int64).max


def _advance(x: np.ndarray, cur: np.ndarray, prev: np.ndarray) -> np.ndarray:
    nxt = 2.0 * x * cur - prev
    # once a value has overflowed keep it infinite instead of letting inf - inf give nan
    return np.where(np.isinf(cur), cur, nxt)


def chebyshev_u(k: int, x):
    """``U_k(x)`` by the forward recurrence ``U_{k+1} = 2x U_k - U_{k-1}``.

    Accepts scalars or arrays; ``U_{-1} = 0``.  Large ``k`` with ``|x| > 1``
    overflows to ``inf`` (the sign is not tracked
    past that point).
    """
    if k < -1:
        raise ValueError(f"k must be >= -1, got {k}")
    x = np.asarray(x, dtype=np.float64)
    prev, cur = np.zeros_like(x), np.ones_like(x)
    if k == -1:
        return prev[()]
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(k):
            prev, cur = cur, _advance(x, cur, prev)
    return cur[()]


def q_k(k: int, x, d: int):
    """``sqrt((d-1)/d) U_k(x) - U_{k-2}(x) / sqrt(d(d-1))``.

    ``sqrt(d (d-1)**(k-1)) * q_k(A / (2 sqrt(d-1)))`` counts length-k
    non-backtracking walks.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    x = np.asarray(x, dtype=np.float64)
    # one recurrence pass yields both U_{k-2} and U_k
    prev, cur = np.zeros_like(x), np.ones_like(x)  # U_{-1}, U_0
    u_km2 = prev
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(k):
            if j == k - 1:
                u_km2 = prev
            prev, cur = cur, _advance(x, cur, prev)
        out = math.sqrt((d - 1) / d) * cur - u_km2 / math.sqrt(d * (d - 1))
    return out[()]


def psi(x: float) -> float:
    """1 on ``[0, 1]`` and ``x + sqrt(x^2 - 1)`` above."""
    if x < 0:
        raise ValueError(f"psi is defined on [0, inf), got {x}")
    if x <= 1.0:
        return 1.0
    return x + math.sqrt(max(x * x - 1.0, 0.0))


@dataclass(frozen=True)
class RatePair:
    """Mixing rates of the simple and the non-backtracking walk for (lambda, d)."""

    lam: float
    d: int
    rho: float
    rho_nb: float

    @property
    def ratio(self) -> float:
        return self.rho_nb / self.rho if self.rho else math.inf

    @property
    def ramanujan(self) -> bool:
        return self.lam <= 2.0 * math.sqrt(self.d - 1)


def rates(lam: float, d: int) -> RatePair:
    """``rho = lam/d`` and ``rho_nb = psi(lam / (2 sqrt(d-1))) / sqrt(d-1)``."""
    if d < 3:
        raise ValueError(f"non-backtracking rate needs d >= 3, got {d}")
    if lam < 0 or lam > d * (1 + 1e-12):
        raise ValueError(f"lambda must lie in [0, d], got {lam}")
    lam = min(lam, float(d))
    root = math.sqrt(d - 1)
    return RatePair(lam=lam, d=d, rho=lam / d, rho_nb=psi(lam / (2.0 * root)) / root)


@dataclass(frozen=True)
class NbCountMatrix:
    """``entries[u, v]`` = number of non-backtracking walks of length k from u to v.

    ``entries`` is int64 or, when built with ``wide=True`` past the int64
    range, an object array of Python ints.
    """

    k: int
    d: int
    entries: np.ndarray

    @property
    def row_total(self) -> int:
        return self.d * (self.d - 1) ** (self.k - 1)

    def transition(self) -> np.ndarray:
        """The k-step non-backtracking transition matrix, as floats."""
        if self.entries.dtype == object:
            total = self.row_total
            return np.vectorize(lambda x: x / total, otypes=[float])(self.entries)
        return self.entries / float(self.row_total)


def _fits_int64(d: int, k: int) -> bool:
    # entries of A @ A^(k-1) are bounded by its row sums d * d (d-1)^(k-2)
    bound = d * (d - 1) ** (k - 1)
    if k >= 2:
        bound = max(bound, d * d * (d - 1) ** (k - 2))
    return bound <= INT64_MAX


def nb_count_matrix(g: RegularGraph, k: int, *, wide: bool = False) -> NbCountMatrix:
    """Exact non-backtracking walk counts via the three-term recurrence.

    ``A^(1) = A``, ``A^(2) = A^2 - d I`` and
    ``A^(k+1) = A A^(k) - (d-1) A^(k-1)``.  Uses int64 when every
    intermediate fits; otherwise raises :class:`OverflowRisk` unless
    ``wide`` is set, in which case Python integers are used.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    d = g.d
    if d < 3:
        warnings.warn("non-backtracking walks on a 2-regular graph are periodic", stacklevel=2)
    if _fits_int64(d, k):
        dtype = np.int64
    elif wide:
        dtype = object
    else:
        raise OverflowRisk(f"d(d-1)^(k-1) = {d * (d - 1) ** (k - 1)} exceeds int64 for k={k}")
    a = np.zeros((g.n, g.n), dtype=dtype)
    a[g.tails, g.heads] = 1
    if dtype is object:
        a = np.vectorize(int, otypes=[object])(a)
    if k == 1:
        return NbCountMatrix(k=1, d=d, entries=a)
    prev = a
    cur = a[g.adj].sum(axis=1)  # A @ A, row by row
    cur[np.diag_indices(g.n)] -= d
    for _ in range(2, k):
        prev, cur = cur, cur[g.adj].sum(axis=1) - (d - 1) * prev
    return NbCountMatrix(k=k, d=d, entries=cur)


def nb_count_spectral(g: RegularGraph, k: int, dps: int | None = None) -> np.ndarray:
    """``sqrt(d (d-1)**(k-1)) q_k(A / (2 sqrt(d-1)))`` via an eigendecomposition of A.

    An independent float route to the walk counts.  With ``dps`` set the
    decomposition and the polynomial run in mpmath at that many digits and
    the result is rounded back to float64.
    """
    d = g.d
    if dps is None:
        w, v, _ = eigh_dense(g)
        scale = math.sqrt(d * (d - 1) ** (k - 1))
        f = scale * q_k(k, w / (2.0 * math.sqrt(d - 1)), d)
        return (v * f) @ v.T
    import mpmath

    with mpmath.workdps(dps):
        a = mpmath.matrix(g.adjacency_matrix().tolist())
        w, v = mpmath.eigsy(a)
        root = mpmath.sqrt(d - 1)
        scale = mpmath.sqrt(d * mpmath.mpf(d - 1) ** (k - 1))
        c1 = mpmath.sqrt(mpmath.mpf(d - 1) / d)
        c2 = 1 / mpmath.sqrt(mpmath.mpf(d * (d - 1)))
        f = []
        for lam in w:
            x = lam / (2 * root)
            u = [mpmath.mpf(0), mpmath.mpf(1)]  # U_{-1}, U_0
            for _ in range(k):
                u.append(2 * x * u[-1] - u[-2])
            f.append(scale * (c1 * u[k + 1] - c2 * u[k - 1]))
        n = g.n
        out = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                s = mpmath.fsum(v[i, t] * f[t] * v[j, t] for t in range(n))
                out[i, j] = out[j, i] = float(s)
    return out


def mu_k(s: Spectrum, d: int, k: int) -> float:
    """Largest nontrivial eigenvalue modulus of the k-step non-backtracking matrix.

    The first (largest) eigenvalue of ``s`` is skipped exactly once.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    lam = np.asarray(s.eigenvalues[1:], dtype=np.float64)
    if lam.size == 0:
        return 0.0
    vals = q_k(k, lam / (2.0 * math.sqrt(d - 1)), d)
    return float(np.max(np.abs(vals)) / math.sqrt(d * float(d - 1) ** (k - 1)))


def figure1_data(d: int, lambda_grid: Iterable[float]) -> list[tuple[float, float, float]]:
    """Rows ``(lambda, rho, rho_nb)`` comparing both walks across ``lambda_grid``."""
    rows = []
    for lam in lambda_grid:
        r = rates(float(lam), d)
        rows.append((r.lam, r.rho, r.rho_nb))
    return rows


def write_figure1_csv(rows: Sequence[tuple[float, float, float]], path: str | PathLike) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["lambda", "rho_simple", "rho_nb"])
        for row in rows:
            w.writerow([f"{x:.12g}" for x in row])
