"""
Subset least squares on a candidate library.

Every criterion in this package consumes a :class:`ModelFit`: the ordinary
least-squares fit of the target on a subset of library columns plus an
explicit all-ones intercept column, together with the profiled Gaussian
log-likelihood of that fit.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .errors import EmptySupport, RankDeficient

__all__ = [
    "CandidateLibrary",
    "ModelFit",
    "RANK_RTOL",
    "best_subsets",
    "fit_subset",
    "gaussian_loglik",
    "library_from_csv",
    "library_to_csv",
]

# |R_ii| below RANK_RTOL * (largest column norm) marks a column as dependent.
RANK_RTOL = 1e-10
# Relative residual norm at which a fit is indistinguishable from exact.
_EXACT_RTOL = 64 * np.finfo(float).eps

TARGET_HEADER = "__target__"


@dataclass
class CandidateLibrary:
    """
    Design matrix of candidate terms and the regression target.

    Parameters
    ----------
    matrix : ndarray, shape (N, m)
        Column ``j`` holds candidate term ``j`` evaluated at every sample.
    column_names : list of str
        Unique, human-readable term names (``"u*u_x"``, ``"u_xx"``, ...).
    target : ndarray, shape (N,)
        Estimated time derivative at the same samples.
    """

    matrix: np.ndarray
    column_names: List[str]
    target: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        self.target = np.asarray(self.target, dtype=float).ravel()
        self.column_names = [str(c) for c in self.column_names]
        if self.matrix.ndim != 2:
            raise ValueError("library matrix must be 2-D")
        n, m = self.matrix.shape
        if m < 1 or n < m:
            raise ValueError(f"need N >= m >= 1, got N={n}, m={m}")
        if self.target.shape[0] != n:
            raise ValueError(f"target has {self.target.shape[0]} rows, matrix has {n}")
        if len(self.column_names) != m:
            raise ValueError("one name per column required")
        if len(set(self.column_names)) != m:
            raise ValueError("column names must be unique")
        zero = np.flatnonzero(~np.any(self.matrix != 0.0, axis=0))
        if zero.size:
            raise ValueError(f"all-zero column(s): {[self.column_names[j] for j in zero]}")
        if not (np.all(np.isfinite(self.matrix)) and np.all(np.isfinite(self.target))):
            raise ValueError("library contains non-finite values")

    @property
    def n_samples(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_terms(self) -> int:
        return self.matrix.shape[1]

    def indices(self, names: Iterable[str]) -> tuple:
        """Sorted column indices for the given term names."""
        lookup = {name: j for j, name in enumerate(self.column_names)}
        try:
            return tuple(sorted(lookup[name] for name in names))
        except KeyError as exc:
            raise KeyError(f"unknown term {exc.args[0]!r}; library has {self.column_names}") from None

    def names(self, support: Iterable[int]) -> List[str]:
        return [self.column_names[j] for j in support]


@dataclass(frozen=True)
class ModelFit:
    """
    Least-squares fit of the target on ``support`` (plus intercept).

    ``dof`` counts the intercept, ``support_size`` does not.
    """

    support: tuple
    coefficients: np.ndarray
    intercept: float
    rss: float
    log_likelihood: float
    n_samples: int
    with_intercept: bool = True
    residuals: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def support_size(self) -> int:
        return len(self.support)

    @property
    def dof(self) -> int:
        return len(self.support) + int(self.with_intercept)

    def to_dict(self) -> dict:
        return {
            "support": [int(j) for j in self.support],
            "coefficients": [float(c) for c in self.coefficients],
            "intercept": float(self.intercept),
            "rss": float(self.rss),
            "log_likelihood": float(self.log_likelihood),
            "n_samples": int(self.n_samples),
            "dof": self.dof,
        }


def gaussian_loglik(rss: float, n: int) -> float:
    """
    Maximised Gaussian log-likelihood with the noise variance profiled out.

    Returns ``-(n/2) * (log(2*pi*rss/n) + 1)``.  An exact fit (``rss == 0``)
    has unbounded likelihood and returns ``math.inf``; callers that need a
    finite value raise :class:`~pdesel.errors.ExactFit`.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if rss < 0:
        raise ValueError("rss must be non-negative")
    if rss == 0:
        return math.inf
    return -0.5 * n * (math.log(2.0 * math.pi * rss / n) + 1.0)


def _design(lib: CandidateLibrary, support: Sequence[int], with_intercept: bool) -> np.ndarray:
    cols = lib.matrix[:, list(support)]
    if with_intercept:
        cols = np.column_stack([cols, np.ones(lib.n_samples)])
    return cols


def _normalize_support(support: Iterable[int], m: int) -> tuple:
    s = tuple(sorted({int(j) for j in support}))
    if not s:
        raise EmptySupport("support must contain at least one column")
    if s[0] < 0 or s[-1] >= m:
        raise IndexError(f"support {s} out of range for {m} columns")
    return s


def fit_subset(lib: CandidateLibrary, support: Iterable[int], with_intercept: bool = True) -> ModelFit:
    """
    Ordinary least squares of ``lib.target`` on the columns in ``support``.

    Solved by a reduced QR factorisation of ``[Phi_S | 1]``. Raises
    :class:`RankDeficient` when a diagonal entry of ``R`` falls below
    ``RANK_RTOL`` times the largest column norm.
    """
    support = _normalize_support(support, lib.n_terms)
    X = _design(lib, support, with_intercept)
    y = lib.target
    if X.shape[1] > X.shape[0]:
        raise RankDeficient(f"{X.shape[1]} columns but only {X.shape[0]} samples")
    Q, R = np.linalg.qr(X)
    tol = RANK_RTOL * np.linalg.norm(X, axis=0).max()
    if np.any(np.abs(np.diag(R)) <= tol):
        raise RankDeficient(f"columns {support} (with_intercept={with_intercept}) are collinear")
    beta = solve_triangular(R, Q.T @ y)
    resid = y - X @ beta
    rss = float(resid @ resid)
    if rss <= _EXACT_RTOL**2 * float(y @ y):
        rss = 0.0
    k = len(support)
    return ModelFit(
        support=support,
        coefficients=beta[:k].copy(),
        intercept=float(beta[k]) if with_intercept else 0.0,
        rss=rss,
        log_likelihood=gaussian_loglik(rss, lib.n_samples),
        n_samples=lib.n_samples,
        with_intercept=with_intercept,
        residuals=resid,
    )


class _CompressedProblem:
    """
    Orthogonal reduction of the full problem.

    With ``[Phi | 1] = Q R`` and ``z = Q^T y`` the RSS of any column subset
    equals ``base + min ||z - R_S b||^2``, so candidate supports are scored on
    an ``(m+1)``-row system instead of ``N`` rows.
    """

    def __init__(self, lib: CandidateLibrary, with_intercept: bool):
        A = lib.matrix
        if with_intercept:
            A = np.column_stack([A, np.ones(lib.n_samples)])
        Q, self.R = np.linalg.qr(A)
        y = lib.target
        self.z = Q.T @ y
        r = y - Q @ self.z
        self.base = float(r @ r)
        self.col_norms = np.linalg.norm(A, axis=0)
        self.with_intercept = with_intercept
        self.m = lib.n_terms

    def rss(self, supports: np.ndarray) -> np.ndarray:
        """RSS for a batch of supports, shape (B, k); ``inf`` where degenerate."""
        cols = supports
        if self.with_intercept:
            cols = np.column_stack([supports, np.full(len(supports), self.m)])
        sub = np.transpose(self.R[:, cols], (1, 0, 2))  # (B, m+1, k+1)
        q, r = np.linalg.qr(sub)
        diag = np.abs(np.diagonal(r, axis1=1, axis2=2))
        tol = RANK_RTOL * self.col_norms[cols].max(axis=1)
        ok = np.all(diag > tol[:, None], axis=1) & (cols.shape[1] <= self.R.shape[0])
        proj = np.einsum("bij,i->bj", q, self.z)
        resid = self.z[None, :] - np.einsum("bij,bj->bi", q, proj)
        out = self.base + np.einsum("bi,bi->b", resid, resid)
        out[~ok] = np.inf
        return out


def _argmin_first(values: np.ndarray) -> int:
    # np.argmin returns the first minimum: supports are generated in
    # lexicographic order, so ties resolve to the smallest support.
    return int(np.argmin(values))


def best_subsets(
    lib: CandidateLibrary,
    max_size: int,
    strategy: str = "auto",
    with_intercept: bool = True,
) -> List[ModelFit]:
    """
    Minimum-RSS model for every support size ``1..max_size``.

    Parameters
    ----------
    lib : CandidateLibrary
    max_size : int
        Largest support size, ``1 <= max_size <= m``.
    strategy : {"auto", "exhaustive", "forward"}
        ``exhaustive`` enumerates every support of each size (the global
        per-size optimum); ``forward`` is greedy forward selection and yields
        nested supports. ``auto`` is exhaustive for ``m <= 16``.
    with_intercept : bool

    Returns
    -------
    list of ModelFit
        ``result[k-1]`` is the best model with ``k`` terms.
    """
    m = lib.n_terms
    if not 1 <= max_size <= m:
        raise ValueError(f"max_size must be in [1, {m}], got {max_size}")
    if strategy == "auto":
        strategy = "exhaustive" if m <= 16 else "forward"
    if strategy not in ("exhaustive", "forward"):
        raise ValueError(f"unknown strategy {strategy!r}")

    prob = _CompressedProblem(lib, with_intercept)
    chosen = []
    if strategy == "exhaustive":
        for k in range(1, max_size + 1):
            combos = np.array(list(itertools.combinations(range(m), k)), dtype=int)
            rss = prob.rss(combos)
            i = _argmin_first(rss)
            if not np.isfinite(rss[i]):
                raise RankDeficient(f"every support of size {k} is degenerate")
            chosen.append(tuple(int(j) for j in combos[i]))
    else:
        current: list = []
        for k in range(1, max_size + 1):
            remaining = [j for j in range(m) if j not in current]
            combos = np.array([sorted(current + [j]) for j in remaining], dtype=int)
            rss = prob.rss(combos)
            i = _argmin_first(rss)
            if not np.isfinite(rss[i]):
                raise RankDeficient(f"no non-degenerate extension at size {k}")
            current = [int(j) for j in combos[i]]
            chosen.append(tuple(current))
    return [fit_subset(lib, s, with_intercept) for s in chosen]


def library_to_csv(lib: CandidateLibrary, path) -> None:
    """Write one row per sample; the last column is ``__target__``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(lib.column_names) + [TARGET_HEADER])
        data = np.column_stack([lib.matrix, lib.target])
        for row in data:
            w.writerow([format(v, ".16e") for v in row])


def library_from_csv(path) -> CandidateLibrary:
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][-1] != TARGET_HEADER:
        raise ValueError(f"{path}: last header column must be {TARGET_HEADER!r}")
    data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
    return CandidateLibrary(data[:, :-1], rows[0][:-1], data[:, -1])
