"""
Per-model uncertainty U consumed by the UBIC.

Any callable ``(fit, lib) -> UncertaintyValue`` can serve as a quantifier.
The default, :func:`quantify_default`, is one plus the summed coefficient of
variation of the coefficients over a residual bootstrap with the support held
fixed.  It is scale free and never drops below 1 by construction; a
user-supplied quantifier need not keep that floor, since the UBIC only
requires ``U >= 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import solve_triangular

from .errors import UnstableCoefficient
from .regression import CandidateLibrary, ModelFit, _design

__all__ = ["Quantifier", "UncertaintyValue", "from_raw", "nint", "quantify_default"]


def nint(u: float) -> int:
    """Nearest integer, halves rounded up (1.5 -> 2)."""
    if not u > 0:
        raise ValueError(f"expected a positive value, got {u}")
    return int(math.floor(u + 0.5))


@dataclass(frozen=True)
class UncertaintyValue:
    raw: float
    rounded: int

    def to_dict(self) -> dict:
        return {"raw": self.raw, "rounded": self.rounded}


def from_raw(u: float) -> UncertaintyValue:
    if not (u > 0 and math.isfinite(u)):
        raise ValueError(f"uncertainty must be positive and finite, got {u}")
    return UncertaintyValue(float(u), nint(u))


Quantifier = Callable[[ModelFit, CandidateLibrary], UncertaintyValue]


def bootstrap_coefficients(fit: ModelFit, lib: CandidateLibrary, n_boot: int, seed: int) -> np.ndarray:
    """
    Residual-bootstrap replicates of the coefficients, shape ``(n_boot, k)``.

    Replicate ``i`` draws its resampling indices from ``default_rng(seed + i)``
    so results do not depend on evaluation order.
    """
    X = _design(lib, fit.support, fit.with_intercept)
    Q, R = np.linalg.qr(X)
    beta = np.concatenate([fit.coefficients, [fit.intercept] if fit.with_intercept else []])
    fitted = X @ beta
    resid = lib.target - fitted
    if fit.rss == 0:
        resid = np.zeros_like(resid)
    n = lib.n_samples
    Y = np.empty((n, n_boot))
    for i in range(n_boot):
        idx = np.random.default_rng(seed + i).integers(0, n, size=n)
        Y[:, i] = fitted + resid[idx]
    B = solve_triangular(R, Q.T @ Y)
    return B[: fit.support_size].T


def quantify_default(fit: ModelFit, lib: CandidateLibrary, n_boot: int = 100, seed: int = 0) -> UncertaintyValue:
    if n_boot < 10:
        raise ValueError("n_boot must be at least 10")
    boot = bootstrap_coefficients(fit, lib, n_boot, seed)
    mean = boot.mean(axis=0)
    if np.any(np.abs(mean) < 1e-12):
        bad = [int(fit.support[j]) for j in np.flatnonzero(np.abs(mean) < 1e-12)]
        raise UnstableCoefficient(f"bootstrap mean ~0 for column(s) {bad}")
    if fit.rss == 0:
        return from_raw(1.0)
    sd = boot.std(axis=0, ddof=1)
    return from_raw(1.0 + float(np.sum(sd / np.abs(mean))))
