"""
Information criteria for subset regression models.

``bic``     -2 log L + log(N) * ||xi||_0
``ubic``    -2 log L + log(N) * (||xi||_0 + U)
``icomp``   -2 log L + 2 a_N C1(F^-1)

``||xi||_0`` is the number of library terms; the intercept is not counted.
C1 is the maximal information complexity of the estimated inverse Fisher
information matrix (IFIM) of the Gaussian regression model.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import ExactFit, MixedCriteria, NegativeUncertainty, NotPositiveDefinite, RankDeficient
from .regression import RANK_RTOL, CandidateLibrary, ModelFit

__all__ = [
    "ComplexityReport",
    "CriterionScore",
    "ScanReport",
    "bic",
    "estimate_ifim_inverse",
    "icomp",
    "max_info_complexity",
    "relative_scores",
    "scan_a_n",
    "scores_to_csv",
    "scores_to_json",
    "select",
    "ubic",
]

CRITERIA = ("BIC", "UBIC", "ICOMP")


@dataclass(frozen=True)
class CriterionScore:
    criterion: str
    neg2_loglik: float
    penalty: float
    total: float
    support_size: int
    params: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ComplexityReport:
    value: float
    trace: float
    log_det: float
    dim: int

    def to_dict(self) -> dict:
        return asdict(self)


def _neg2_loglik(fit: ModelFit) -> float:
    if fit.rss == 0 or not math.isfinite(fit.log_likelihood):
        raise ExactFit(f"support {fit.support} fits the target exactly")
    return -2.0 * fit.log_likelihood


def _score(criterion, fit, neg2, penalty, params) -> CriterionScore:
    # Every criterion builds its total through this one expression.
    return CriterionScore(criterion, neg2, penalty, neg2 + penalty, fit.support_size, params)


def bic(fit: ModelFit) -> CriterionScore:
    n = fit.n_samples
    penalty = math.log(n) * fit.support_size
    return _score("BIC", fit, _neg2_loglik(fit), penalty, {"N": n})


def ubic(fit: ModelFit, u: float) -> CriterionScore:
    """Uncertainty-penalised BIC; ``u = 0`` reproduces :func:`bic` bit for bit."""
    if not u >= 0 or not math.isfinite(u):
        raise NegativeUncertainty(f"uncertainty must be finite and >= 0, got {u}")
    n = fit.n_samples
    penalty = math.log(n) * (fit.support_size + u)
    return _score("UBIC", fit, _neg2_loglik(fit), penalty, {"N": n, "U": float(u)})


def max_info_complexity(cov) -> ComplexityReport:
    """
    Maximal information complexity of a covariance matrix.

    ``C1(S) = (s/2) log(tr(S)/s) - (1/2) log det(S)``, which is zero exactly
    when all eigenvalues are equal and positive otherwise.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ValueError("covariance must be a square matrix")
    scale = max(np.abs(cov).max(), np.finfo(float).tiny)
    if np.abs(cov - cov.T).max() > 1e-10 * scale:
        raise NotPositiveDefinite("covariance is not symmetric")
    s = cov.shape[0]
    try:
        L = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise NotPositiveDefinite("covariance has a non-positive eigenvalue") from None
    d = np.diag(L)
    if np.any(d <= 0):
        raise NotPositiveDefinite("covariance has a non-positive eigenvalue")
    log_det = 2.0 * float(np.sum(np.log(d)))
    trace = float(np.trace(cov))
    value = 0.5 * s * math.log(trace / s) - 0.5 * log_det
    # AM-GM makes the exact value non-negative; only round-off can dip below.
    return ComplexityReport(max(value, 0.0), trace, log_det, s)


def estimate_ifim_inverse(fit: ModelFit, lib: CandidateLibrary) -> np.ndarray:
    """
    Estimated inverse Fisher information of ``(xi_S, sigma^2)``.

    Block diagonal: ``sigma^2 (Phi_S^T Phi_S)^-1`` for the coefficients and
    ``2 sigma^4 / N`` for the noise variance, with ``sigma^2 = rss / N``.
    """
    if fit.rss == 0:
        raise ExactFit("IFIM is undefined for an exact fit")
    n = fit.n_samples
    if n != lib.n_samples:
        raise ValueError("fit and library disagree on the number of samples")
    sigma2 = fit.rss / n
    A = lib.matrix[:, list(fit.support)]
    _, R = np.linalg.qr(A)
    if np.any(np.abs(np.diag(R)) <= RANK_RTOL * np.linalg.norm(A, axis=0).max()):
        raise RankDeficient(f"columns {fit.support} are collinear")
    Rinv = np.linalg.inv(R)
    k = fit.support_size
    out = np.zeros((k + 1, k + 1))
    block = sigma2 * (Rinv @ Rinv.T)
    out[:k, :k] = 0.5 * (block + block.T)
    out[k, k] = 2.0 * sigma2 * sigma2 / n
    return out


def icomp(fit: ModelFit, lib: CandidateLibrary, a_n: float) -> CriterionScore:
    if not a_n > 0:
        raise ValueError(f"a_n must be positive, got {a_n}")
    neg2 = _neg2_loglik(fit)
    c = max_info_complexity(estimate_ifim_inverse(fit, lib)).value
    return _score("ICOMP", fit, neg2, 2.0 * a_n * c, {"N": fit.n_samples, "a_n": float(a_n), "C": c})


def relative_scores(scores: Sequence[CriterionScore]) -> List[float]:
    """``total_i - min_j total_j``; the best model maps to 0."""
    if not scores:
        raise ValueError("no scores given")
    kinds = {s.criterion for s in scores}
    if len(kinds) > 1:
        raise MixedCriteria(f"cannot compare {sorted(kinds)}")
    lo = min(s.total for s in scores)
    return [s.total - lo for s in scores]


def select(fits: Sequence[ModelFit], totals: Sequence[float]) -> int:
    """Index of the minimum total; ties go to the smaller, then lexicographically smaller, support."""
    order = sorted(range(len(fits)), key=lambda i: (totals[i], fits[i].support_size, fits[i].support))
    return order[0]


@dataclass
class ScanReport:
    schedule: List[float]
    selected: List[tuple]
    oracle_support: tuple
    found: bool
    a_n: Optional[float]

    def to_dict(self) -> dict:
        return {
            "schedule": list(self.schedule),
            "selected": [list(s) for s in self.selected],
            "oracle_support": list(self.oracle_support),
            "found": self.found,
            "a_n": self.a_n,
            "status": "found" if self.found else "not found",
        }


def scan_a_n(
    fits: Sequence[ModelFit],
    lib: CandidateLibrary,
    schedule: Sequence[float],
    oracle_support,
) -> ScanReport:
    """
    Smallest a_N in ``schedule`` whose ICOMP choice equals ``oracle_support``.

    Every schedule entry is evaluated so the report shows the whole path.
    """
    schedule = [float(a) for a in schedule]
    if any(b < a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be sorted ascending")
    oracle = tuple(sorted(int(j) for j in oracle_support))
    neg2 = [_neg2_loglik(f) for f in fits]
    comps = [max_info_complexity(estimate_ifim_inverse(f, lib)).value for f in fits]
    selected = []
    hit = None
    for a in schedule:
        totals = [n2 + 2.0 * a * c for n2, c in zip(neg2, comps)]
        chosen = fits[select(fits, totals)].support
        selected.append(chosen)
        if hit is None and chosen == oracle:
            hit = a
    return ScanReport(schedule, selected, oracle, hit is not None, hit)


def scores_to_json(scores: Sequence[CriterionScore]) -> str:
    return json.dumps([s.to_dict() for s in scores], indent=2)


def scores_to_csv(scores: Sequence[CriterionScore], path) -> None:
    """Two columns, ``support_size`` and the relative score, for external plotters."""
    rel = relative_scores(scores)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["support_size", f"relative_{scores[0].criterion}"])
        for s, r in zip(scores, rel):
            w.writerow([s.support_size, format(r, ".17g")])
