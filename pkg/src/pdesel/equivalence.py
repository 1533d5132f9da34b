"""
UBIC as a plain BIC on an overparameterised model.

Given a fit ``u_t ~ Phi_S xi_S + eps`` and a rounded uncertainty ``U``, the
intercept is split over ``U + 1`` identical constant columns
``A = [eps/(U+1) * 1, ..., eps/(U+1) * 1]`` with unit coefficients.  The
augmented model ``[Phi_S | A] [xi_S; 1]`` predicts exactly what the base model
predicts, so its likelihood is unchanged while its support grows to
``U + p`` (``p = k + 1``).  The BIC of the augmented model therefore equals
the UBIC of the base model written in compact form, penalty
``log(N) * (p + U)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import List, Sequence

import numpy as np

from .criteria import ubic
from .errors import DegenerateU, ZeroIntercept
from .regression import CandidateLibrary, ModelFit, fit_subset, gaussian_loglik
from .uncertainty import UncertaintyValue, from_raw

__all__ = [
    "AugmentedModel",
    "VerificationReport",
    "augment",
    "random_instance",
    "reports_to_json",
    "run_battery",
    "summarize",
    "verify_identity",
]

_ZERO_INTERCEPT = 1e-14


@dataclass
class AugmentedModel:
    matrix: np.ndarray
    coefficients: np.ndarray
    u_int: int
    base_dof: int

    @property
    def l0(self) -> int:
        return int(np.count_nonzero(self.coefficients))

    def predict(self) -> np.ndarray:
        return self.matrix @ self.coefficients


def augment(fit: ModelFit, lib: CandidateLibrary, u_int: int) -> AugmentedModel:
    """Build ``([Phi_S | A], [xi_S; 1, ..., 1])`` with ``u_int + 1`` constant columns."""
    if int(u_int) != u_int or u_int < 1:
        raise DegenerateU(f"rounded uncertainty must be an integer >= 1, got {u_int}")
    u_int = int(u_int)
    eps = fit.intercept
    if not fit.with_intercept or abs(eps) < _ZERO_INTERCEPT:
        raise ZeroIntercept(f"intercept {eps!r} is too small to carry the extra columns")
    n = lib.n_samples
    A = np.full((n, u_int + 1), eps / (u_int + 1))
    matrix = np.column_stack([lib.matrix[:, list(fit.support)], A])
    coefficients = np.concatenate([fit.coefficients, np.ones(u_int + 1)])
    return AugmentedModel(matrix, coefficients, u_int, fit.dof)


@dataclass
class VerificationReport:
    ubic_total: float
    bic_aug_total: float
    abs_diff: float
    passed: bool
    n: int
    k: int
    p: int
    u_rounded: int
    ubic_coef_total: float
    rss_base: float
    rss_aug: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        d["conventions"] = {
            "ubic_total": "log(N) * (p + U), p = k + 1 (intercept counted)",
            "bic_aug_total": "log(N) * ||xi_aug||_0",
            "ubic_coef_total": "log(N) * (k + U), intercept not counted",
        }
        return d


def verify_identity(
    fit: ModelFit,
    lib: CandidateLibrary,
    u: UncertaintyValue,
    perturbation: float = 0.0,
) -> VerificationReport:
    """
    Compare compact-form UBIC of ``fit`` with the BIC of its augmentation.

    ``perturbation`` is added to the first augmented coefficient; any nonzero
    value breaks the reconstruction and should make the check fail.
    """
    aug = augment(fit, lib, u.rounded)
    if perturbation:
        aug.coefficients[0] += perturbation
    n = lib.n_samples
    resid = lib.target - aug.predict()
    rss_aug = float(resid @ resid)
    ubic_total = -2.0 * fit.log_likelihood + math.log(n) * (fit.dof + u.rounded)
    bic_aug_total = -2.0 * gaussian_loglik(rss_aug, n) + math.log(n) * aug.l0
    diff = abs(ubic_total - bic_aug_total)
    return VerificationReport(
        ubic_total=ubic_total,
        bic_aug_total=bic_aug_total,
        abs_diff=diff,
        passed=bool(diff <= 1e-9 * max(1.0, abs(ubic_total))),
        n=n,
        k=fit.support_size,
        p=fit.dof,
        u_rounded=u.rounded,
        ubic_coef_total=ubic(fit, u.rounded).total,
        rss_base=fit.rss,
        rss_aug=rss_aug,
    )


def random_instance(rng: np.random.Generator, n_range=(50, 500), m_range=(3, 8), u_range=(1, 5)):
    """
    Random ``(fit, lib, u)`` triple for the identity battery.

    The library is Gaussian, the target a sparse combination plus a nonzero
    intercept and noise, and the support a random subset of random size.
    """
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    m = int(rng.integers(m_range[0], m_range[1] + 1))
    k = int(rng.integers(1, m + 1))
    u_int = int(rng.integers(u_range[0], u_range[1] + 1))
    Phi = rng.standard_normal((n, m))
    xi = rng.standard_normal(m) * (rng.random(m) < 0.6)
    eps = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 3.0)
    y = Phi @ xi + eps + 0.1 * rng.standard_normal(n)
    lib = CandidateLibrary(Phi, [f"phi{j}" for j in range(m)], y)
    support = np.sort(rng.choice(m, size=k, replace=False))
    fit = fit_subset(lib, support)
    # Any positive real that rounds to u_int exercises the rounding path too.
    u = from_raw(u_int + rng.uniform(-0.49, 0.49))
    return fit, lib, u


def run_battery(n_instances: int = 200, seed: int = 0, perturbation: float = 0.0) -> List[VerificationReport]:
    rng = np.random.default_rng(seed)
    reports = []
    for _ in range(n_instances):
        fit, lib, u = random_instance(rng)
        reports.append(verify_identity(fit, lib, u, perturbation=perturbation))
    return reports


def summarize(reports: Sequence[VerificationReport]) -> dict:
    passed = sum(r.passed for r in reports)
    return {
        "pass_count": passed,
        "fail_count": len(reports) - passed,
        "max_abs_diff": max((r.abs_diff for r in reports), default=0.0),
    }


def reports_to_json(reports: Sequence[VerificationReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2)
