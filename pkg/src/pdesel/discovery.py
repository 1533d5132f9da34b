"""
Burgers' equation data, candidate libraries and the support-size sweep.

The sweep fits the best model of every size, attaches an uncertainty to
each, scores it with BIC, UBIC and ICOMP (one ICOMP per configured a_N),
records the IFIM complexity, and checks the UBIC/BIC identity on the row.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import criteria
from .equivalence import verify_identity
from .errors import SelectionError, TooFewInteriorPoints, UnstableSimulation
from .regression import CandidateLibrary, ModelFit, best_subsets
from .uncertainty import UncertaintyValue, quantify_default

__all__ = [
    "FieldData",
    "LibrarySpec",
    "SweepConfig",
    "SweepResult",
    "build_library",
    "compute_derivatives",
    "discovery_sweep",
    "field_from_csv",
    "field_to_csv",
    "render_pde",
    "resolve_a_n",
    "simulate_burgers",
    "term_name",
]


@dataclass
class FieldData:
    """
    Scalar field ``u[i, j] = u(x[i], t[j])`` on a uniform grid.

    ``nu`` and ``seed`` are provenance metadata written to the sidecar file.
    """

    u: np.ndarray
    x: np.ndarray
    t: np.ndarray
    nu: Optional[float] = None
    seed: Optional[int] = None

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        self.x = np.asarray(self.x, dtype=float)
        self.t = np.asarray(self.t, dtype=float)
        if self.u.shape != (self.x.size, self.t.size):
            raise ValueError(f"u has shape {self.u.shape}, expected {(self.x.size, self.t.size)}")
        for name, v in (("x", self.x), ("t", self.t)):
            if v.size < 2:
                raise ValueError(f"{name} needs at least two points")
            d = np.diff(v)
            if np.any(d <= 0):
                raise ValueError(f"{name} must be strictly increasing")
            # differences of linspace output wobble by a few ulps of max|v|
            tol = max(1e-12 * d.mean(), 16 * np.finfo(float).eps * np.abs(v).max())
            if np.abs(d - d.mean()).max() > tol:
                raise ValueError(f"{name} spacing is not uniform")
        if not np.all(np.isfinite(self.u)):
            raise ValueError("u contains non-finite values")

    @property
    def dx(self) -> float:
        return float((self.x[-1] - self.x[0]) / (self.x.size - 1))

    @property
    def dt(self) -> float:
        return float((self.t[-1] - self.t[0]) / (self.t.size - 1))

    def sidecar(self) -> dict:
        return {
            "n_x": int(self.x.size),
            "n_t": int(self.t.size),
            "dx": self.dx,
            "dt": self.dt,
            "nu": self.nu,
            "seed": self.seed,
        }


def _initial_condition(kind: str, x: np.ndarray, x_min: float, x_max: float) -> np.ndarray:
    L = x_max - x_min
    if kind == "gaussian_pulse":
        # unit-amplitude pulse three eighths of the way across (x = -2 on [-8, 8])
        return np.exp(-((x - (x_min + 0.375 * L)) ** 2))
    if kind == "sine":
        return np.sin(2.0 * np.pi * (x - x_min) / L)
    raise ValueError(f"unknown initial condition {kind!r}")


def simulate_burgers(
    nu: float = 0.1,
    domain: Tuple[float, float, int, float, int] = (-8.0, 8.0, 256, 10.0, 101),
    initial: str = "gaussian_pulse",
    seed: int = 0,
    noise: float = 0.0,
) -> FieldData:
    """
    Solve ``u_t = -u u_x + nu u_xx`` on a periodic domain.

    Method of lines: second-order central differences in space, classical
    RK4 in time with ``h <= 0.4 dx^2 / nu`` and ``h <= dx / max|u|``, sub-stepped
    between output times.

    Parameters
    ----------
    nu : float
        Viscosity, > 0.
    domain : (x_min, x_max, n_x, t_max, n_t)
        ``x`` is periodic (``x_max`` excluded); ``t`` runs from 0 to ``t_max``
        inclusive.
    initial : {"gaussian_pulse", "sine"}
    seed : int
        Seeds the optional measurement noise; recorded as metadata.
    noise : float
        Standard deviation of additive Gaussian noise on the output, relative
        to the standard deviation of the clean field.

    Returns
    -------
    FieldData
    """
    x_min, x_max, n_x, t_max, n_t = domain
    n_x, n_t = int(n_x), int(n_t)
    if not nu > 0:
        raise ValueError(f"nu must be positive, got {nu}")
    if n_x < 64 or n_t < 50:
        raise ValueError("need n_x >= 64 and n_t >= 50")
    x = np.linspace(x_min, x_max, n_x, endpoint=False)
    t = np.linspace(0.0, t_max, n_t)
    dx = (x_max - x_min) / n_x
    dt = t[1] - t[0]

    def rhs(v):
        vp, vm = np.roll(v, -1), np.roll(v, 1)
        return -v * (vp - vm) / (2.0 * dx) + nu * (vp - 2.0 * v + vm) / dx**2

    u = _initial_condition(initial, x, x_min, x_max)
    out = np.empty((n_x, n_t))
    out[:, 0] = u
    h_diff = 0.4 * dx * dx / nu
    for j in range(1, n_t):
        umax = np.abs(u).max()
        h_max = min(h_diff, dx / umax) if umax > 0 else h_diff
        nsub = max(1, math.ceil(dt / h_max))
        h = dt / nsub
        for _ in range(nsub):
            k1 = rhs(u)
            k2 = rhs(u + 0.5 * h * k1)
            k3 = rhs(u + 0.5 * h * k2)
            k4 = rhs(u + h * k3)
            u = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(u)) or np.abs(u).max() > 1e6:
            raise UnstableSimulation(f"solution blew up before t = {t[j]:g}")
        out[:, j] = u
    if noise > 0:
        rng = np.random.default_rng(seed)
        out = out + noise * out.std() * rng.standard_normal(out.shape)
    return FieldData(out, x, t, nu=float(nu), seed=int(seed))


def field_to_csv(fd: FieldData, path) -> Path:
    """Write ``x,t,u`` rows (x outer) plus a JSON sidecar; returns the sidecar path."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "t", "u"])
        for i, xi in enumerate(fd.x):
            for j, tj in enumerate(fd.t):
                w.writerow([format(xi, ".16e"), format(tj, ".16e"), format(fd.u[i, j], ".16e")])
    side = path.with_suffix(".json")
    side.write_text(json.dumps(fd.sidecar(), indent=2) + "\n")
    return side


def field_from_csv(path) -> FieldData:
    path = Path(path)
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    x = np.unique(data[:, 0])
    t = np.unique(data[:, 1])
    if data.shape[0] != x.size * t.size:
        raise ValueError(f"{path}: rows do not form a full x-t grid")
    u = data[:, 2].reshape(x.size, t.size)
    meta = {}
    side = path.with_suffix(".json")
    if side.exists():
        meta = json.loads(side.read_text())
    return FieldData(u, x, t, nu=meta.get("nu"), seed=meta.get("seed"))


@dataclass(frozen=True)
class LibrarySpec:
    """
    Composition of the candidate library.

    Terms are ``u^a * d^b u / dx^b`` for ``a <= max_poly_degree``,
    ``b <= max_deriv_order``, minus the constant (the intercept is fitted
    separately).  ``time_accuracy`` is the order of the central difference
    used for ``u_t`` (2 or 4).
    """

    max_poly_degree: int = 3
    max_deriv_order: int = 3
    differentiation: str = "central_fd"
    time_accuracy: int = 4

    @property
    def n_terms(self) -> int:
        return (self.max_poly_degree + 1) * (self.max_deriv_order + 1) - 1


def term_name(power: int, order: int) -> str:
    parts = []
    if power == 1:
        parts.append("u")
    elif power > 1:
        parts.append(f"u^{power}")
    if order > 0:
        parts.append("u_" + "x" * order)
    return "*".join(parts)


def _central_x(u: np.ndarray, dx: float, order: int) -> np.ndarray:
    """Second-order central differences along axis 0; NaN where the stencil leaves the grid."""
    out = np.full_like(u, np.nan)
    if order == 1:
        out[1:-1] = (u[2:] - u[:-2]) / (2.0 * dx)
    elif order == 2:
        out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / dx**2
    elif order == 3:
        out[2:-2] = (u[4:] - 2.0 * u[3:-1] + 2.0 * u[1:-3] - u[:-4]) / (2.0 * dx**3)
    else:
        raise ValueError(f"central differences implemented for orders 1-3, got {order}")
    return out


def _spectral_x(u: np.ndarray, dx: float, order: int) -> np.ndarray:
    n = u.shape[0]
    k = 2.0 * np.pi * np.fft.fftfreq(n, d=dx)
    if order % 2 == 1 and n % 2 == 0:
        k[n // 2] = 0.0
    factor = (1j * k) ** order
    return np.real(np.fft.ifft(factor[:, None] * np.fft.fft(u, axis=0), axis=0))


def _central_t(u: np.ndarray, dt: float, accuracy: int) -> np.ndarray:
    out = np.full_like(u, np.nan)
    if accuracy == 2:
        out[:, 1:-1] = (u[:, 2:] - u[:, :-2]) / (2.0 * dt)
    elif accuracy == 4:
        out[:, 2:-2] = (-u[:, 4:] + 8.0 * u[:, 3:-1] - 8.0 * u[:, 1:-3] + u[:, :-4]) / (12.0 * dt)
    else:
        raise ValueError(f"time_accuracy must be 2 or 4, got {accuracy}")
    return out


def compute_derivatives(fd: FieldData, spec: LibrarySpec = LibrarySpec()) -> Dict[str, np.ndarray]:
    """
    ``u_t`` and spatial derivatives ``0..max_deriv_order`` on the full grid.

    Keys are ``"u_t"`` and the integers ``0..q``.  Points whose stencil would
    leave the grid hold NaN.
    """
    if spec.differentiation == "central_fd":
        dx_fn = _central_x
    elif spec.differentiation == "spectral":
        dx_fn = _spectral_x
    else:
        raise ValueError(f"unknown differentiation scheme {spec.differentiation!r}")
    out: Dict = {"u_t": _central_t(fd.u, fd.dt, spec.time_accuracy), 0: fd.u}
    for b in range(1, spec.max_deriv_order + 1):
        out[b] = dx_fn(fd.u, fd.dx, b)
    return out


def build_library(
    fd: FieldData,
    spec: LibrarySpec = LibrarySpec(),
    n_samples: int = 10000,
    seed: int = 0,
    target_noise: float = 0.0,
) -> CandidateLibrary:
    """
    Sample ``n_samples`` interior grid points and evaluate every library term.

    ``target_noise`` adds Gaussian noise to ``u_t`` with standard deviation
    ``target_noise * std(u_t)`` over the sampled points, drawn from the same
    seeded stream as the sample locations.
    """
    ders = compute_derivatives(fd, spec)
    valid = np.all([np.isfinite(v) for v in ders.values()], axis=0).ravel()
    pool = np.flatnonzero(valid)
    if n_samples > pool.size:
        raise TooFewInteriorPoints(f"requested {n_samples} samples, only {pool.size} interior points")
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(pool, size=n_samples, replace=False))
    u = ders[0].ravel()[idx]
    cols, names = [], []
    for a in range(spec.max_poly_degree + 1):
        for b in range(spec.max_deriv_order + 1):
            if a == 0 and b == 0:
                continue
            d = ders[b].ravel()[idx]
            cols.append(u**a * d if a else d)
            names.append(term_name(a, b))
    target = ders["u_t"].ravel()[idx]
    if target_noise > 0:
        target = target + target_noise * target.std() * rng.standard_normal(n_samples)
    return CandidateLibrary(np.column_stack(cols), names, target)


def resolve_a_n(value, n: int) -> float:
    """``"logN"`` maps to ``log(n)``; anything else is taken as a number."""
    if isinstance(value, str):
        if value.replace(" ", "").lower() in ("logn", "log(n)"):
            return math.log(n)
        value = float(value)
    value = float(value)
    if not value > 0:
        raise ValueError(f"a_N must be positive, got {value}")
    return value


def a_n_label(value) -> str:
    return f"ICOMP({value})" if isinstance(value, str) else f"ICOMP({float(value):g})"


@dataclass
class SweepConfig:
    a_n: Sequence = (1.0, "logN")
    n_boot: int = 100
    seed: int = 0
    strategy: str = "auto"
    quantifier: Optional[Callable[[ModelFit, CandidateLibrary], UncertaintyValue]] = None


@dataclass
class SweepResult:
    column_names: List[str]
    n_samples: int
    rows: List[dict]
    selected: Dict[str, Optional[List[int]]]
    complexity_nondecreasing: bool
    fits: List[ModelFit] = field(default_factory=list, repr=False)

    def selected_names(self, label: str) -> Optional[List[str]]:
        s = self.selected.get(label)
        return None if s is None else [self.column_names[j] for j in s]

    def to_dict(self) -> dict:
        return {
            "n_samples": self.n_samples,
            "column_names": self.column_names,
            "rows": self.rows,
            "selected": {
                label: (None if s is None else {"support": s, "terms": self.selected_names(label)})
                for label, s in self.selected.items()
            },
            "complexity_nondecreasing": self.complexity_nondecreasing,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def icomp_labels(self) -> List[str]:
        return [lab for lab in self.selected if lab.startswith("ICOMP")]

    def write_figures(self, fig1, fig2) -> None:
        """Relative ICOMP per a_N versus k, and C versus k."""
        labels = self.icomp_labels()
        ok = [r for r in self.rows if all(lab in r["scores"] for lab in labels)]
        rel = {}
        for lab in labels:
            totals = [r["scores"][lab]["total"] for r in ok]
            lo = min(totals) if totals else 0.0
            rel[lab] = [tot - lo for tot in totals]
        with open(fig1, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["k"] + labels)
            for i, r in enumerate(ok):
                w.writerow([r["k"]] + [format(rel[lab][i], ".17g") for lab in labels])
        with open(fig2, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["k", "C"])
            for r in self.rows:
                if r.get("complexity") is not None:
                    w.writerow([r["k"], format(r["complexity"]["value"], ".17g")])


def _row(fit, lib, cfg, a_values) -> dict:
    row = {
        "k": fit.support_size,
        "support": [int(j) for j in fit.support],
        "terms": lib.names(fit.support),
        "fit": fit.to_dict(),
        "uncertainty": None,
        "complexity": None,
        "scores": {},
        "equivalence": None,
        "errors": [],
    }
    try:
        row["scores"]["BIC"] = criteria.bic(fit).to_dict()
    except SelectionError as exc:
        row["errors"].append(f"BIC: {type(exc).__name__}: {exc}")
    try:
        q = cfg.quantifier or (lambda f, lb: quantify_default(f, lb, cfg.n_boot, cfg.seed))
        u = q(fit, lib)
        row["uncertainty"] = u.to_dict()
        row["scores"]["UBIC"] = criteria.ubic(fit, u.raw).to_dict()
        row["equivalence"] = verify_identity(fit, lib, u).to_dict()
    except SelectionError as exc:
        row["errors"].append(f"UBIC: {type(exc).__name__}: {exc}")
    try:
        cov = criteria.estimate_ifim_inverse(fit, lib)
        comp = criteria.max_info_complexity(cov)
        row["complexity"] = comp.to_dict()
        for label, a in a_values.items():
            row["scores"][label] = criteria.icomp(fit, lib, a).to_dict()
    except SelectionError as exc:
        row["errors"].append(f"ICOMP: {type(exc).__name__}: {exc}")
    return row


def discovery_sweep(lib: CandidateLibrary, max_size: int, config: SweepConfig = SweepConfig()) -> SweepResult:
    """
    Score the best model of every support size ``1..max_size``.

    A failure inside one row (exact fit, unstable bootstrap, ...) is recorded
    in that row's ``errors`` list and does not stop the sweep.
    """
    if max_size > lib.n_terms:
        raise ValueError(f"max_size {max_size} exceeds library size {lib.n_terms}")
    n = lib.n_samples
    a_values = {a_n_label(a): resolve_a_n(a, n) for a in config.a_n}
    fits = best_subsets(lib, max_size, config.strategy)
    rows = [_row(f, lib, config, a_values) for f in fits]

    selected: Dict[str, Optional[List[int]]] = {}
    for label in ["BIC", "UBIC"] + list(a_values):
        idx = [i for i, r in enumerate(rows) if label in r["scores"]]
        if not idx:
            selected[label] = None
            continue
        best = idx[criteria.select([fits[i] for i in idx], [rows[i]["scores"][label]["total"] for i in idx])]
        selected[label] = rows[best]["support"]

    comps = [r["complexity"]["value"] for r in rows if r["complexity"] is not None]
    nondecreasing = bool(all(b >= a for a, b in zip(comps, comps[1:])))
    return SweepResult(list(lib.column_names), n, rows, selected, nondecreasing, fits)


def render_pde(fit: ModelFit, names: Sequence[str], digits: int = 4) -> str:
    """``u_t = 0.1000*u_xx - 1.0002*u*u_x`` style rendering (intercept omitted)."""
    body = ""
    for i, (c, j) in enumerate(zip(fit.coefficients, fit.support)):
        mag = f"{abs(c):.{digits}f}*{names[j]}"
        if i == 0:
            body = mag if c >= 0 else "-" + mag
        else:
            body += (" + " if c >= 0 else " - ") + mag
    return f"u_t = {body}"
