"""
Command-line front end.

    pdesel simulate --nu 0.1 --seed 7 --out data/
    pdesel build-library --field data/field.csv --out data/
    pdesel discover --out run/
    pdesel verify-equivalence --instances 200 --json
    pdesel scan-an --schedule 1,2,5,logN

Settings resolve as command line > ``--config`` JSON file > defaults.
Exit status: 0 success, 1 runtime or data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .config import RunConfig
from .criteria import scan_a_n
from .discovery import (
    build_library,
    discovery_sweep,
    field_from_csv,
    field_to_csv,
    render_pde,
    resolve_a_n,
    simulate_burgers,
)
from .equivalence import reports_to_json, run_battery, summarize
from .errors import SelectionError
from .regression import best_subsets, library_from_csv, library_to_csv


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _nonneg_float(text: str) -> float:
    v = float(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _a_n_list(text: str) -> list:
    out = []
    for item in text.split(","):
        item = item.strip()
        if item.replace(" ", "").lower() in ("logn", "log(n)"):
            out.append("logN")
        else:
            out.append(_positive_float(item))
    return out


def _names(text: str) -> List[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with run settings")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output directory")
    common.add_argument("--json", action="store_true", help="print machine-readable output")

    sim = argparse.ArgumentParser(add_help=False)
    g = sim.add_argument_group("simulation")
    g.add_argument("--nu", type=_positive_float)
    g.add_argument("--x-min", dest="x_min", type=float)
    g.add_argument("--x-max", dest="x_max", type=float)
    g.add_argument("--nx", dest="n_x", type=_positive_int)
    g.add_argument("--t-max", dest="t_max", type=_positive_float)
    g.add_argument("--nt", dest="n_t", type=_positive_int)
    g.add_argument("--initial", choices=["gaussian_pulse", "sine"])
    g.add_argument("--field-noise", dest="field_noise", type=_nonneg_float)

    lib = argparse.ArgumentParser(add_help=False)
    g = lib.add_argument_group("library")
    g.add_argument("--field", help="field CSV written by `simulate` (default: simulate from config)")
    g.add_argument("--degree", dest="max_poly_degree", type=int)
    g.add_argument("--order", dest="max_deriv_order", type=int, choices=[0, 1, 2, 3])
    g.add_argument("--differentiation", choices=["central_fd", "spectral"])
    g.add_argument("--time-accuracy", dest="time_accuracy", type=int, choices=[2, 4])
    g.add_argument("--n-samples", dest="n_samples", type=_positive_int)
    g.add_argument("--target-noise", dest="target_noise", type=_nonneg_float)

    sweep = argparse.ArgumentParser(add_help=False)
    g = sweep.add_argument_group("sweep")
    g.add_argument("--library", help="library CSV written by `build-library`")
    g.add_argument("--max-size", dest="max_size", type=_positive_int)
    g.add_argument("--strategy", choices=["auto", "exhaustive", "forward"])
    g.add_argument("--n-boot", dest="n_boot", type=_positive_int)

    parser = argparse.ArgumentParser(prog="pdesel", description=__doc__.split("\n\n")[0].strip())
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common, sim], help="simulate Burgers' equation")
    sub.add_parser("build-library", parents=[common, sim, lib], help="build a candidate library CSV")
    p = sub.add_parser("discover", parents=[common, sim, lib, sweep], help="support-size sweep with BIC/UBIC/ICOMP")
    p.add_argument("--a-n", dest="a_n", type=_a_n_list, help="comma list of a_N values, e.g. 1,logN")
    p = sub.add_parser("verify-equivalence", parents=[common], help="UBIC = BIC(augmented) battery")
    p.add_argument("--instances", type=_positive_int)
    p.add_argument("--perturb", type=float, nargs="?", const=1e-3, help="inject a coefficient perturbation (negative control)")
    p = sub.add_parser("scan-an", parents=[common, sim, lib, sweep], help="smallest a_N recovering an oracle support")
    p.add_argument("--schedule", type=_a_n_list, help="ascending comma list of a_N values")
    p.add_argument("--oracle", type=_names, help="comma list of term names")
    return parser


_NOT_CONFIG = {"command", "config", "json"}


def _resolve(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    overrides = {k: v for k, v in vars(args).items() if k not in _NOT_CONFIG and v is not None}
    cfg = cfg.updated(**overrides)
    if not cfg.nu > 0:
        raise ValueError(f"nu must be positive, got {cfg.nu}")
    return cfg


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _field(cfg: RunConfig):
    if cfg.field:
        path = Path(cfg.field)
        if not path.exists():
            raise FileNotFoundError(f"field file not found: {path}")
        return field_from_csv(path)
    return simulate_burgers(cfg.nu, cfg.domain, cfg.initial, cfg.seed, cfg.field_noise)


def _library(cfg: RunConfig):
    if cfg.library:
        path = Path(cfg.library)
        if not path.exists():
            raise FileNotFoundError(f"library file not found: {path}")
        return library_from_csv(path)
    return build_library(_field(cfg), cfg.library_spec(), cfg.n_samples, cfg.seed, cfg.target_noise)


def cmd_simulate(cfg: RunConfig, as_json: bool) -> int:
    fd = simulate_burgers(cfg.nu, cfg.domain, cfg.initial, cfg.seed, cfg.field_noise)
    out = _out_dir(cfg)
    side = field_to_csv(fd, out / "field.csv")
    if as_json:
        print(json.dumps({"field": str(out / "field.csv"), "sidecar": str(side), **fd.sidecar()}))
    else:
        print(f"wrote {out / 'field.csv'} ({fd.x.size} x {fd.t.size}) and {side}")
    return 0


def cmd_build_library(cfg: RunConfig, as_json: bool) -> int:
    lib = build_library(_field(cfg), cfg.library_spec(), cfg.n_samples, cfg.seed, cfg.target_noise)
    out = _out_dir(cfg)
    library_to_csv(lib, out / "library.csv")
    if as_json:
        print(json.dumps({"library": str(out / "library.csv"), "n_samples": lib.n_samples, "terms": lib.column_names}))
    else:
        print(f"wrote {out / 'library.csv'}: {lib.n_samples} samples x {lib.n_terms} terms")
    return 0


def cmd_discover(cfg: RunConfig, as_json: bool) -> int:
    lib = _library(cfg)
    res = discovery_sweep(lib, min(cfg.max_size, lib.n_terms), cfg.sweep_config())
    out = _out_dir(cfg)
    (out / "sweep.json").write_text(res.to_json())
    res.write_figures(out / "fig1.csv", out / "fig2.csv")
    (out / "config.json").write_text(cfg.to_json())
    by_support = {f.support: f for f in res.fits}
    if as_json:
        print(json.dumps(res.to_dict()["selected"]))
    else:
        for label, support in res.selected.items():
            if support is None:
                print(f"{label:>14}: no valid rows")
                continue
            fit = by_support[tuple(support)]
            print(f"{label:>14}: {render_pde(fit, lib.column_names)}")
        if not res.complexity_nondecreasing:
            print("note: IFIM complexity is not nondecreasing in k on this run")
    return 0


def cmd_verify_equivalence(cfg: RunConfig, as_json: bool) -> int:
    reports = run_battery(cfg.instances, cfg.seed, cfg.perturb)
    agg = summarize(reports)
    if cfg.out != RunConfig.out:
        (_out_dir(cfg) / "equivalence.json").write_text(reports_to_json(reports) + "\n")
    if as_json:
        print(json.dumps(agg))
    else:
        print(f"{agg['pass_count']} passed, {agg['fail_count']} failed, max |UBIC - BIC_aug| = {agg['max_abs_diff']:.3e}")
    return 0 if agg["fail_count"] == 0 else 1


def cmd_scan_an(cfg: RunConfig, as_json: bool) -> int:
    lib = _library(cfg)
    fits = best_subsets(lib, min(cfg.max_size, lib.n_terms), cfg.strategy)
    schedule = [resolve_a_n(a, lib.n_samples) for a in cfg.schedule]
    rep = scan_a_n(fits, lib, schedule, lib.indices(cfg.oracle))
    d = rep.to_dict()
    d["selected_terms"] = [lib.names(s) for s in rep.selected]
    if cfg.out != RunConfig.out:
        (_out_dir(cfg) / "scan.json").write_text(json.dumps(d, indent=2) + "\n")
    if as_json:
        print(json.dumps(d))
    else:
        for a, terms in zip(rep.schedule, d["selected_terms"]):
            print(f"a_N = {a:<10.6g} -> {', '.join(terms)}")
        print(f"smallest a_N recovering {cfg.oracle}: {rep.a_n:.6g}" if rep.found else "oracle support: not found")
    return 0


COMMANDS = {
    "simulate": cmd_simulate,
    "build-library": cmd_build_library,
    "discover": cmd_discover,
    "verify-equivalence": cmd_verify_equivalence,
    "scan-an": cmd_scan_an,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
        return COMMANDS[args.command](cfg, args.json)
    except (SelectionError, ValueError, KeyError, OSError) as exc:
        print(f"pdesel {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
