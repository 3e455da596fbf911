"""Command-line surface.

Subcommands: norm (evaluate a norm on a field file), evolve (heat/oseen flow
over a time list with delimited + figure output), solve (Picard/regularized
run from a config file), generate (named constructions to field files),
verify (run a scenario and emit CSV/JSON/SVG), catalog (list scenarios).

Exit codes: 0 pass, 1 fail, 2 not-applicable, 3 error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .config import load_config, parse_value
from .constructions import (
    BubbleTrainSpec,
    gen_bubble_train,
    gen_divfree_random,
    gen_strict_inclusion,
    sample_delta_train,
)
from .grid import Exponent, GridField, GridSpec
from .norms import NormSpec, amalgam_norm, lebesgue_norm
from .report import emit_report, exit_code
from .scenarios import catalog_rows, gaussian_bump, run_scenario
from .serialize import read_field, write_field, write_norm_csv
from .solver import RegularizedConfig, SolverConfig, picard_solve, regularized_solve
from .spectral import heat_evolve, oseen_apply


def _exp(text):
    return Exponent.parse(text).value


def _grid_from(tree: dict) -> GridSpec:
    g = tree.get("grid", {})
    return GridSpec.centered(int(g.get("d", 3)), int(g.get("side", 3)), int(g.get("per_unit", 16)))


def cmd_norm(args) -> int:
    field = read_field(args.field)
    if args.flavor == "lebesgue":
        value = lebesgue_norm(field, _exp(args.p))
        label = f"L^{args.p}"
    else:
        value = amalgam_norm(field, _exp(args.p), _exp(args.q))
        label = NormSpec("EPQ", (_exp(args.p), _exp(args.q))).label()
    print(f"{label} = {value!r}")
    if args.out:
        write_norm_csv(args.out, [(0.0, value)], NormSpec("EPQ", (_exp(args.p), _exp(args.q))))
    return 0


def cmd_evolve(args) -> int:
    field = read_field(args.field)
    ts = [float(t) for t in args.t.split(",")]
    p, q = _exp(args.p), _exp(args.q)
    spec = NormSpec("EPQ", (p, q))
    rows = []
    os.makedirs(args.out_dir, exist_ok=True)
    for t in ts:
        if args.kind == "heat":
            out = heat_evolve(field, t, h=args.h)
        else:
            out = oseen_apply(field, t)
        rows.append((t, amalgam_norm(out, p, q)))
        if args.save_fields:
            write_field(os.path.join(args.out_dir, f"{args.prefix}_t{t:g}.fld"), out)
    csv_path = os.path.join(args.out_dir, f"{args.prefix}_norms.csv")
    write_norm_csv(csv_path, rows, spec)
    print(f"wrote {csv_path}")
    if len(rows) > 1 and all(t > 0 and v > 0 for t, v in rows):
        import matplotlib

        matplotlib.use("Agg", force=False)
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.loglog([t for t, _ in rows], [v for _, v in rows], "o-")
        ax.set_xlabel("t")
        ax.set_ylabel(spec.label())
        fig.tight_layout()
        svg = os.path.join(args.out_dir, f"{args.prefix}_norms.svg")
        fig.savefig(svg)
        plt.close(fig)
        print(f"wrote {svg}")
    return 0


def _build_data(tree: dict, grid: GridSpec) -> GridField:
    d = tree.get("data", {})
    kind = d.get("kind", "divfree-random")
    if kind == "divfree-random":
        return gen_divfree_random(
            int(d.get("seed", 0)),
            grid,
            float(d.get("amplitude", 0.1)),
            norm_p=float(d.get("norm_p", 3)),
            norm_q=float(d.get("norm_q", 2)),
        )
    if kind == "field-file":
        return read_field(d["path"])
    raise ValueError(f"unknown data kind {kind!r}")


def cmd_solve(args) -> int:
    tree = load_config(args.config)
    grid = _grid_from(tree)
    u0 = _build_data(tree, grid)
    s = tree.get("solver", {})
    mode = tree.get("mode", "picard")
    os.makedirs(args.out_dir, exist_ok=True)
    if mode == "picard":
        cfg = SolverConfig(
            T=float(s.get("T", 0.25)),
            n_steps=int(s.get("n_steps", 10)),
            picard_cap=int(s.get("cap", 14)),
            contraction_tol=float(s.get("tol", 1e-9)),
            regime=str(s.get("regime", "SUBCRITICAL")),
            r=float(s.get("r", 6)),
            q=float(s.get("q", 2)),
        )
        u, trace = picard_solve(u0, cfg)
        out = {
            "mode": mode,
            "config": tree,
            "trace": {
                "iterate_norms": trace.iterate_norms,
                "diff_norms": trace.diff_norms,
                "contraction_ratios": trace.contraction_ratios,
                "converged": trace.converged,
                "iterations": trace.iterations,
                "final_residual": trace.final_residual,
                "norm": trace.norm_label,
            },
            "final_norms": {
                "sup_regime_norm": trace.iterate_norms[-1],
                "data_norm": trace.iterate_norms[0],
            },
        }
    elif mode == "regularized":
        r = tree.get("reg", {})
        res = regularized_solve(
            u0,
            RegularizedConfig(float(r.get("eps", 0.25))),
            T=float(s.get("T", 1e-3)),
            q=float(s.get("q", 1.5)),
            n_steps=int(s.get("n_steps", 6)),
            tol=float(s.get("tol", 1e-8)),
        )
        out = {
            "mode": mode,
            "config": tree,
            "trace": {
                "iterate_norms": res.trace.iterate_norms,
                "diff_norms": res.trace.diff_norms,
                "converged": res.trace.converged,
                "iterations": res.trace.iterations,
                "final_residual": res.trace.final_residual,
                "norm": res.trace.norm_label,
            },
            "final_norms": {
                "local_energy": res.le_norm,
                "caloric_local_energy": res.caloric_le_norm,
                "C0": res.C0,
            },
            "admissible_window": res.admissible_window,
            "within_window": res.within_window,
        }
    else:
        raise ValueError(f"unknown mode {mode!r}")
    path = os.path.join(args.out_dir, "solve_report.json")
    with open(path, "w") as fh:
        json.dump(out, fh, indent=1)
    print(f"wrote {path}")
    converged = out["trace"]["converged"]
    print("converged" if converged else "no contraction (data too large for the regime)")
    return 0 if converged else 1


def cmd_generate(args) -> int:
    params = {}
    for item in args.set or []:
        key, _, value = item.partition("=")
        params[key.strip()] = parse_value(value)
    name = args.name
    if name == "bubble-train":
        d = int(params.get("d", 1))
        K = int(params.get("K", 6))
        r = float(params.get("r", 1))
        coeffs = params.get("coeffs", [1.0] * K)
        if not isinstance(coeffs, list):
            coeffs = [coeffs] * K
        from .constructions import default_bubble_grid

        grid = default_bubble_grid(d, K)
        field = gen_bubble_train(BubbleTrainSpec(d, r, K, tuple(coeffs)), grid)
    elif name == "divfree-random":
        grid = GridSpec.centered(int(params.get("d", 3)), int(params.get("side", 3)), int(params.get("per_unit", 16)))
        field = gen_divfree_random(int(params.get("seed", 0)), grid, float(params.get("amplitude", 0.1)))
    elif name == "strict-inclusion":
        case = str(params.get("case", "P_GT_Q"))
        spec, norms = gen_strict_inclusion(
            case, float(params.get("p", 4)), float(params.get("q", 2)),
            int(params.get("d", 1)), int(params.get("box_half", 8)),
        )
        grid = GridSpec.centered(int(params.get("d", 1)), 2 * int(params.get("box_half", 8)) + 2, int(params.get("per_unit", 64)))
        field = sample_delta_train(spec, grid)
        print(json.dumps(norms))
    elif name == "gaussian-bump":
        grid = GridSpec.centered(int(params.get("d", 1)), int(params.get("side", 4)), int(params.get("per_unit", 64)))
        field = gaussian_bump(grid, float(params.get("sigma", 0.25)))
    else:
        raise ValueError(f"unknown construction {name!r}")
    write_field(args.out, field)
    print(f"wrote {args.out} ({field!r})")
    return 0


def cmd_verify(args) -> int:
    overrides = {}
    for item in args.set or []:
        key, _, value = item.partition("=")
        overrides[key.strip()] = parse_value(value)
    if args.config:
        overrides.update(load_config(args.config))
    report = run_scenario(args.scenario, overrides or None, seed=args.seed)
    paths = emit_report([report], args.out_dir, basename=args.scenario)
    print(f"{report.scenario}: {report.verdict}")
    if report.notes:
        print(f"  note: {report.notes}")
    for path in paths:
        print(f"  wrote {path}")
    return exit_code([report])


def cmd_catalog(args) -> int:
    width = max(len(sid) for sid, _, _ in catalog_rows())
    for sid, desc, pred in catalog_rows():
        print(f"{sid:<{width}}  {desc}")
        if args.verbose:
            print(f"{'':<{width}}    checks: {pred}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="amalgam", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="evaluate a norm on a field file")
    p.add_argument("--field", required=True)
    p.add_argument("--flavor", choices=["epq", "lebesgue"], default="epq")
    p.add_argument("--p", default="2")
    p.add_argument("--q", default="2")
    p.add_argument("--out", default=None, help="optional CSV path")
    p.set_defaults(fn=cmd_norm)

    p = sub.add_parser("evolve", help="heat/oseen evolution over a time list")
    p.add_argument("--field", required=True)
    p.add_argument("--kind", choices=["heat", "oseen"], default="heat")
    p.add_argument("--t", required=True, help="comma-separated times")
    p.add_argument("--h", type=int, default=0, choices=[0, 1])
    p.add_argument("--p", default="2")
    p.add_argument("--q", default="2")
    p.add_argument("--out-dir", default="out")
    p.add_argument("--prefix", default="evolve")
    p.add_argument("--save-fields", action="store_true")
    p.set_defaults(fn=cmd_evolve)

    p = sub.add_parser("solve", help="Picard or regularized solve from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", default="out")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("generate", help="emit a named construction as a field file")
    p.add_argument("name", help="bubble-train | divfree-random | strict-inclusion | gaussian-bump")
    p.add_argument("--out", required=True)
    p.add_argument("--set", action="append", metavar="key=value")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("verify", help="run a verification scenario and emit reports")
    p.add_argument("scenario")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--set", action="append", metavar="key=value")
    p.add_argument("--config", default=None)
    p.add_argument("--out-dir", default="out")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("catalog", help="list scenarios")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(fn=cmd_catalog)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
