"""Batch command-line front end.

Subcommands: generate | profile | certify | simulate | threshold |
er-predict | sweep. Every run produces a machine-readable JSON report
(stdout, or report.json under --out) plus CSV sidecars for plotting.
Reports are byte-identical across reruns with the same config except for
the timestamp, which lives only in the provenance block. Exit status: 0
pass/success, 1 fail verdict, 2 error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .certify import (
    Schedule,
    amplification_run,
    max_alpha_regular,
    min_ramanujan_degree,
    preset_regular_schedule,
    theorem_condition,
)
from .dynamics import classify_equilibrium, daido, flow, random_phases
from .errors import InputError, KurasyncError
from .graphs import (
    degree_extrema,
    gen_erdos_renyi,
    gen_named,
    gen_random_regular,
    read_edge_list,
    write_edge_list,
)
from .randomgraphs import er_prediction, gamma_roots
from .spectral import (
    ExpanderProfile,
    check_mixing_bounds,
    degree_bounds_from_profile,
    expander_profile,
)

SYNC_RHO = 1.0 - 1e-6
NAMED_FAMILIES = ("cycle", "path", "complete", "star", "two_cliques_bridged")


@dataclass(frozen=True)
class ReportBundle:
    report: dict
    exit_status: int
    files: tuple = ()


def build_parser():
    top = argparse.ArgumentParser(
        prog="kurasync",
        description="Spectral certificates and simulations of synchronization on graphs.",
    )
    top.add_argument("--version", action="version", version=f"kurasync {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, graph=False):
        p.add_argument("--config", help="JSON file of option defaults; flags win")
        p.add_argument("--out", help="output directory (created if needed)")
        p.add_argument("--seed", type=int, help="base seed for anything stochastic")
        p.add_argument("--tol", type=float, help="command-specific tolerance")
        if graph:
            p.add_argument("--graph", help="edge-list file ('n m' header, one 'u v' line per edge)")
            p.add_argument(
                "--gen",
                help=(
                    "generator spec: cycle:N path:N complete:N star:N "
                    "two_cliques_bridged:N er:N,P regular:N,D"
                ),
            )

    p = sub.add_parser("generate", help="generate a graph and write its edge list")
    common(p, graph=True)

    p = sub.add_parser("profile", help="measure the expander profile of a graph")
    common(p, graph=True)
    p.add_argument("--trials", type=int, help="random mixing-bound checks to run (default 0)")
    p.add_argument("--d-ref", type=float, help="reference degree override (default 2m/n)")

    p = sub.add_parser("certify", help="run the synchronization certificate")
    common(p, graph=True)
    p.add_argument("--profile", help="load a saved profile JSON instead of measuring a graph")
    p.add_argument("--schedule", help="JSON amplification schedule path")
    p.add_argument("--mode", choices=["paper-proof", "numeric"], help="amplification mode")

    p = sub.add_parser("simulate", help="integrate the gradient flow from random states")
    common(p, graph=True)
    p.add_argument("--runs", type=int, help="number of random initial states (default 1)")
    p.add_argument("--workers", type=int, help="worker threads (default 1)")
    p.add_argument("--step-cap", type=int, help="max accepted steps per run")
    p.add_argument("--classify", action="store_true", default=None,
                   help="classify the final state of each run (dense Hessian)")

    p = sub.add_parser("threshold", help="largest certified alpha for regular-shape profiles")
    common(p)
    p.add_argument("--schedule", help="JSON amplification schedule path (default: built-in preset)")
    p.add_argument("--mode", choices=["paper-proof", "numeric"], help="amplification mode")
    p.add_argument("--lo", type=float, help="bracket lower end (default 0.001)")
    p.add_argument("--hi", type=float, help="bracket upper end (default 0.25)")

    p = sub.add_parser("er-predict", help="predicted profile of a random graph near the threshold")
    common(p)
    p.add_argument("--n", type=int, help="number of vertices")
    p.add_argument("--gamma", type=float, help="density parameter, p = gamma log n / n")
    p.add_argument("--eps", type=float, help="slack of the certified window")

    p = sub.add_parser("sweep", help="parameter sweeps emitting CSV tables")
    common(p, graph=False)
    p.add_argument("--kind", choices=["gamma-roots", "alpha-condition", "er-sample"])
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--workers", type=int)
    return top


def _merge_config(args):
    """Start from the config file (if any), let explicit flags win."""
    cfg = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise InputError("config file must hold a JSON object")
        cfg.update(loaded)
    for key, value in vars(args).items():
        if key == "config":
            continue
        if value is not None:
            cfg[key] = value
    return cfg


def _require(cfg, key, why):
    if cfg.get(key) is None:
        raise InputError(f"--{key.replace('_', '-')} is required {why}")
    return cfg[key]


def _parse_gen_spec(spec, seed):
    name, _, rest = spec.partition(":")
    if name in NAMED_FAMILIES:
        try:
            n = int(rest)
        except ValueError:
            raise InputError(f"generator {name} needs an integer size, got {rest!r}")
        return gen_named(name, n)
    if name == "er":
        parts = rest.split(",")
        if len(parts) != 2:
            raise InputError(f"er spec must be er:N,P, got {spec!r}")
        if seed is None:
            raise InputError("--seed is required for er generation")
        return gen_erdos_renyi(int(parts[0]), float(parts[1]), seed)
    if name == "regular":
        parts = rest.split(",")
        if len(parts) != 2:
            raise InputError(f"regular spec must be regular:N,D, got {spec!r}")
        if seed is None:
            raise InputError("--seed is required for regular generation")
        return gen_random_regular(int(parts[0]), int(parts[1]), seed)
    raise InputError(f"unknown generator {name!r}")


def _load_graph(cfg):
    path, spec = cfg.get("graph"), cfg.get("gen")
    if (path is None) == (spec is None):
        raise InputError("exactly one graph source is required (--graph or --gen)")
    if path is not None:
        return read_edge_list(path), {"source": "file", "path": str(path)}
    g = _parse_gen_spec(spec, cfg.get("seed"))
    return g, {"source": "generator", "spec": spec}


def _graph_summary(g):
    d_min, d_max = degree_extrema(g)
    return {"n": g.n, "m": g.m, "d_min": d_min, "d_max": d_max}


def _config_echo(cfg):
    return {k: v for k, v in sorted(cfg.items()) if k not in ("command", "out") and v is not None}


def _provenance(cfg):
    return {
        "tool": "kurasync",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "seed": cfg.get("seed"),
    }


def _cmd_generate(cfg, outdir):
    g, src = _load_graph(cfg)
    files = []
    if outdir is not None:
        path = outdir / "graph.txt"
        write_edge_list(g, path)
        files.append(str(path))
    report = {"graph": _graph_summary(g) | src}
    return report, 0, files


def _measure_profile(g, cfg):
    tol = cfg.get("tol")
    kwargs = {}
    if tol is not None:
        kwargs["tol"] = tol
    if cfg.get("d_ref") is not None:
        kwargs["d_ref"] = cfg["d_ref"]
    return expander_profile(g, **kwargs)


def _cmd_profile(cfg, outdir):
    g, src = _load_graph(cfg)
    prof = _measure_profile(g, cfg)
    lo, hi = degree_bounds_from_profile(prof)
    report = {
        "graph": _graph_summary(g) | src,
        "profile": prof.to_json_dict(),
        "degree_bounds_implied": {"lower": lo, "upper": hi},
    }
    status = 0
    if cfg.get("trials"):
        seed = _require(cfg, "seed", "when --trials is set")
        mix = check_mixing_bounds(g, prof, trials=cfg["trials"], seed=seed)
        report["mixing"] = mix.to_json_dict()
        status = 0 if mix.passed else 1
    files = []
    if outdir is not None:
        path = outdir / "profile.json"
        prof.save(path)
        files.append(str(path))
    return report, status, files


def _cmd_certify(cfg, outdir):
    sources = [s for s in (cfg.get("graph"), cfg.get("gen"), cfg.get("profile")) if s is not None]
    if len(sources) != 1:
        raise InputError("exactly one of --graph, --gen, --profile is required")
    if cfg.get("profile") is not None:
        prof = ExpanderProfile.load(cfg["profile"])
        report = {"profile": prof.to_json_dict(), "profile_source": str(cfg["profile"])}
    else:
        g, src = _load_graph(cfg)
        prof = _measure_profile(g, cfg)
        report = {"graph": _graph_summary(g) | src, "profile": prof.to_json_dict()}
    mode = cfg.get("mode") or "paper-proof"
    schedule = Schedule.load(cfg["schedule"]) if cfg.get("schedule") else None
    if mode == "numeric" and schedule is None:
        raise InputError("--mode numeric needs --schedule")
    closed = theorem_condition(prof)
    trace = amplification_run(prof, schedule, mode=mode.replace("-", "_"))
    report["closed_form"] = closed.to_json_dict()
    report["amplification"] = trace.to_json_dict()
    report["verdict"] = trace.verdict
    files = []
    if outdir is not None:
        path = outdir / "trace.csv"
        trace.to_csv(path)
        files.append(str(path))
    return report, 0 if trace.verdict == "pass" else 1, files


def _simulate_one(g, seed, grad_tol, step_cap, classify):
    theta0 = random_phases(g.n, seed)
    kwargs = {}
    if grad_tol is not None:
        kwargs["grad_tol"] = grad_tol
    if step_cap is not None:
        kwargs["step_cap"] = step_cap
    res = flow(g, theta0, **kwargs)
    rho1 = abs(daido(res.final))
    row = {
        "seed": seed,
        "steps": res.steps,
        "terminated": res.terminated,
        "energy_final": float(res.energies[-1]),
        "grad_norm_final": float(res.grad_norms[-1]),
        "rho1_final": rho1,
        "synchronized": bool(rho1 > SYNC_RHO),
    }
    if classify:
        row["classification"] = classify_equilibrium(g, res.final).classification
    return row, res


def _cmd_simulate(cfg, outdir):
    g, src = _load_graph(cfg)
    seed = _require(cfg, "seed", "for random initial states")
    runs = cfg.get("runs") or 1
    if runs < 1:
        raise InputError(f"--runs must be positive, got {runs}")
    workers = cfg.get("workers") or 1
    grad_tol, step_cap = cfg.get("tol"), cfg.get("step_cap")
    classify = bool(cfg.get("classify"))
    seeds = [seed + i for i in range(runs)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(
                lambda s: _simulate_one(g, s, grad_tol, step_cap, classify), seeds))
    else:
        results = [_simulate_one(g, s, grad_tol, step_cap, classify) for s in seeds]
    # merge in seed order regardless of completion order
    results.sort(key=lambda pair: pair[0]["seed"])
    rows = [row for row, _ in results]
    sync_fraction = sum(r["synchronized"] for r in rows) / runs
    report = {
        "graph": _graph_summary(g) | src,
        "runs": rows,
        "sync_fraction": sync_fraction,
        "sync_criterion": f"rho1 > {SYNC_RHO!r}",
    }
    files = []
    if outdir is not None:
        flow_path = outdir / "flow.csv"
        results[0][1].to_csv(flow_path)
        files.append(str(flow_path))
        runs_path = outdir / "runs.csv"
        with open(runs_path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            cols = list(rows[0].keys())
            w.writerow(cols)
            for r in rows:
                w.writerow([r[c] for c in cols])
        files.append(str(runs_path))
    return report, 0, files


def _cmd_threshold(cfg, outdir):
    mode = cfg.get("mode") or ("numeric" if cfg.get("schedule") else None)
    if cfg.get("schedule"):
        schedule = Schedule.load(cfg["schedule"])
        schedule_desc = str(cfg["schedule"])
    elif mode == "paper-proof":
        schedule = None
        schedule_desc = "auto"
    else:
        schedule = preset_regular_schedule()
        schedule_desc = "preset"
    lo = cfg.get("lo") if cfg.get("lo") is not None else 0.001
    hi = cfg.get("hi") if cfg.get("hi") is not None else 0.25
    tol = cfg.get("tol") if cfg.get("tol") is not None else 1e-5
    value = max_alpha_regular(schedule, lo, hi, tol=tol)
    report = {
        "max_alpha": value,
        "bracket": {"lo": lo, "hi": hi, "tol": tol},
        "schedule": schedule_desc,
        "mode": "paper-proof" if schedule is None else "numeric",
        "min_ramanujan_degree": min_ramanujan_degree(value),
    }
    return report, 0, []


def _cmd_er_predict(cfg, outdir):
    n = _require(cfg, "n", "for a prediction")
    gamma = _require(cfg, "gamma", "for a prediction")
    eps = _require(cfg, "eps", "for a prediction")
    pred = er_prediction(n, gamma, eps)
    report = {"prediction": pred.to_json_dict()}
    status = 0 if pred.alpha_pred <= 0.2 else 1
    return report, status, []


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _sweep_gamma_roots(cfg, outdir):
    lo = cfg.get("lo") if cfg.get("lo") is not None else 1.001
    hi = cfg.get("hi") if cfg.get("hi") is not None else 10.0
    points = cfg.get("points") or 50
    grid = np.geomspace(lo, hi, points)
    rows = []
    for gamma in grid:
        cm, cp = gamma_roots(float(gamma))
        rows.append((float(gamma), cm, cp))
    files = []
    if outdir is not None:
        path = outdir / "sweep.csv"
        _write_csv(path, ["gamma", "c_minus", "c_plus"], rows)
        files.append(str(path))
    report = {
        "kind": "gamma-roots",
        "points": points,
        "range": [lo, hi],
        "first": rows[0],
        "last": rows[-1],
    }
    return report, 0, files


def _sweep_alpha_condition(cfg, outdir):
    lo = cfg.get("lo") if cfg.get("lo") is not None else 0.001
    hi = cfg.get("hi") if cfg.get("hi") is not None else 0.2
    points = cfg.get("points") or 50
    grid = np.linspace(lo, hi, points)
    rows = []
    n_pass = 0
    for alpha in grid:
        a = float(alpha)
        prof = ExpanderProfile(n=1, d_ref=1.0, alpha=a, c_minus=-a, c_plus=a)
        res = theorem_condition(prof)
        n_pass += res.verdict == "pass"
        rows.append((a, res.condition1, res.condition2, res.verdict))
    files = []
    if outdir is not None:
        path = outdir / "sweep.csv"
        _write_csv(path, ["alpha", "condition1", "condition2", "verdict"], rows)
        files.append(str(path))
    report = {"kind": "alpha-condition", "points": points, "range": [lo, hi], "passes": n_pass}
    return report, 0, files


def _sweep_er_sample(cfg, outdir):
    n = _require(cfg, "n", "for er sampling")
    gamma = _require(cfg, "gamma", "for er sampling")
    eps = _require(cfg, "eps", "for er sampling")
    seed = _require(cfg, "seed", "for er sampling")
    samples = cfg.get("samples") or 10
    workers = cfg.get("workers") or 1
    pred = er_prediction(n, gamma, eps)

    def one(s):
        g = gen_erdos_renyi(n, pred.p, s)
        prof = expander_profile(g, d_ref=pred.d_ref)
        d_min, d_max = degree_extrema(g)
        return (s, prof.alpha, prof.c_minus, prof.c_plus, d_min, d_max)

    seeds = [seed + i for i in range(samples)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, seeds))
    else:
        rows = [one(s) for s in seeds]
    rows.sort(key=lambda r: r[0])
    inside = sum(
        1 for r in rows
        if pred.c_minus_eps - 1e-12 <= r[2] and r[3] <= pred.c_plus_eps + 1e-12
    )
    files = []
    if outdir is not None:
        path = outdir / "sweep.csv"
        _write_csv(
            path,
            ["seed", "measured_alpha", "measured_c_minus", "measured_c_plus", "d_min", "d_max"],
            rows,
        )
        files.append(str(path))
    report = {
        "kind": "er-sample",
        "samples": samples,
        "prediction": pred.to_json_dict(),
        "profiles_inside_certified_window": inside,
        "mean_measured_alpha": float(np.mean([r[1] for r in rows])),
    }
    return report, 0, files


def _cmd_sweep(cfg, outdir):
    kind = _require(cfg, "kind", "to choose a sweep")
    if kind == "gamma-roots":
        return _sweep_gamma_roots(cfg, outdir)
    if kind == "alpha-condition":
        return _sweep_alpha_condition(cfg, outdir)
    if kind == "er-sample":
        return _sweep_er_sample(cfg, outdir)
    raise InputError(f"unknown sweep kind {kind!r}")


_DISPATCH = {
    "generate": _cmd_generate,
    "profile": _cmd_profile,
    "certify": _cmd_certify,
    "simulate": _cmd_simulate,
    "threshold": _cmd_threshold,
    "er-predict": _cmd_er_predict,
    "sweep": _cmd_sweep,
}


def emit_plot_data(obj, path):
    """Write any trace-like object (amplification trace, flow result, or a
    (header, rows) table) to CSV for external plotting."""
    if hasattr(obj, "to_csv"):
        obj.to_csv(path)
        return path
    try:
        header, rows = obj
    except (TypeError, ValueError):
        raise InputError(f"cannot emit {type(obj).__name__} as CSV")
    _write_csv(path, header, rows)
    return path


def run(argv=None):
    """Parse arguments, dispatch, write outputs. Returns a ReportBundle."""
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _merge_config(args)
    outdir = None
    if cfg.get("out"):
        outdir = Path(cfg["out"])
        outdir.mkdir(parents=True, exist_ok=True)
    body, status, files = _DISPATCH[cfg["command"]](cfg, outdir)
    report = {
        "command": cfg["command"],
        "config": _config_echo(cfg),
        "provenance": _provenance(cfg),
    }
    report.update(body)
    text = json.dumps(report, indent=2, sort_keys=True)
    if outdir is not None:
        path = outdir / "report.json"
        path.write_text(text + "\n", encoding="utf-8")
        files = [str(path)] + list(files)
    return ReportBundle(report=report, exit_status=status, files=tuple(files))


def main():
    try:
        bundle = run()
    except KurasyncError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2)
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        raise SystemExit(2)
    if not bundle.files:
        print(json.dumps(bundle.report, indent=2, sort_keys=True))
    else:
        for f in bundle.files:
            print(f, file=sys.stderr)
    raise SystemExit(bundle.exit_status)


if __name__ == "__main__":
    main()
