"""Command-line front end: run an analysis job from a JSON config and write a JSON report.

    coupled-entropy analyze --config job.json --out report.json --emit-csv entropy diameters
    coupled-entropy entropy --config job.json
    coupled-entropy matrix --matrix "[[1,1],[1,0]]"
    coupled-entropy kasner --depth 12 --seed 7

Exit status is 0 on success, 2 for a bad config and 3 when the report
carries an analysis error.
"""
import argparse
import json
import math
import platform
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .coupled import entropy_verdict, infer_matrix, verify, word_count_constant
from .digraph import full_cycle, graph_of, strongly_connected_components
from .errors import AnalysisError, ConfigError
from .onedmap import CIRCLE, BUILTINS, Arc, Partition, make_builtin, piecewise_linear
from .semiconj import DEFAULT_CAP, enumerate_cylinders, preimage_count, singleton_check, write_series_csv
from .subshift import count_words
from .trans_matrix import is_irreducible, is_primitive, spectral_radius, validate_transition

SCHEMA_VERSION = "1.0"
SERIES = ("entropy", "diameters", "counts")
EXIT_OK, EXIT_CONFIG, EXIT_ANALYSIS = 0, 2, 3

DEFAULT_OPTIONS = {
    "depth": 10,
    "n_max": None,
    "tol": 1e-9,
    "enumeration_cap": DEFAULT_CAP,
    "emit_csv": [],
    "output_path": None,
    "preimage_samples": 0,
    "seed": 0,
}


def load_config(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc


def _check_int(opts, key, low):
    v = opts[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < low:
        raise ConfigError(f"options.{key} must be an integer >= {low}, got {v!r}")


def normalize_config(raw):
    """Validate a raw config dict and fill in defaults. The result is echoed in the report."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - {"map", "partition", "matrix", "options"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    m = raw.get("map")
    if isinstance(m, str):
        m = {"builtin": m}
    if not isinstance(m, dict) or len(set(m) & {"builtin", "piecewise_linear"}) != 1:
        raise ConfigError("map must name a builtin or give a piecewise_linear spec")
    if "builtin" in m:
        if m["builtin"] not in BUILTINS:
            raise ConfigError(f"unknown builtin {m['builtin']!r}; choose from {', '.join(BUILTINS)}")
        m = {"builtin": m["builtin"], "params": dict(m.get("params") or {})}
    else:
        spec = m["piecewise_linear"]
        if not isinstance(spec, dict) or not {"breakpoints", "values"} <= set(spec):
            raise ConfigError("piecewise_linear needs breakpoints and values")
        m = {
            "piecewise_linear": {
                "domain": spec.get("domain", "interval"),
                "breakpoints": [float(x) for x in spec["breakpoints"]],
                "values": [float(x) for x in spec["values"]],
            }
        }

    part = raw.get("partition", "canonical")
    if part != "canonical":
        if not isinstance(part, list) or not all(isinstance(q, list) and len(q) == 2 for q in part):
            raise ConfigError('partition must be "canonical" or a list of [start, end] pairs')
        part = [[float(a), float(b)] for a, b in part]

    mat = raw.get("matrix", "infer")
    if mat != "infer" and not isinstance(mat, list):
        raise ConfigError('matrix must be "infer" or a list of rows')

    opts = dict(DEFAULT_OPTIONS)
    given = raw.get("options", {}) or {}
    if not isinstance(given, dict):
        raise ConfigError("options must be an object")
    bad = set(given) - set(DEFAULT_OPTIONS)
    if bad:
        raise ConfigError(f"unknown options: {sorted(bad)}")
    opts.update(given)
    if opts["n_max"] is None:
        opts["n_max"] = opts["depth"]
    _check_int(opts, "depth", 2)
    _check_int(opts, "n_max", 2)
    _check_int(opts, "enumeration_cap", 1000)
    _check_int(opts, "seed", 0)
    if not isinstance(opts["tol"], (int, float)) or isinstance(opts["tol"], bool) or not opts["tol"] > 0:
        raise ConfigError(f"options.tol must be positive, got {opts['tol']!r}")
    opts["tol"] = float(opts["tol"])
    series = opts["emit_csv"]
    if isinstance(series, str):
        series = [series]
    if not isinstance(series, list) or any(s not in SERIES for s in series):
        raise ConfigError(f"options.emit_csv must list series from {SERIES}")
    opts["emit_csv"] = list(series)
    ps = opts["preimage_samples"]
    if isinstance(ps, bool) or not (isinstance(ps, int) and ps >= 0 or isinstance(ps, list)):
        raise ConfigError("options.preimage_samples must be a count or a list of points")
    return {"map": m, "partition": part, "matrix": mat, "options": opts}


def build_system(cfg):
    """Map, partition and (possibly None) matrix described by a normalized config."""
    m = cfg["map"]
    if "builtin" in m:
        T, P, A = make_builtin(m["builtin"], m["params"])
    else:
        spec = m["piecewise_linear"]
        T = piecewise_linear(spec["domain"], spec["breakpoints"], spec["values"])
        P = Partition(T.domain, tuple(b.support for b in T.branches))
        A = None
    if cfg["partition"] != "canonical":
        d = T.domain
        pieces = []
        for a, b in cfg["partition"]:
            length = (b - a) % d.length if d.is_circle else b - a
            if d.is_circle and length == 0.0 and b != a:
                length = d.length
            pieces.append(Arc(a, length))
        P = Partition(d, tuple(pieces))
        A = None
    if cfg["matrix"] != "infer":
        A = validate_transition(cfg["matrix"])
    return T, P, A


def _versions():
    return {
        "package": __version__,
        "backend": kernels.BACKEND,
        "python": platform.python_version(),
        "numpy": np.__version__,
    }


def _error(stage, exc):
    return {"stage": stage, "type": type(exc).__name__, "message": str(exc)}


def matrix_summary(A, n_max):
    res = spectral_radius(A)
    prim, k = is_primitive(A)
    walk = full_cycle(graph_of(A))
    return {
        "matrix": A.tolist(),
        "spectral": {"lambda": res.lam, "log_lambda": math.log(res.lam), "iterations": res.iterations},
        "matrix_flags": {
            "irreducible": is_irreducible(A),
            "primitive": prim,
            "primitive_exponent": k,
            "max_row_sum": A.max_row_sum,
            "full_cycle": None if walk is None else list(walk),
        },
        "components": [sorted(c) for c in strongly_connected_components(graph_of(A))],
        "word_counts": [[n, count_words(A, n)] for n in range(1, n_max + 1)],
    }


class _Clock:
    def __init__(self):
        self.t0 = time.perf_counter()
        self.stages = {}

    def mark(self, name, since):
        self.stages[name] = round(time.perf_counter() - since, 6)

    def block(self):
        out = dict(self.stages)
        out["total_s"] = round(time.perf_counter() - self.t0, 6)
        return out


def _cylinder_tables(T, P, A, opts):
    levels, _ = enumerate_cylinders(T, P, opts["n_max"], None, opts["tol"], opts["enumeration_cap"])
    rows = []
    for n, level in enumerate(levels, start=1):
        rows.append({"n": n, "count": len(level), "estimate": math.log(len(level)) / n if level else None})
    return rows


def _preimage_points(T, opts):
    ps = opts["preimage_samples"]
    if isinstance(ps, list):
        return [float(y) for y in ps]
    if ps == 0:
        return []
    rng = np.random.default_rng(opts["seed"])
    return [float(y) for y in rng.uniform(0.0, T.domain.length, ps)]


def run_analysis(config, mode="analyze"):
    """Run the pipeline for a normalized config. Returns ``(report, series)``.

    Analysis errors never propagate: they are recorded in ``report["errors"]``
    and every stage that depends on the failed one is skipped.
    """
    clock = _Clock()
    opts = config["options"]
    tol = opts["tol"]
    report = {"schema_version": SCHEMA_VERSION, "command": mode, "input": config, "errors": []}
    series = {}
    try:
        t = time.perf_counter()
        T, P, A = build_system(config)
        if config["matrix"] == "infer":
            A = infer_matrix(T, P, tol)
        report["matrix_source"] = "inferred" if config["matrix"] == "infer" else "given"
        report["matrix"] = A.tolist()
        clock.mark("setup_s", t)
    except AnalysisError as exc:
        report["errors"].append(_error("setup", exc))
        return _finish(report, clock), series

    try:
        t = time.perf_counter()
        rows = _cylinder_tables(T, P, A, opts)
        series["counts"] = [(r["n"], r["count"]) for r in rows]
        series["entropy"] = [(r["n"], r["estimate"]) for r in rows if r["estimate"] is not None]
        report["entropy"] = {"cylinder_estimates": rows}
        clock.mark("cylinders_s", t)
    except AnalysisError as exc:
        report["errors"].append(_error("cylinders", exc))
        return _finish(report, clock), series
    if mode == "entropy":
        return _finish(report, clock), series

    try:
        t = time.perf_counter()
        summary = matrix_summary(A, opts["n_max"])
        report["spectral"] = summary["spectral"]
        report["matrix_flags"] = summary["matrix_flags"]
        rep = verify(T, P, A, tol)
        ev = singleton_check(T, P, A, opts["depth"], tol, opts["enumeration_cap"])
        series["diameters"] = list(ev.diameter_table)
        rep = rep.with_singleton(ev)
        report["verification"] = rep.to_dict()
        report["singleton"] = ev.to_dict()
        verdict = entropy_verdict(A, rep, ev, tol)
        c = word_count_constant(A)
        ent = report["entropy"]
        ent.update(verdict.to_dict())
        ent["word_count_constant"] = c
        if verdict.exact is not None and c is not None:
            ent["estimate_bound_holds"] = all(
                r["estimate"] <= verdict.exact + math.log(c) / r["n"] + tol for r in ent["cylinder_estimates"] if r["estimate"] is not None
            )
        chaotic = verdict.li_yorke or verdict.devaney
        report["chaos"] = {
            "li_yorke": verdict.li_yorke,
            "devaney": verdict.devaney,
            "justifications": list(verdict.justifications) if chaotic else [],
        }
        clock.mark("verification_s", t)
    except AnalysisError as exc:
        report["errors"].append(_error("verification", exc))
        return _finish(report, clock), series

    points = _preimage_points(T, opts)
    if points:
        try:
            t = time.perf_counter()
            report["preimage_samples"] = [
                {"y": y, "count": preimage_count(T, P, A, y, opts["depth"], tol, opts["enumeration_cap"])} for y in points
            ]
            clock.mark("preimages_s", t)
        except AnalysisError as exc:
            report["errors"].append(_error("preimages", exc))
    return _finish(report, clock), series


def _finish(report, clock):
    report["versions"] = _versions()
    report["timings"] = clock.block()
    return report


def kasner_demo(depth=12, tol=1e-9, seed=0, samples=100, horizon=200):
    """Full analysis of the Kasner map plus its pair witness, preimage counts and derivative law."""
    from . import kasner

    cfg = normalize_config(
        {"map": "kasner", "options": {"depth": depth, "tol": tol, "seed": seed, "preimage_samples": samples}}
    )
    report, series = run_analysis(cfg, mode="kasner")
    if report["errors"]:
        return report, series
    t = time.perf_counter()
    demo = {}
    try:
        w = kasner.scrambled_pair_witness(horizon, tol)
        demo["witness"] = {k: w[k] for k in ("horizon", "min_distance", "max_distance", "argmin", "argmax")}
        T, P, A = kasner.kasner_system()
        demo["special_point_preimages"] = {
            name: preimage_count(T, P, A, y, depth, tol) for name, y in zip(("T1", "T2", "T3"), kasner.SPECIAL_POINTS)
        }
        grid = np.linspace(0.0, CIRCLE.length, 10000, endpoint=False)
        d = np.abs(kernels.kasner_derivative_array(grid))
        demo["derivative"] = {"grid": len(grid), "min_abs": float(d.min()), "argmin": float(grid[d.argmin()])}
    except AnalysisError as exc:
        report["errors"].append(_error("kasner_demo", exc))
    report["kasner"] = demo
    report["timings"]["kasner_demo_s"] = round(time.perf_counter() - t, 6)
    return report, series


def write_report(report, path):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)


def emit_csv(series, names, out_path):
    """Write the requested series as ``n,value`` CSV files next to the report."""
    written = []
    for name in names:
        if name not in series:
            continue
        if out_path is None:
            target = Path(f"{name}.csv")
        else:
            target = Path(out_path).with_name(f"{Path(out_path).stem}_{name}.csv")
            target.parent.mkdir(parents=True, exist_ok=True)
        write_series_csv(target, series[name])
        written.append(target.name)
    return written


def _apply_flags(cfg_raw, args):
    opts = dict(cfg_raw.get("options") or {})
    if getattr(args, "depth", None) is not None:
        opts["depth"] = args.depth
    if getattr(args, "tol", None) is not None:
        opts["tol"] = args.tol
    if getattr(args, "emit_csv", None):
        opts["emit_csv"] = args.emit_csv
    if getattr(args, "seed", None) is not None:
        opts["seed"] = args.seed
    if getattr(args, "out", None):
        opts["output_path"] = args.out
    cfg_raw = dict(cfg_raw)
    cfg_raw["options"] = opts
    return cfg_raw


def _cmd_pipeline(args):
    if not args.config:
        raise ConfigError("--config is required")
    cfg = normalize_config(_apply_flags(load_config(args.config), args))
    report, series = run_analysis(cfg, mode=args.command)
    return report, series, cfg["options"]


def _cmd_matrix(args):
    if args.matrix is not None:
        try:
            rows = json.loads(args.matrix)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--matrix is not valid JSON: {exc}") from exc
    elif args.config:
        rows = load_config(args.config).get("matrix")
    else:
        raise ConfigError("give --matrix or --config")
    if not isinstance(rows, list):
        raise ConfigError("matrix must be a list of rows")
    n_max = args.depth or 10
    if n_max < 1:
        raise ConfigError("--depth must be positive")
    opts = {"n_max": n_max, "output_path": args.out, "emit_csv": args.emit_csv or []}
    clock = _Clock()
    report = {"schema_version": SCHEMA_VERSION, "command": "matrix", "input": {"matrix": rows, "options": opts}, "errors": []}
    series = {}
    try:
        A = validate_transition(rows)
        report.update(matrix_summary(A, n_max))
        series["counts"] = [tuple(r) for r in report["word_counts"]]
        series["entropy"] = [(n, math.log(c) / n) for n, c in series["counts"]]
    except AnalysisError as exc:
        report["errors"].append(_error("matrix", exc))
    return _finish(report, clock), series, opts


def _cmd_kasner(args):
    report, series = kasner_demo(depth=args.depth or 12, tol=args.tol or 1e-9, seed=args.seed or 0)
    opts = {"output_path": args.out, "emit_csv": args.emit_csv or []}
    return report, series, opts


def build_parser():
    parser = argparse.ArgumentParser(prog="coupled-entropy", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON job description")
        p.add_argument("--out", help="report path (default: stdout)")
        p.add_argument("--emit-csv", nargs="+", choices=SERIES, metavar="NAME", help=f"series to write as CSV: {', '.join(SERIES)}")
        p.add_argument("--depth", type=int, help="cylinder depth")
        p.add_argument("--tol", type=float, help="relative tolerance")
        p.add_argument("--seed", type=int, help="seed for sampled points")

    common(sub.add_parser("analyze", help="full pipeline: matrix, verification, entropy, chaos"))
    common(sub.add_parser("entropy", help="cylinder-count entropy estimates only"))
    p = sub.add_parser("matrix", help="spectral and graph analysis of a bare matrix")
    common(p)
    p.add_argument("--matrix", help='matrix as JSON, e.g. "[[1,1],[1,0]]"')
    common(sub.add_parser("kasner", help="built-in Kasner map demo"))
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = {"analyze": _cmd_pipeline, "entropy": _cmd_pipeline, "matrix": _cmd_matrix, "kasner": _cmd_kasner}[args.command]
    try:
        report, series, opts = handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = opts.get("output_path")
    if opts.get("emit_csv"):
        report["csv_outputs"] = emit_csv(series, opts["emit_csv"], out)
    write_report(report, out)
    if report["errors"]:
        for e in report["errors"]:
            print(f"{e['stage']}: {e['type']}: {e['message']}", file=sys.stderr)
        return EXIT_ANALYSIS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
