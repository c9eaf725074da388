"""Command-line front end.

Commands: expect, fit-test, compare, pipeline, sample, simulate-data.
Exit codes: 0 success, 2 input error, 3 numerical/enumeration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from importlib import resources

import jsonschema

from . import hypergeom as hg
from .graphs import Cpdag, Dag, ExtensionCapExceeded, GraphError, skeleton
from .io import GraphFile, ParseError, align_to, parse_graph, write_graph
from .metrics import adjacency_confusion, full_report
from .pc import CiTestError
from .pipeline import PipelineConfig, run_study, single_truth_nc
from .random_graphs import RngSeed, max_edges, sample_er_cpdag, sample_er_dag
from .sem import SemConfig, simulate_from_dag, to_csv

EXIT_INPUT = 2
EXIT_NUMERICAL = 3

COMPARE_METRICS = (
    "shd",
    "adjacency_precision",
    "adjacency_recall",
    "orientation_precision",
    "orientation_recall",
    "vstructure_recovery",
)


def _load_schema(name):
    with resources.files("ncbench.schemas").joinpath(name).open() as fh:
        return json.load(fh)


def _default_seed():
    return int(os.environ.get("NCBENCH_SEED", "0"))


def _graph_arg(path, fmt, kind):
    return parse_graph(GraphFile(path, fmt, kind))


def _m_max_from_args(args):
    if args.d is not None:
        return max_edges(args.d)
    if args.m_max is not None:
        return args.m_max
    raise ParseError("one of --d or --m-max is required")


def cmd_expect(args):
    m_max = _m_max_from_args(args)
    params = hg.HyperParams(m_max, args.m_true, args.m_est)
    level = args.level
    lo_q, hi_q = (1 - level) / 2, 1 - (1 - level) / 2
    metrics = [args.metric] if args.metric else list(hg.METRICS)
    rows = []
    for metric in metrics:
        rows.append(
            {
                "metric": metric,
                "expected": hg.expected_metric(metric, params),
                "median": hg.metric_quantile(metric, 0.5, params),
                "ci_lower": hg.metric_quantile(metric, lo_q, params),
                "ci_upper": hg.metric_quantile(metric, hi_q, params),
            }
        )
    print(f"m_max={m_max} m_true={args.m_true} m_est={args.m_est} level={level}")
    print(f"{'metric':<14}{'expected':>10}{'median':>10}{'ci_lower':>10}{'ci_upper':>10}")
    for r in rows:
        print(
            f"{r['metric']:<14}{r['expected']:>10.4f}{r['median']:>10.4f}"
            f"{r['ci_lower']:>10.4f}{r['ci_upper']:>10.4f}"
        )
    if args.json:
        params_out = {
            "m_max": m_max,
            "m_true": args.m_true,
            "m_est": args.m_est,
            "level": level,
        }
        _write_json(args.json, {"schema_version": 1, "params": params_out, "rows": rows})
    return 0


def cmd_fit_test(args):
    truth = _graph_arg(args.truth, args.format, "dag")
    est = align_to(truth, _graph_arg(args.est, args.format, args.est_kind))
    conf = adjacency_confusion(truth, est)
    m_max = max_edges(truth.d)
    m_true = len(skeleton(truth))
    m_est = len(skeleton(est))
    params = hg.HyperParams(m_max, m_true, m_est)
    p = hg.skeleton_fit_test(conf.tp, params)
    print(f"m_max={m_max} m_true={m_true} m_est={m_est} tp_obs={conf.tp}")
    print(f"p = {p:.6g}")
    if args.json:
        _write_json(
            args.json,
            {
                "schema_version": 1,
                "m_max": m_max,
                "m_true": m_true,
                "m_est": m_est,
                "tp_obs": conf.tp,
                "p": p,
            },
        )
    return 0


def cmd_compare(args):
    truth = _graph_arg(args.truth, args.format, "dag")
    est = align_to(truth, _graph_arg(args.est, args.format, args.est_kind))
    report = full_report(truth, est)
    metrics = args.metrics.split(",") if args.metrics else list(COMPARE_METRICS)
    out = {
        "schema_version": 1,
        "d": report.d,
        "m_true": report.m_true,
        "m_est": report.m_est,
        "truth_kind": report.truth_kind,
        "est_kind": report.est_kind,
        "metrics": {},
    }
    for name in metrics:
        observed = report[name].value if name in report.values else None
        if observed is None:
            out["metrics"][name] = {"observed": None, "p": None}
            continue
        nc = single_truth_nc(truth, est, name, b=args.nc_reps, seed=args.seed)
        out["metrics"][name] = {
            "observed": nc["observed"],
            "nc_mean": nc["nc_mean"],
            "nc_ci": nc["nc_ci"],
            "p": nc["p"],
            "direction": nc["direction"],
            "dropped": nc["dropped"],
        }
    jsonschema.validate(out, _load_schema("compare-report.schema.json"))
    print(f"{'metric':<24}{'observed':>10}{'nc_mean':>10}{'p':>8}")
    for name, row in out["metrics"].items():
        obs = "missing" if row["observed"] is None else f"{row['observed']:.4f}"
        ncm = f"{row.get('nc_mean', float('nan')):.4f}" if row.get("nc_mean") is not None else "-"
        pstr = f"{row['p']:.3f}" if row.get("p") is not None else "-"
        print(f"{name:<24}{obs:>10}{ncm:>10}{pstr:>8}")
    if args.json:
        _write_json(args.json, out)
    return 0


def _pipeline_config_from_file(path):
    with open(path) as fh:
        raw = json.load(fh)
    schema = _load_schema("pipeline-config.schema.json")
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        msgs = "; ".join(
            f"{'/'.join(str(p) for p in e.absolute_path) or '<root>'}: {e.message}"
            for e in errors
        )
        raise ParseError(f"config schema violation: {msgs}")
    for key in ("weight_range", "variance_range", "metrics"):
        if key in raw:
            raw[key] = tuple(raw[key])
    return PipelineConfig(**raw)


def cmd_pipeline(args):
    cfg = _pipeline_config_from_file(args.config)
    if args.seed is not None:
        cfg = PipelineConfig(**{**_cfg_dict(cfg), "seed": args.seed})
    result = run_study(cfg)
    payload = result.to_dict()
    jsonschema.validate(payload, _load_schema("study-result.schema.json"))
    os.makedirs(args.out_dir, exist_ok=True)
    summary_path = os.path.join(args.out_dir, "summary.json")
    _write_json(summary_path, payload)
    csv_path = os.path.join(args.out_dir, "replications.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["replication", "m_true", "m_est", "m_nc"]
        for name in cfg.metrics:
            header += [f"algo_{name}", f"nc_{name}"]
        writer.writerow(header)
        for rep in result.replications:
            row = [
                rep.index,
                cfg.m_true,
                rep.m_est,
                len(skeleton(rep.nc)),
            ]
            for name in cfg.metrics:
                row += [_fmt(rep.algo_values[name]), _fmt(rep.nc_values[name])]
            writer.writerow(row)
    for name in cfg.metrics:
        p = result.summary[name]["p"]
        print(f"{name}: p = {'undefined' if p is None else format(p, '.3f')}")
    print(f"wrote {summary_path} and {csv_path}")
    return 0


def _cfg_dict(cfg):
    return {
        "b": cfg.b,
        "d": cfg.d,
        "m_true": cfg.m_true,
        "n": cfg.n,
        "alpha": cfg.alpha,
        "metrics": cfg.metrics,
        "nc_kind": cfg.nc_kind,
        "seed": cfg.seed,
        "weight_range": cfg.weight_range,
        "variance_range": cfg.variance_range,
        "sid_cap": cfg.sid_cap,
    }


def _fmt(v):
    return "" if v is None else repr(v)


def cmd_sample(args):
    rng = RngSeed(args.seed, args.stream)
    if args.kind == "dag":
        g = sample_er_dag(args.d, args.m, rng)
    else:
        g = sample_er_cpdag(args.d, args.m, rng)
    write_graph(g, args.out, args.format)
    print(f"wrote {args.kind} with {args.m} edges over {args.d} nodes to {args.out}")
    return 0


def cmd_simulate_data(args):
    g = _graph_arg(args.graph, args.format, "dag")
    cfg = SemConfig(n=args.n, seed=RngSeed(args.seed))
    data = simulate_from_dag(g, cfg)
    to_csv(data, g.labels, args.out)
    print(f"wrote {args.n} x {g.d} data matrix to {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ncbench",
        description="Negative-control evaluation of causal discovery outputs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expect", help="exact metric expectations under random guessing")
    p.add_argument("--d", type=int, help="node count (sets m_max = d(d-1)/2)")
    p.add_argument("--m-max", type=int, dest="m_max")
    p.add_argument("--m-true", type=int, required=True, dest="m_true")
    p.add_argument("--m-est", type=int, required=True, dest="m_est")
    p.add_argument("--metric", choices=hg.METRICS)
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--json", help="also write the table as JSON to this path")
    p.set_defaults(func=cmd_expect)

    p = sub.add_parser("fit-test", help="exact one-sided skeleton-fit test")
    p.add_argument("--truth", required=True)
    p.add_argument("--est", required=True)
    p.add_argument("--format", default="edge-list", choices=["edge-list", "adjacency-matrix"])
    p.add_argument("--est-kind", default="dag", choices=["dag", "cpdag"], dest="est_kind")
    p.add_argument("--json")
    p.set_defaults(func=cmd_fit_test)

    p = sub.add_parser("compare", help="metric report with negative-control p-values")
    p.add_argument("--truth", required=True)
    p.add_argument("--est", required=True)
    p.add_argument("--format", default="edge-list", choices=["edge-list", "adjacency-matrix"])
    p.add_argument("--est-kind", default="dag", choices=["dag", "cpdag"], dest="est_kind")
    p.add_argument("--metrics", help="comma-separated metric names")
    p.add_argument("--nc-reps", type=int, default=1000, dest="nc_reps")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("pipeline", help="config-driven negative-control study")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir", required=True, dest="out_dir")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker hint; results are identical for any value",
    )
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("sample", help="draw a seeded random DAG or CPDAG")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--kind", default="dag", choices=["dag", "cpdag"])
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--stream", type=int, default=0)
    p.add_argument("--format", default="edge-list", choices=["edge-list", "adjacency-matrix"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("simulate-data", help="linear Gaussian SEM data from a DAG file")
    p.add_argument("--graph", required=True)
    p.add_argument("--format", default="edge-list", choices=["edge-list", "adjacency-matrix"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate_data)

    return parser


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "seed") and args.seed is None and args.command in ("sample", "simulate-data", "compare"):
        args.seed = _default_seed()
    try:
        return args.func(args)
    except (ParseError, GraphError, hg.DegenerateParamsError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CiTestError, ExtensionCapExceeded, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
