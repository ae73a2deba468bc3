"""Command line interface: ``anchorclust {generate,cluster,sweep,diag}``.

Exit codes: 0 success, 2 usage error, 3 data error, 4 eigensolver did not
converge.
"""

import argparse
import json
import os
import sys

from . import synth
from .cluster import ClusterConfig, sample_anchors
from .errors import ConvergenceError, DataError, InputError
from .experiment import METHODS, run_cell, write_sweep_csv
from .files import load_points, write_labels, write_points
from .graph import build_knn_affinity, laplacian_kind
from .theory import (
    ScalingConfig,
    anchor_diagnostics,
    bandwidth_from_K,
    bounding_box_density,
    cross_cluster_edge_count,
    per_cluster_connectivity,
    recommended_K,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CONVERGENCE = 0, 2, 3, 4

_INT_PARAMS = {"arms"}


def _family_params():
    names = {}
    for fam, params in synth.DEFAULTS.items():
        for name in params:
            if name != "delta_min":
                names.setdefault(name, []).append(fam)
    return names


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _add_method_flags(p):
    p.add_argument("input", help="point CSV (f1,...,fd[,label])")
    p.add_argument("--method", choices=METHODS, default="spectral")
    p.add_argument("--k", type=int, required=True, help="number of clusters")
    p.add_argument("--kind", default="unnorm", choices=("unnorm", "rw", "sym"), help="graph Laplacian")
    p.add_argument("--C", type=float, default=2.0, help="constant in the default K = ceil(C ln size)")
    p.add_argument("--restarts", type=int, default=10, help="k-means restarts")
    p.add_argument("--eigen-tol", type=float, default=1e-8)


def build_parser():
    parser = argparse.ArgumentParser(prog="anchorclust", description="KNN spectral clustering and AnchorNN.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a synthetic labeled dataset")
    g.add_argument("--family", required=True, choices=synth.FAMILIES)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--delta-min", type=float, default=None, help="required separation (family default if omitted)")
    g.add_argument("--out", help="output CSV (stdout if omitted)")
    fam = g.add_argument_group("family parameters (defaults per family, see README)")
    for name, families in sorted(_family_params().items()):
        fam.add_argument(
            "--" + name.replace("_", "-"), dest="param_" + name, default=None,
            type=int if name in _INT_PARAMS else float, help=", ".join(families),
        )

    c = sub.add_parser("cluster", help="cluster one dataset with one seed")
    _add_method_flags(c)
    c.add_argument("--labels", action="store_true", help="last column holds ground-truth labels")
    c.add_argument("--K", type=int, default=None, help="neighbors (default from the sample size)")
    c.add_argument("--m", type=int, default=None, help="anchor count (anchornn)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True, help="output directory for labels.csv and report.json")

    s = sub.add_parser("sweep", help="grid over m and K, several seeds per cell (input must be labeled)")
    _add_method_flags(s)
    s.add_argument("--K", type=int, default=None)
    s.add_argument("--m", type=int, default=None)
    s.add_argument("--grid-K", type=_int_list, default=None)
    s.add_argument("--grid-m", type=_int_list, default=None)
    s.add_argument("--seeds", type=int, default=20, help="replicates per cell")
    s.add_argument("--seed", type=int, default=0, help="first seed; replicate i uses seed + i")
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.add_argument("--out", required=True, help="output directory")

    d = sub.add_parser("diag", help="separation, covering and connectivity diagnostics (input must be labeled)")
    d.add_argument("input")
    d.add_argument("--K", type=int, default=None, help="neighbors (default from each sample size)")
    d.add_argument("--m", type=int, default=None, help="anchor count for the anchor diagnostics")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--C", type=float, default=2.0)
    d.add_argument("--out", help="output JSON (stdout if omitted)")
    return parser


def _config(args, size, K, m):
    if K is None:
        K = recommended_K(size, ScalingConfig(C=args.C))
    return ClusterConfig(
        k=args.k, K=K, m=m, laplacian_kind=laplacian_kind(args.kind), seed=args.seed,
        eigen_tol=args.eigen_tol, kmeans_restarts=args.restarts,
    )


def cmd_generate(args):
    params = {k[len("param_"):]: v for k, v in vars(args).items() if k.startswith("param_") and v is not None}
    spec = synth.SynthSpec(args.family, args.n, args.seed, params, args.delta_min)
    points = synth.generate(spec)
    if args.out:
        write_points(args.out, points)
    else:
        write_points(sys.stdout, points)
    print(f"delta={synth.verify_separation(points)!r}", file=sys.stderr)
    return EXIT_OK


def _realized_delta(points):
    if points.has_labels and len(set(points.labels.tolist())) > 1:
        return synth.verify_separation(points)
    return None


def cmd_cluster(args):
    points = load_points(args.input, has_labels=args.labels)
    anchored = args.method == "anchornn"
    if anchored and args.m is None:
        raise InputError("--method anchornn needs --m")
    cfg = _config(args, args.m if anchored else points.n, args.K, args.m if anchored else None)
    runs = []
    report = run_cell(points, args.method, cfg, [args.seed], delta=_realized_delta(points), runs_out=runs)
    os.makedirs(args.out, exist_ok=True)
    write_labels(os.path.join(args.out, "labels.csv"), runs[0].labels)
    report.write(os.path.join(args.out, "report.json"))
    if report.mean_ari is not None:
        print(f"ari={report.mean_ari!r}")
    return EXIT_OK


def cmd_sweep(args):
    points = load_points(args.input, has_labels=True)
    anchored = args.method == "anchornn"
    if args.seeds < 1:
        raise InputError("--seeds must be >= 1")
    if args.grid_m is not None and not anchored:
        raise InputError("--grid-m applies to --method anchornn only")
    ms = args.grid_m or ([args.m] if args.m is not None else [None])
    if anchored and ms == [None]:
        raise InputError("--method anchornn needs --m or --grid-m")
    Ks = args.grid_K or [args.K]
    delta = _realized_delta(points)
    seeds = [args.seed + i for i in range(args.seeds)]
    os.makedirs(args.out, exist_ok=True)
    reports = []
    for m in ms:
        for K in Ks:
            cfg = _config(args, m if anchored else points.n, K, m if anchored else None)
            rep = run_cell(points, args.method, cfg, seeds, jobs=args.jobs, delta=delta)
            name = f"cell_m{m}_K{cfg.K}.json" if anchored else f"cell_K{cfg.K}.json"
            rep.write(os.path.join(args.out, name))
            reports.append(rep)
    write_sweep_csv(os.path.join(args.out, "sweep.csv"), reports)
    with open(os.path.join(args.out, "sweep.csv")) as fh:
        sys.stdout.write(fh.read())
    return EXIT_OK


def cmd_diag(args):
    points = load_points(args.input, has_labels=True)
    scaling = ScalingConfig(C=args.C, q_min=bounding_box_density(points), d=points.d)
    K = args.K if args.K is not None else recommended_K(points.n, scaling)
    W = build_knn_affinity(points, K)
    out = {
        "schema": 1,
        "n": points.n,
        "d": points.d,
        "delta": _realized_delta(points),
        "recommended_K": {"n": recommended_K(points.n, scaling)},
        "full": {
            "K": K,
            "bandwidth": bandwidth_from_K(K, points.n, scaling),
            "components": {str(k): v for k, v in per_cluster_connectivity(points, K).items()},
            "cross_cluster_edges": cross_cluster_edge_count(points, K, W),
        },
    }
    if args.m is not None:
        Km = args.K if args.K is not None else recommended_K(args.m, scaling)
        out["recommended_K"]["m"] = recommended_K(args.m, scaling)
        diag = anchor_diagnostics(points, sample_anchors(points.n, args.m, args.seed), Km, delta=out["delta"])
        diag["components"] = {str(k): v for k, v in diag.pop("components").items()}
        diag.pop("delta")
        out["anchors"] = {"m": args.m, "K": Km, "seed": args.seed, **diag}
    text = json.dumps(out, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "cluster": cmd_cluster, "sweep": cmd_sweep, "diag": cmd_diag}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
