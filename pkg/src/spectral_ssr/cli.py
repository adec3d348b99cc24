"""Command-line front-end.

Exit codes: 0 success, 1 invalid arguments or input, 2 I/O or unparsable
files, 3 numerical failure.
"""
import argparse
import csv
import io
import json
import logging
import sys
import time

import numpy as np

from . import __version__, cluster, data, experiments, graph, metrics, ssr
from ._backend import BACKEND
from .errors import DataFormatError, NumericError, ValidationError

log = logging.getLogger("spectral_ssr")

METHODS = ("ssrk-scut", "ssro-scut", "rcut", "rcuto", "kpc", "kmeans")
KERNEL_METHODS = ("ssrk-scut", "rcut")

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return [float(eval_fraction(x)) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def eval_fraction(token):
    token = token.strip()
    if "/" in token:
        num, den = token.split("/", 1)
        return float(num) / float(den)
    return float(token)


def _cases(text):
    out = []
    for item in text.split(","):
        try:
            profile, r = item.strip().split(":")
            out.append((profile, int(r)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected profile:r pairs, got {item!r}")
    return out


def build_parser():
    p = _Parser(prog="spectral-ssr", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt="json"):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--format", choices=("json", "csv"), default=fmt)

    def source(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--input", help="CSV with one sample per row")
        g.add_argument("--preset", choices=data.PRESETS)
        g.add_argument("--edges", help="edge list 'i j [w]' (similarity graph input)")
        sp.add_argument("--has-labels", action="store_true",
                        help="last CSV column holds the true class")
        sp.add_argument("--truth", help="file with one true label per line")
        sp.add_argument("--k", type=int, default=4, help="neighbours in the kNN graph")
        sp.add_argument("--scale-k", type=int, default=None,
                        help="neighbour rank for the self-tuning scale (default: --k)")
        sp.add_argument("--graph-mode", choices=("union", "mutual"), default="union")

    c = sub.add_parser("cluster", help="cluster a dataset")
    source(c)
    c.add_argument("--method", choices=METHODS, default="ssrk-scut")
    c.add_argument("--K", type=int, required=True, help="number of clusters")
    c.add_argument("--r", type=int, help="code dimension (default: K)")
    c.add_argument("--lambda", dest="lam", type=float, help="truncation threshold")
    c.add_argument("--restarts", type=int, default=20)
    common(c)

    s = sub.add_parser("ssr", help="compute sparse codes")
    source(s)
    s.add_argument("--variant", choices=("kernel", "original"), default="kernel")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--lambda", dest="lam", type=float)
    common(s)

    rs = sub.add_parser("recovery-sweep", help="NSCrt rotation-recovery experiment")
    rs.add_argument("--cases", type=_cases, default=list(experiments.DEFAULT_CASES),
                    help="profile:r pairs, e.g. uniform:16,exponential:9")
    rs.add_argument("--noise-grid", type=_float_list,
                    default=list(experiments.DEFAULT_NOISE_GRID))
    rs.add_argument("--n", type=int, default=1024)
    rs.add_argument("--trials", type=int, default=20)
    rs.add_argument("--lambda", dest="lam", type=float)
    common(rs, "csv")

    rh = sub.add_parser("rho-sweep", help="rho / sparsity / accuracy over Gaussian overlap")
    rh.add_argument("--separations", type=_float_list,
                    default=list(experiments.DEFAULT_SEPARATIONS))
    rh.add_argument("--trials", type=int, default=50)
    rh.add_argument("--k", type=int, default=4)
    common(rh, "csv")

    e = sub.add_parser("eval", help="score predicted labels against truth")
    e.add_argument("--pred", required=True)
    e.add_argument("--truth", required=True)
    e.add_argument("--out")
    e.add_argument("--format", choices=("json", "csv"), default="json")

    g = sub.add_parser("gen", help="write a synthetic or bundled dataset as CSV")
    g.add_argument("--preset", choices=data.PRESETS, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    return p


def _resolved(args):
    cfg = {k: v for k, v in vars(args).items() if k not in ("verbose",)}
    return json.loads(json.dumps(cfg, default=list))


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _dump_json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv_text(rows, columns, header):
    buf = io.StringIO()
    for line in header:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row[c]) for c in columns])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return v


def _meta(args):
    return {"artifact": "spectral-ssr", "version": __version__, "config": _resolved(args)}


def _load_source(args):
    truth = None
    W = None
    A = None
    if args.preset:
        A, truth = data.load_preset(args.preset, args.seed)
    elif args.input:
        A, truth = data.load_csv(args.input, has_labels=args.has_labels)
    else:
        W = graph.check_similarity(data.load_edge_list(args.edges))
    if args.truth:
        truth = data.load_labels(args.truth)
    n = A.shape[1] if A is not None else W.shape[0]
    if truth is not None and len(truth) != n:
        raise ValidationError(f"truth has {len(truth)} labels for {n} samples")
    return A, W, truth


def _kernel_graph(args, A, W, timings):
    if W is not None:
        return W
    t = time.perf_counter()
    W = graph.build_knn_similarity(A, args.k, args.graph_mode, scale_k=args.scale_k)
    timings["similarity"] = time.perf_counter() - t
    return W


def cmd_cluster(args):
    if args.K < 1:
        raise ValidationError(f"--K must be >= 1, got {args.K}")
    if args.restarts < 1:
        raise ValidationError(f"--restarts must be >= 1, got {args.restarts}")
    r = args.K if args.r is None else args.r
    timings = {}
    t0 = time.perf_counter()
    A, W, truth = _load_source(args)
    timings["load"] = time.perf_counter() - t0
    if A is None and args.method not in KERNEL_METHODS:
        raise ValidationError(f"method {args.method} needs feature data, not an edge list")
    n = A.shape[1] if A is not None else W.shape[0]
    if args.K > n:
        raise ValidationError(f"--K={args.K} exceeds the number of samples {n}")

    result = {"n": n, "K": args.K, "method": args.method}
    t = time.perf_counter()
    if args.method in KERNEL_METHODS:
        W = _kernel_graph(args, A, W, timings)
        rho_graph = W
        t = time.perf_counter()
        if args.method == "ssrk-scut":
            res = ssr.ssrk(W, r, args.lam)
            labels = cluster.scut(res.H)
        else:
            labels = cluster.rcut_pipeline(W, args.K, args.seed, args.restarts)
            res = None
    else:
        Ac = ssr.center(A)
        rho_graph = ssr.linear_kernel_similarity(Ac)
        if args.method == "ssro-scut":
            res = ssr.ssro(Ac, r, args.lam)
            labels = cluster.scut(res.H)
        elif args.method == "kmeans":
            labels = cluster.kmeans(A, args.K, args.seed, args.restarts).labels
            res = None
        else:
            labels = cluster.linear_pipelines(A, args.K, args.seed, args.restarts, args.method)
            res = None
    timings["solve"] = time.perf_counter() - t

    if res is not None:
        result.update(
            r=r,
            lambda_=res.lam,
            mean_sparsity=ssr.mean_sparsity(res.H),
            iterations=res.codes.iterations,
            converged=bool(res.codes.converged),
            weight_sum_error=ssr.weight_sum_error(res.H),
        )
    t = time.perf_counter()
    if 1 <= args.K < n:
        rep = graph.rho_of_similarity(rho_graph, args.K)
        result["rho"] = rep.rho
        result["lambda_K"] = rep.lambda_K
        result["lambda_K_plus_1"] = rep.lambda_K_plus_1
    timings["rho"] = time.perf_counter() - t
    result["components"] = graph.connected_components(rho_graph)[0]
    result["metrics"] = metrics.score_all(labels, truth) if truth is not None else None
    result["nmi_normalization"] = metrics.NMI_NORMALIZATION
    timings["total"] = time.perf_counter() - t0

    labels = [int(x) for x in labels]
    if args.format == "json":
        out = dict(_meta(args), result=result, labels=labels, timings=timings)
        _emit(_dump_json(_clean(out)), args.out)
    else:
        header = [
            f"spectral-ssr {__version__}",
            "config: " + json.dumps(_resolved(args), sort_keys=True),
            "result: " + json.dumps(_clean(result), sort_keys=True),
            "timings: " + json.dumps(timings, sort_keys=True),
        ]
        rows = [{"sample": i, "label": lab} for i, lab in enumerate(labels)]
        _emit(_csv_text(rows, ["sample", "label"], header), args.out)
    log.info("cluster done in %.3fs", timings["total"])
    return EXIT_OK


def _clean(obj):
    if isinstance(obj, dict):
        return {k.rstrip("_"): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def cmd_ssr(args):
    timings = {}
    t0 = time.perf_counter()
    A, W, truth = _load_source(args)
    if args.variant == "kernel":
        W = _kernel_graph(args, A, W, timings)
        res = ssr.ssrk(W, args.r, args.lam)
    else:
        if A is None:
            raise ValidationError("the original-data variant needs feature data")
        res = ssr.ssro(ssr.center(A), args.r, args.lam)
    timings["total"] = time.perf_counter() - t0
    codes = res.codes
    summary = {
        "variant": res.variant,
        "r": res.r,
        "lambda": res.lam,
        "iterations": codes.iterations,
        "converged": bool(codes.converged),
        "mean_sparsity": ssr.mean_sparsity(codes.H),
        "weight_sum_error": ssr.weight_sum_error(codes.H),
    }
    if args.format == "json":
        out = dict(_meta(args), result=summary, H=codes.H.tolist(), Hbar=codes.Hbar.tolist(),
                   R=codes.R.tolist(), timings=timings)
        _emit(_dump_json(out), args.out)
    else:
        cols = [f"h{k}" for k in range(codes.H.shape[0])]
        rows = [dict(zip(cols, map(float, codes.H[:, i]))) for i in range(codes.H.shape[1])]
        header = [
            f"spectral-ssr {__version__}",
            "config: " + json.dumps(_resolved(args), sort_keys=True),
            "result: " + json.dumps(summary, sort_keys=True),
            "timings: " + json.dumps(timings, sort_keys=True),
        ]
        _emit(_csv_text(rows, cols, header), args.out)
    return EXIT_OK


def _sweep_output(args, rows, columns, timings):
    if args.format == "csv":
        header = [
            f"spectral-ssr {__version__}",
            "config: " + json.dumps(_resolved(args), sort_keys=True),
            "timings: " + json.dumps(timings, sort_keys=True),
        ]
        _emit(_csv_text(rows, columns, header), args.out)
    else:
        _emit(_dump_json(dict(_meta(args), rows=rows, timings=timings)), args.out)


def cmd_recovery_sweep(args):
    if args.trials < 1:
        raise ValidationError("--trials must be >= 1")
    for a in args.noise_grid:
        if a < 0:
            raise ValidationError(f"noise levels must be nonnegative, got {a}")
    t = time.perf_counter()
    rows = experiments.recovery_sweep(args.cases, args.noise_grid, args.trials, args.seed,
                                      args.n, args.lam)
    timings = {"total": time.perf_counter() - t}
    cols = ["profile", "r", "noise_a", "method", "mean_score", "std"]
    _sweep_output(args, rows, cols, timings)
    return EXIT_OK


def cmd_rho_sweep(args):
    if args.trials < 1:
        raise ValidationError("--trials must be >= 1")
    if not args.separations or min(args.separations) <= 0:
        raise ValidationError("separations must be positive")
    t = time.perf_counter()
    rows = experiments.rho_sweep(args.separations, args.trials, args.seed, args.k)
    timings = {"total": time.perf_counter() - t}
    cols = ["separation", "rho", "mean_sparsity", "scut_accuracy"]
    _sweep_output(args, rows, cols, timings)
    return EXIT_OK


def cmd_eval(args):
    pred = data.load_labels(args.pred)
    truth = data.load_labels(args.truth)
    if len(pred) != len(truth):
        raise ValidationError(f"label counts differ: {len(pred)} vs {len(truth)}")
    scores = metrics.score_all(pred, truth)
    if args.format == "json":
        out = dict(_meta(args), metrics=scores, nmi_normalization=metrics.NMI_NORMALIZATION)
        _emit(_dump_json(out), args.out)
    else:
        header = [f"spectral-ssr {__version__}",
                  "config: " + json.dumps(_resolved(args), sort_keys=True)]
        _emit(_csv_text([scores], list(scores), header), args.out)
    return EXIT_OK


def cmd_gen(args):
    A, labels = data.load_preset(args.preset, args.seed)
    header = f"spectral-ssr {__version__}\npreset={args.preset} seed={args.seed}"
    if args.out is None:
        buf = io.StringIO()
        for line in header.splitlines():
            buf.write(f"# {line}\n")
        for i in range(A.shape[1]):
            buf.write(",".join([format(v, ".17g") for v in A[:, i]] + [str(int(labels[i]))]))
            buf.write("\n")
        sys.stdout.write(buf.getvalue())
    else:
        data.save_csv(args.out, A, labels, header=header)
    return EXIT_OK


COMMANDS = {
    "cluster": cmd_cluster,
    "ssr": cmd_ssr,
    "recovery-sweep": cmd_recovery_sweep,
    "rho-sweep": cmd_rho_sweep,
    "eval": cmd_eval,
    "gen": cmd_gen,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    log.info("kernel backend: %s", BACKEND)
    try:
        return COMMANDS[args.command](args)
    except (DataFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
