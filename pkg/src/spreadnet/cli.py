"""spreadnet command line: generate / simulate / dataset / rank / evaluate / bench.

Exit codes: 0 success, 1 usage error, 2 data error.  Diagnostics go to
stderr; machine-readable output goes to files or stdout.  Every
artifact-producing subcommand writes a run manifest recording resolved
parameters, input/output checksums and the master seed.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from spreadnet import __version__, mln, netgen, rankers
from spreadnet import evaluation as ev
from spreadnet import pipeline as pl
from spreadnet.micm import MicmConfig, Protocol, simulate


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def _master_seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("SPREADNET_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"SPREADNET_SEED={env!r} is not an integer") from None
    return 0


def _write_run_manifest(path, subcommand, params, master_seed, inputs, outputs,
                        started):
    manifest = {
        "tool_version": __version__,
        "subcommand": subcommand,
        "parameters": params,
        "master_seed": master_seed,
        "input_checksums": {p: pl.sha256_file(p) for p in inputs if os.path.isfile(p)},
        "output_checksums": {p: pl.sha256_file(p) for p in outputs if os.path.isfile(p)},
        "duration_seconds": time.monotonic() - started,
    }
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def _parse_range(text):
    lo, _, hi = text.partition(":")
    return (int(lo), int(hi or lo))


def _parse_pis(text):
    return tuple(float(p) for p in text.split(","))


def _parse_protocols(text):
    try:
        return tuple(Protocol(p.strip()) for p in text.split(","))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- subcommands -----------------------------------------------------------


def cmd_generate(args):
    started = time.monotonic()
    seed = _master_seed(args)
    base = netgen.CorpusSpec(
        model=args.model,
        layer_range=_parse_range(args.layers),
        actor_range=_parse_range(args.actors),
        er_edge_prob=args.er_prob,
        pa_attach_m=args.pa_m,
    )
    try:
        manifest = netgen.write_corpus(args.count, base, seed, args.out)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    outputs = [os.path.join(args.out, e["file"]) for e in manifest["networks"]]
    outputs.append(os.path.join(args.out, "corpus.json"))
    _write_run_manifest(
        os.path.join(args.out, "run_manifest.json"), "generate",
        {"model": args.model, "count": args.count, "layers": args.layers,
         "actors": args.actors, "er_prob": args.er_prob, "pa_m": args.pa_m,
         "out": args.out},
        seed, [], outputs, started,
    )
    print(f"wrote {len(manifest['networks'])} networks to {args.out}", file=sys.stderr)
    return 0


def cmd_simulate(args):
    try:
        net = mln.load_network(args.net)
        cfg = MicmConfig(args.pi, Protocol(args.protocol), args.seed_actor,
                         _master_seed(args))
        _, trace, _ = simulate(net, cfg, record_trace=True)
    except (mln.NotFoundError, mln.NetworkFormatError, FileNotFoundError, ValueError) as exc:
        raise DataError(str(exc)) from None
    print("iteration,newly_active_actor_ids")
    for iteration, ids in trace:
        print(f"{iteration},{';'.join(str(i) for i in ids)}")
    return 0


def cmd_dataset(args):
    started = time.monotonic()
    seed = _master_seed(args)
    protocols = _parse_protocols(args.protocols)
    feasible = {}
    if Protocol.AND in protocols:
        feasible[Protocol.AND] = _parse_pis(args.feasible_and)
    if Protocol.OR in protocols:
        feasible[Protocol.OR] = _parse_pis(args.feasible_or)
    try:
        grid = pl.GridSpec(
            protocols=protocols,
            pis=_parse_pis(args.pis),
            repetitions=args.reps,
            feasible_pis=feasible,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        manifest = pl.run_pipeline(
            args.corpus, grid, args.out, seed, jobs=args.jobs, force=args.force,
            progress=lambda msg: print(msg, file=sys.stderr),
        )
    except (ValueError, mln.NetworkFormatError, FileNotFoundError) as exc:
        raise DataError(str(exc)) from None
    inputs = sorted(
        os.path.join(args.corpus, f) for f in os.listdir(args.corpus) if f.endswith(".mln")
    )
    outputs = [os.path.join(args.out, e["file"]) for e in manifest["tables"]]
    outputs.append(os.path.join(args.out, "manifest.json"))
    _write_run_manifest(
        os.path.join(args.out, "run_manifest.json"), "dataset",
        {"corpus": args.corpus, "out": args.out, "protocols": args.protocols,
         "reps": args.reps, "pis": args.pis, "feasible_and": args.feasible_and,
         "feasible_or": args.feasible_or, "jobs": args.jobs, "force": args.force},
        seed, inputs, outputs, started,
    )
    print(f"wrote {len(manifest['tables'])} tables to {args.out}", file=sys.stderr)
    return 0


def cmd_rank(args):
    started = time.monotonic()
    seed = _master_seed(args)
    try:
        if args.method == "ground-truth":
            if not args.sps:
                raise UsageError("--sps is required for ground-truth ranking")
            table = pl.read_sps_csv(args.sps)
            ranking = rankers.rank_ground_truth(table)
            inputs = [args.sps]
        else:
            if not args.net:
                raise UsageError(f"--net is required for method {args.method}")
            net = mln.load_network(args.net)
            inputs = [args.net]
            if args.method == "deg-c":
                ranking = rankers.rank_degree(net)
            elif args.method == "deg-cd":
                ranking = rankers.rank_degree_discount(net)
            elif args.method == "nghb-s":
                ranking = rankers.rank_neighborhood(net)
            elif args.method == "nghb-sd":
                ranking = rankers.rank_neighborhood_discount(net)
            else:
                ranking = rankers.rank_random(net, seed)
    except UsageError:
        raise
    except (mln.NotFoundError, mln.NetworkFormatError, FileNotFoundError, ValueError) as exc:
        raise DataError(str(exc)) from None
    rankers.write_ranking(ranking, args.out)
    _write_run_manifest(
        args.out + ".run.json", "rank",
        {"method": args.method, "net": args.net, "sps": args.sps, "out": args.out},
        seed, inputs, [args.out, args.out + ".meta.json"], started,
    )
    return 0


def cmd_evaluate(args):
    started = time.monotonic()
    try:
        table = pl.read_sps_csv(args.sps)
        r_true = rankers.read_ranking(args.truth)
        r_pred = rankers.read_ranking(args.pred)
        report = ev.evaluate(r_true, r_pred, table)
    except ev.ActorSetMismatchError as exc:
        raise DataError(str(exc)) from None
    except (FileNotFoundError, ValueError) as exc:
        raise DataError(str(exc)) from None
    ev.write_report(report, args.out)
    outputs = [args.out]
    if args.curve:
        ev.emit_curve(report, args.curve)
        outputs.append(args.curve)
    _write_run_manifest(
        args.out + ".run.json", "evaluate",
        {"truth": args.truth, "pred": args.pred, "sps": args.sps,
         "out": args.out, "curve": args.curve},
        _master_seed(args), [args.truth, args.pred, args.sps], outputs, started,
    )
    return 0


def cmd_evaluate_batch(args):
    started = time.monotonic()
    try:
        with open(args.manifest, encoding="utf-8") as fh:
            spec = json.load(fh)
        rows = {}
        for entry in spec["entries"]:
            table = pl.read_sps_csv(entry["sps"])
            r_true = rankers.read_ranking(entry["truth"])
            r_pred = rankers.read_ranking(entry["pred"])
            report = ev.evaluate(r_true, r_pred, table)
            predictor = entry.get("predictor") or report.predictor
            rows.setdefault(predictor, []).append(report.metrics())
    except ev.ActorSetMismatchError as exc:
        raise DataError(str(exc)) from None
    except (KeyError, FileNotFoundError, ValueError) as exc:
        raise DataError(str(exc)) from None
    metric_names = ["T_val", "S_auc", "S_val", "F_auc",
                    "precision_T", "precision_S", "precision_F",
                    "jaccard_T", "jaccard_S", "jaccard_F"]
    lines = ["predictor," + ",".join(metric_names)]
    for predictor in sorted(rows):
        means = [np.mean([m[name] for m in rows[predictor]]) for name in metric_names]
        lines.append(predictor + "," + ",".join(format(v, ".9g") for v in means))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    _write_run_manifest(
        args.out + ".run.json", "evaluate-batch",
        {"manifest": args.manifest, "out": args.out},
        _master_seed(args), [args.manifest], [args.out], started,
    )
    return 0


def cmd_bench(args):
    started = time.monotonic()
    seed = _master_seed(args)
    protocols = _parse_protocols(args.protocols)
    pis = _parse_pis(args.pis)
    try:
        grid = pl.GridSpec(
            protocols=protocols, pis=pis, repetitions=args.reps,
            feasible_pis={p: pis for p in protocols},
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    names = sorted(
        os.path.splitext(f)[0] for f in os.listdir(args.corpus) if f.endswith(".mln")
    )
    if not names:
        raise DataError(f"no .mln networks in {args.corpus}")
    rows = []
    for name in names:
        net = mln.load_network(os.path.join(args.corpus, f"{name}.mln"))
        t0 = time.monotonic()
        for protocol in protocols:
            pl.build_sps_table(net, grid, protocol, seed, network_name=name,
                               jobs=args.jobs)
        seconds = time.monotonic() - t0
        mean_edges = net.total_edges() / net.n_layers
        rows.append((name, net.n_actors, mean_edges, seconds))
        print(f"{name}: {seconds:.3f}s", file=sys.stderr)
    lines = ["network,actors,mean_edges_per_layer,seconds"]
    for name, actors, mean_edges, seconds in rows:
        lines.append(f"{name},{actors},{format(mean_edges, '.9g')},{format(seconds, '.9g')}")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    fit = fit_bench(rows)
    with open(args.out + ".fit.json", "w", encoding="utf-8") as fh:
        json.dump(fit, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"linear fit: slope={fit['slope']} r_squared={fit['r_squared']}",
          file=sys.stderr)
    _write_run_manifest(
        args.out + ".run.json", "bench",
        {"corpus": args.corpus, "out": args.out, "protocols": args.protocols,
         "pis": args.pis, "reps": args.reps, "jobs": args.jobs},
        seed, [], [args.out, args.out + ".fit.json"], started,
    )
    return 0


def fit_bench(rows):
    """Least-squares seconds ~ mean_edges_per_layer; slope and R^2."""
    x = np.array([r[2] for r in rows], dtype=float)
    y = np.array([r[3] for r in rows], dtype=float)
    if len(rows) < 2 or np.ptp(x) == 0:
        return {"slope": None, "intercept": None, "r_squared": None}
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else None
    return {"slope": float(slope), "intercept": float(intercept), "r_squared": r2}


# -- parser ----------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spreadnet",
        description="Super-spreader ground truth for multilayer networks.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command")

    common_seed = {"type": int, "default": None,
                   "help": "master seed (falls back to SPREADNET_SEED, then 0)"}
    common_jobs = {"type": int, "default": os.cpu_count() or 1,
                   "help": "worker pool size"}

    p = sub.add_parser("generate", help="generate a synthetic network corpus")
    p.add_argument("--model", choices=["er", "pa"], required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", **common_seed)
    p.add_argument("--out", required=True)
    p.add_argument("--layers", default="2:5", help="layer count range LO:HI")
    p.add_argument("--actors", default="500:617", help="actor count range LO:HI")
    p.add_argument("--er-prob", type=float, default=netgen.ER_EDGE_PROB_DEFAULT)
    p.add_argument("--pa-m", type=int, default=netgen.PA_ATTACH_M_DEFAULT)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("simulate", help="single cascade debug trace")
    p.add_argument("--net", required=True)
    p.add_argument("--seed-actor", type=int, required=True)
    p.add_argument("--pi", type=float, required=True)
    p.add_argument("--protocol", choices=["and", "or"], required=True)
    p.add_argument("--seed", **common_seed)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("dataset", help="build the spreading-potential dataset")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--protocols", default="and,or")
    p.add_argument("--reps", type=int, default=40)
    p.add_argument("--seed", **common_seed)
    p.add_argument("--pis", default=",".join(str(v) for v in pl.DEFAULT_PIS))
    p.add_argument("--feasible-and", default=",".join(str(v) for v in pl.FEASIBLE_AND))
    p.add_argument("--feasible-or", default=",".join(str(v) for v in pl.FEASIBLE_OR))
    p.add_argument("--force", action="store_true")
    p.add_argument("--jobs", **common_jobs)
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("rank", help="rank actors with a heuristic predictor")
    p.add_argument("--method", required=True,
                   choices=["deg-c", "deg-cd", "nghb-s", "nghb-sd", "random",
                            "ground-truth"])
    p.add_argument("--net")
    p.add_argument("--sps")
    p.add_argument("--seed", **common_seed)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("evaluate", help="score a predicted ranking")
    p.add_argument("--truth", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--sps", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--curve")
    p.add_argument("--seed", **common_seed)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("evaluate-batch", help="evaluate many rankings into a wide CSV")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", **common_seed)
    p.set_defaults(func=cmd_evaluate_batch)

    p = sub.add_parser("bench", help="time the simulation grid per network")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--protocols", default="or")
    p.add_argument("--pis", default="0.1")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", **common_seed)
    p.add_argument("--jobs", **common_jobs)
    p.set_defaults(func=cmd_bench)

    return parser


def _apply_config_file(parser, argv):
    """Config precedence: flags > config file > built-in defaults."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise UsageError("--config requires a path")
    path = argv[i + 1]
    argv = argv[:i] + argv[i + 2:]
    overrides = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value")
                key, _, value = line.partition("=")
                overrides[key.strip().replace("-", "_")] = value.strip()
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}") from None
    for action in parser._subparsers._group_actions[0].choices.values():  # noqa: SLF001
        known = {a.dest: a for a in action._actions}  # noqa: SLF001
        defaults = {}
        for key, value in overrides.items():
            if key in known and known[key].type is not None:
                defaults[key] = known[key].type(value)
            elif key in known:
                defaults[key] = value
        action.set_defaults(**defaults)
    return argv


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config_file(parser, argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            # argparse uses 0 for --help, 2 for usage errors; usage errors are 1 here
            return 0 if exc.code == 0 else 1
        if not getattr(args, "command", None):
            parser.print_usage(sys.stderr)
            return 1
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
