"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 input error, 3 engine error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import _kernels
from .bigraph import (
    OBJECTIVES,
    GraphFormatError,
    LimitExceededError,
    brute_force_max,
    format_graph,
    gen_synthetic,
    parse_graph,
    solution_mask,
    bench_datasets,
)
from .grover import SOLVERS, qkbs
from .sim import EngineError, distribution_csv, distribution_json, sample

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_ENGINE = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_graph(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return parse_graph(text)
    except GraphFormatError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    g = _read_graph(args.graph)
    res = SOLVERS[args.objective](g, engine=args.engine, seed=args.seed, repeats=args.repeats)
    doc = {"graph": args.graph, "n": g.n, "m": g.m, "seed": args.seed, **res.as_dict()}
    _emit(doc, args.output)
    return EXIT_OK


def cmd_kbs(args) -> int:
    g = _read_graph(args.graph)
    res = qkbs(g, args.k, args.objective, args.engine, seed=args.seed, repeats=args.repeats,
               fallback_iterations=args.iterations, keep_snapshots=True)
    solutions = solution_mask(g, args.objective, args.k)
    snaps = []
    outdir = Path(args.emit_distribution) if args.emit_distribution else None
    if outdir is not None:
        outdir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.graph).stem
    for t, dist in enumerate(res.snapshots):
        hist = sample(dist, args.shots, seed=args.seed + t)
        p_sol = float(dist.probs[solutions].sum())
        measured = int(hist.counts[solutions].sum())
        snaps.append({
            "iteration": t,
            "solution_probability": p_sol,
            "error_probability": 1.0 - p_sol,
            "sampled_error_rate": 1.0 - measured / args.shots,
        })
        if outdir is not None:
            if args.format == "csv":
                body, ext = distribution_csv(dist, hist), "csv"
            else:
                body, ext = distribution_json(dist, hist, iterations=t), "json"
            (outdir / f"{stem}_k{args.k}_itr{t}.{ext}").write_text(body, encoding="utf-8")
    doc = {"graph": args.graph, "k": args.k, "shots": args.shots, "seed": args.seed,
           **res.as_dict(), "snapshots": snaps}
    _emit(doc, args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        g = gen_synthetic(args.left, args.right, args.edges, args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    text = format_graph(g, comment=f"D_{g.n},{g.m} seed={args.seed}")
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _datasets(args) -> dict:
    if args.datasets is None:
        return bench_datasets(args.dataset_seed)
    root = Path(args.datasets)
    files = sorted(p for p in root.glob("*.txt")) if root.is_dir() else []
    if not files:
        raise InputError(f"no *.txt graph files in {root}")
    return {p.stem: _read_graph(str(p)) for p in files}


def cmd_bench(args) -> int:
    engines = ["dense", "tracked"] if args.engine == "both" else [args.engine]
    rows = []
    for name, g in _datasets(args).items():
        t0 = time.perf_counter()
        _, best = brute_force_max(g, args.objective)
        row = {"dataset": name, "n": g.n, "m": g.m, "optimum": best,
               "classical_seconds": time.perf_counter() - t0, "engines": {}}
        for engine in engines:
            t0 = time.perf_counter()
            try:
                res = SOLVERS[args.objective](g, engine=engine, seed=args.seed, repeats=args.repeats)
            except EngineError as exc:
                row["engines"][engine] = {"skipped": str(exc)}
                continue
            row["engines"][engine] = {
                "size": res.size,
                "agree": res.size == best,
                "oracle_calls": res.iterations_used,
                "probes": len(res.probes),
                "seconds": time.perf_counter() - t0,
            }
        rows.append(row)
    for row in rows:
        parts = [f"{row['dataset']:<12} n={row['n']:<3} m={row['m']:<3} opt={row['optimum']:<3}"]
        for engine, r in row["engines"].items():
            if "skipped" in r:
                parts.append(f"{engine}: skipped")
            else:
                parts.append(f"{engine}: size={r['size']} agree={r['agree']} calls={r['oracle_calls']} "
                             f"{r['seconds']:.3f}s")
        print("  ".join(parts))
    report = {"objective": args.objective, "seed": args.seed, "repeats": args.repeats,
              "backend": _kernels.BACKEND, "datasets": rows}
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qmbs", description="Grover maximum-biclique search on simulated circuits")
    p.add_argument("--threads", type=int, default=0, help="kernel threads (0 = auto)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--objective", choices=OBJECTIVES, default="edges")
        sp.add_argument("--engine", choices=("dense", "tracked"), default="tracked")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--repeats", type=int, default=3)
        sp.add_argument("-o", "--output", help="write JSON here instead of stdout")

    s = sub.add_parser("solve", help="maximum biclique search")
    s.add_argument("graph")
    common(s)
    s.set_defaults(func=cmd_solve)

    k = sub.add_parser("kbs", help="size-k search with per-iteration distributions")
    k.add_argument("graph")
    k.add_argument("-k", type=int, required=True)
    common(k)
    k.add_argument("--shots", type=int, default=20000)
    k.add_argument("--iterations", type=int, default=0,
                   help="iterations to run when no size-k biclique exists")
    k.add_argument("--emit-distribution", metavar="DIR")
    k.add_argument("--format", choices=("csv", "json"), default="csv")
    k.set_defaults(func=cmd_kbs)

    gn = sub.add_parser("gen", help="random bipartite graph")
    gn.add_argument("left", type=int)
    gn.add_argument("right", type=int)
    gn.add_argument("edges", type=int)
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("-o", "--output")
    gn.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="quantum-simulated vs brute-force comparison")
    b.add_argument("--datasets", help="directory of *.txt graphs (default: generated benchmark shapes)")
    b.add_argument("--dataset-seed", type=int, default=0)
    b.add_argument("--objective", choices=OBJECTIVES, default="edges")
    b.add_argument("--engine", choices=("dense", "tracked", "both"), default="tracked")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--repeats", type=int, default=3)
    b.add_argument("--out", help="JSON report path")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command in ("solve", "kbs") and args.repeats < 1:
        print("qmbs: error: --repeats must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "kbs" and args.shots < 1:
        print("qmbs: error: --shots must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    _kernels.set_threads(args.threads)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"qmbs: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (EngineError, LimitExceededError) as exc:
        print(f"qmbs: engine error: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    except ValueError as exc:
        print(f"qmbs: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
