"""Command-line entry point: ``nbwalk {generate,rates,evolve,maxload,trap,figure1}``.

Exit status is 0 on success, 1 for usage errors, 2 when a graph cannot be
generated or read, and 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import graph as gr
from .errors import GraphError, NumericsError
from .evolve import mixing_report
from .montecarlo import cycle_trap_frequency, load_experiment
from .nbkernel import figure1_data, rates, write_figure1_csv
from .spectra import DENSE_LIMIT, eigenvalues_dense, lambda_power, lambda_star, trace_lower_bound

log = logging.getLogger("nbwalk")

EXIT_OK, EXIT_USAGE, EXIT_GENERATION, EXIT_NUMERICS = 0, 1, 2, 3
EVOLVE_ALL_STARTS_LIMIT = 5000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _ints(text: str, count: int, gen: str) -> list[int]:
    parts = text.split(",") if text else []
    if len(parts) != count:
        raise UsageError(f"generator {gen!r} needs {count} integer argument(s)")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"generator {gen!r} has a non-integer argument") from None


def build_graph(gen: str, seed: int) -> gr.RegularGraph:
    """Generator string: ``complete:n``, ``cycle:n``, ``petersen``, ``random:n,d`` or ``decorated:m,g,d``.

    Random families are redrawn until connected.
    """
    kind, _, args = gen.partition(":")
    if kind == "complete":
        return gr.complete_graph(*_ints(args, 1, gen))
    if kind == "cycle":
        return gr.cycle_graph(*_ints(args, 1, gen))
    if kind == "petersen":
        return gr.petersen_graph()
    if kind == "random":
        n, d = _ints(args, 2, gen)
        return gr.random_regular(n, d, seed, connected=True)
    if kind == "decorated":
        m, g, d = _ints(args, 3, gen)
        return gr.cycle_decorated_expander(m, g, d, seed, connected=True)
    raise UsageError(f"unknown generator {kind!r}")


def _load_graph(args) -> tuple[gr.RegularGraph, dict]:
    if args.graph:
        return gr.read_graph(args.graph), {"graph": str(args.graph)}
    return build_graph(args.gen, args.seed), {"gen": args.gen, "seed": args.seed}


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=1) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _stamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def cmd_generate(args) -> None:
    if not args.gen:
        raise UsageError("generate needs --gen")
    g = build_graph(args.gen, args.seed)
    if args.out:
        gr.write_graph(g, args.out)
    else:
        sys.stdout.write(gr.to_json(g))
    log.info("generated %r with seed %d", g, args.seed)


def cmd_rates(args) -> None:
    g, source = _load_graph(args)
    if g.n <= DENSE_LIMIT:
        lam = lambda_star(eigenvalues_dense(g))
        method = "dense"
    else:
        lam = lambda_power(g, seed=args.seed)
        method = "power-iteration estimate"
    lam = min(lam, float(g.d))
    pair = rates(lam, g.d)
    payload = {
        "n": g.n,
        "d": g.d,
        "lambda": lam,
        "rho": pair.rho,
        "rho_nb": pair.rho_nb,
        "ratio": pair.ratio,
        "trace_bound": trace_lower_bound(g.n, g.d),
        "lambda_method": method,
        **source,
    }
    if not gr.is_connected(g):
        payload["warning"] = "graph is disconnected; lambda equals d and the rates are not mixing rates"
    payload["timestamp"] = _stamp()
    _emit(payload, args.out)


def cmd_evolve(args) -> None:
    g, source = _load_graph(args)
    if g.n > EVOLVE_ALL_STARTS_LIMIT and args.sampled_starts is None:
        raise UsageError(f"n={g.n} > {EVOLVE_ALL_STARTS_LIMIT}: pass --sampled-starts")
    spectrum = eigenvalues_dense(g) if g.n <= DENSE_LIMIT else None
    report = mixing_report(
        g,
        walk=args.walk,
        horizon=args.horizon,
        threshold=_threshold(args.threshold),
        sampled_starts=args.sampled_starts,
        seed=args.seed,
        spectrum=spectrum,
    )
    payload = report.to_dict()
    payload.update(source, seed=args.seed, timestamp=_stamp())
    _emit(payload, args.out)
    if args.csv:
        report.write_csv(args.csv)


def cmd_maxload(args) -> None:
    g, source = _load_graph(args)
    report = load_experiment(g, steps=args.steps, trials=args.trials, base_seed=args.seed)
    payload = {
        "n": report.n,
        "d": report.d,
        "steps": report.steps,
        "base_seed": report.base_seed,
        "trials": report.trials,
        "summary": report.summary(),
        "rows": [[r.trial, r.nb_max, r.simple_max, r.bins_max] for r in report.rows],
        **source,
        "timestamp": _stamp(),
    }
    _emit(payload, args.out)
    if args.csv:
        report.write_csv(args.csv)


def cmd_trap(args) -> None:
    if not args.gen or not args.gen.startswith("decorated:"):
        raise UsageError("trap needs --gen decorated:m,g,d")
    g = build_graph(args.gen, args.seed)
    res = cycle_trap_frequency(g, args.k, args.trials, args.seed, steps=args.steps)
    payload = {
        "gen": args.gen,
        "seed": args.seed,
        "k": res.k,
        "segments_per_trial": res.segments_per_trial,
        "observed_freq": res.observed_freq,
        "predicted": res.predicted,
        "std_error": res.std_error,
        "z_score": res.z_score,
        "success_probability": res.success_probability,
        "any_direction_freq": sum(res.any_direction_counts) / res.segments,
        "counts": res.counts,
        "max_loads": res.max_loads,
        "timestamp": _stamp(),
    }
    _emit(payload, args.out)


def cmd_figure1(args) -> None:
    if args.grid < 1:
        raise UsageError("--grid must be >= 1")
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    for d in args.d:
        if d < 3:
            raise UsageError(f"figure1 needs d >= 3, got {d}")
        path = out_dir / f"figure1_d{d}.csv"
        write_figure1_csv(figure1_data(d, np.linspace(0.0, d, args.grid)), path)
        log.info("wrote %s", path)


def _threshold(text: str) -> str | float:
    if text in ("half-n", "n-squared"):
        return text
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"--threshold must be half-n, n-squared or a number, got {text!r}") from None
    if not value > 0:
        raise UsageError("--threshold must be positive")
    return value


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nbwalk", description="Mixing and max-load experiments for walks on regular graphs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_source(sp, required=True):
        grp = sp.add_mutually_exclusive_group(required=required)
        grp.add_argument("--graph", metavar="PATH", help="graph JSON file")
        grp.add_argument("--gen", metavar="GEN", help="complete:n | cycle:n | petersen | random:n,d | decorated:m,g,d")

    def common(sp):
        sp.add_argument("--seed", type=_seed, default=0)
        sp.add_argument("--out", metavar="PATH")

    sp = sub.add_parser("generate", help="write a graph file")
    sp.add_argument("--gen", metavar="GEN", required=True)
    common(sp)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("rates", help="lambda and both theoretical mixing rates")
    with_source(sp)
    common(sp)
    sp.set_defaults(func=cmd_rates)

    sp = sub.add_parser("evolve", help="exact evolution, fitted rate and mixing time")
    with_source(sp)
    common(sp)
    sp.add_argument("--walk", choices=("simple", "nb"), default="nb")
    sp.add_argument("--horizon", type=int, default=200)
    sp.add_argument("--threshold", default="half-n", help="half-n | n-squared | REAL")
    sp.add_argument("--sampled-starts", type=int, metavar="N")
    sp.add_argument("--csv", metavar="PATH", help="also write (k, deviation) rows")
    sp.set_defaults(func=cmd_evolve)

    sp = sub.add_parser("maxload", help="max visit load of both walks against balls and bins")
    with_source(sp)
    common(sp)
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--steps", type=int, help="walk length (default n)")
    sp.add_argument("--csv", metavar="PATH", help="also write per-trial rows")
    sp.set_defaults(func=cmd_maxload)

    sp = sub.add_parser("trap", help="cycle-trap frequency on a decorated expander")
    sp.add_argument("--gen", metavar="GEN", required=True)
    common(sp)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--steps", type=int, help="walk length (default n)")
    sp.set_defaults(func=cmd_trap)

    sp = sub.add_parser("figure1", help="rate curves as CSV, one file per degree")
    sp.add_argument("--d", type=int, nargs="+", default=[3, 10])
    sp.add_argument("--grid", type=int, default=201)
    sp.add_argument("--out", metavar="DIR", help="output directory (default .)")
    sp.set_defaults(func=cmd_figure1)
    return p


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"nbwalk: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, OSError, json.JSONDecodeError) as exc:
        print(f"nbwalk: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    except NumericsError as exc:
        print(f"nbwalk: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except ValueError as exc:
        print(f"nbwalk: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
