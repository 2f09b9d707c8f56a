"""Command line front end.

Sub-commands: ``validate``, ``regions``, ``analyze``, ``simulate``.  Exit
codes are a stable contract: 0 ok, 1 analysis did not converge, 2 model or
automaton invalid, 3 usage or parse error, 4 output I/O failure, 5 internal
failure.  Reports are written even on exit 1 so partial results survive.
"""

from __future__ import annotations

import argparse
import sys

from . import modelio
from .dta import DegenerateInputError
from .numeric import ConvergenceError, GridSpec, analyze
from .regions import InternalError, build_region_graph, decompose, to_dot
from .simulate import SimConfig, estimate_discrete, estimate_reach, estimate_timed

EXIT_OK = 0
EXIT_UNCONVERGED = 1
EXIT_INVALID = 2
EXIT_USAGE = 3
EXIT_IO = 4
EXIT_INTERNAL = 5


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit 2; the contract says 3
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="dtameasure", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("model", help="model JSON file")
        p.add_argument("dta", help="automaton JSON file")

    p = sub.add_parser("validate", help="check model and automaton invariants")
    common(p)

    p = sub.add_parser("regions", help="build the region graph and export DOT")
    common(p)
    p.add_argument("--dot", metavar="PATH", help="write the graph in DOT format")

    p = sub.add_parser("analyze", help="compute reach probabilities and frequencies")
    common(p)
    p.add_argument("--grid", type=int, default=8, metavar="N", help="cells per time unit")
    p.add_argument("--eps", type=float, default=1e-3, help="absorption residual target")
    p.add_argument("--tol", type=float, default=1e-9, help="invariant-iteration L1 tolerance")
    p.add_argument("--max-iters", type=int, default=10_000, help="absorption iteration cap")
    p.add_argument("--out", metavar="PATH", help="write the analysis report JSON")

    p = sub.add_parser("simulate", help="Monte Carlo frequency and reach estimates")
    common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=200)
    p.add_argument("--steps", type=int, default=5000)
    p.add_argument("--burn-in", type=int, default=None)
    p.add_argument("--out", metavar="PATH", help="write the estimate report JSON")
    return parser


def _load(args):
    model = modelio.load_model(args.model)
    dta = modelio.load_dta(args.dta)
    return model, dta


def _write(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise _WriteFailure(str(exc)) from exc


class _WriteFailure(Exception):
    pass


def cmd_validate(args) -> int:
    model, dta = _load(args)
    report = {"model": model.validate(), "dta": dta.validate()}
    print(modelio.dump_json(report), end="")
    return EXIT_OK if not (report["model"] or report["dta"]) else EXIT_INVALID


def _validated(args):
    model, dta = _load(args)
    problems = model.validate() + dta.validate()
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return None
    return model, dta


def cmd_regions(args) -> int:
    loaded = _validated(args)
    if loaded is None:
        return EXIT_INVALID
    model, dta = loaded
    graph = build_region_graph(model, dta)
    dec = decompose(graph, model, dta)
    if args.dot:
        _write(to_dot(graph, dec, dta.clocks), args.dot)
    summary = {
        "num_regions": len(graph.vertices),
        "num_edges": graph.num_edges(),
        "k": len(dec.bsccs),
        "periods": dec.periods,
        "bscc_sizes": [len(c) for c in dec.bsccs],
    }
    print(modelio.dump_json(summary), end="")
    return EXIT_OK


def cmd_analyze(args) -> int:
    loaded = _validated(args)
    if loaded is None:
        return EXIT_INVALID
    model, dta = loaded
    grid = GridSpec.for_dta(dta, args.grid)
    report = analyze(model, dta, grid, eps=args.eps, tol=args.tol, max_iters=args.max_iters)
    text = modelio.dump_json(report.to_json())
    if args.out:
        _write(text, args.out)
    else:
        print(text, end="")
    return EXIT_OK if report.converged else EXIT_UNCONVERGED


def cmd_simulate(args) -> int:
    loaded = _validated(args)
    if loaded is None:
        return EXIT_INVALID
    model, dta = loaded
    graph = build_region_graph(model, dta)
    dec = decompose(graph, model, dta)
    if args.burn_in is None:
        burn_in = min(10 * len(graph.vertices), args.steps - 1)
    else:
        burn_in = args.burn_in
    cfg = SimConfig(args.seed, args.runs, args.steps, burn_in)
    out = {
        "discrete": estimate_discrete(model, dta, cfg).to_json(),
        "timed": estimate_timed(model, dta, cfg).to_json(),
        "reach": estimate_reach(model, dta, dec, cfg).to_json(),
    }
    text = modelio.dump_json(out)
    if args.out:
        _write(text, args.out)
    else:
        print(text, end="")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "validate": cmd_validate,
        "regions": cmd_regions,
        "analyze": cmd_analyze,
        "simulate": cmd_simulate,
    }
    try:
        return handlers[args.command](args)
    except modelio.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _WriteFailure as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConvergenceError, InternalError, DegenerateInputError, RuntimeError) as exc:
        print(f"internal failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
