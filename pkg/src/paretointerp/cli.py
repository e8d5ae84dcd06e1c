"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 black-box error,
3 solver error, 4 no interpretation in the requested interval.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .blackbox import (class_size_upper_bound, draw_samples, load_samples_csv, pac_sample_size,
                       write_samples_csv)
from .config import Config, load_config
from .decode import diagram_from_dict, diagram_to_dict, to_dot
from .encoder import build_full
from .errors import ConsistencyError, InputError, OracleError, SolverError
from .explorer import ExplorationAborted, explore_poi, format_report, front_report, quint_synt
from .maxsat import SOLVER_ENV, get_backend
from .model import GRID_MAX, measures

log = logging.getLogger("paretointerp")

EXIT_OK, EXIT_USAGE, EXIT_ORACLE, EXIT_SOLVER, EXIT_NONE = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags, which is reserved for oracle failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction_dict(c: Fraction) -> dict:
    return {"fraction": f"{c.numerator}/{c.denominator}", "decimal": round(float(c), 6)}


def _pac_size(cfg: Config, args) -> tuple[int, int]:
    bound = class_size_upper_bound(cfg.spec)
    agnostic = True if getattr(args, "agnostic", False) else None
    return bound, pac_sample_size(cfg.pac(args.delta, args.epsilon, agnostic, bound))


def _samples(cfg: Config, args):
    """Samples from ``--samples`` or drawn from the configured black box."""
    if args.samples:
        return load_samples_csv(args.samples, cfg.oracle), {"source": "file", "path": args.samples}
    if cfg.oracle is None:
        raise InputError("no --samples file given and the config has no oracle section")
    m = args.num_samples or _pac_size(cfg, args)[1]
    info = {"source": "oracle", "seed": args.seed, "m": m}
    return draw_samples(cfg.oracle, m, seed=args.seed), info


def _write_diagram(path: Path, d, cfg: Config, extra: dict | None = None):
    data = {"config": os.path.abspath(cfg.path) if cfg.path else None, **diagram_to_dict(d)}
    if extra:
        data.update(extra)
    path.write_text(json.dumps(data, indent=2) + "\n")


def cmd_sample_size(args) -> int:
    cfg = load_config(args.config)
    bound, m = _pac_size(cfg, args)
    p = cfg.pac(args.delta, args.epsilon, True if args.agnostic else None, bound)
    mode = "realizable" if p.realizable else "agnostic"
    print(f"class size bound |E| <= {bound}")
    print(f"{mode} sample size for delta={p.delta:g}, epsilon={p.epsilon:g}: m = {m}")
    return EXIT_OK


def cmd_explore(args) -> int:
    cfg = load_config(args.config)
    samples, info = _samples(cfg, args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_samples_csv(samples, out / "samples.csv", cfg.spec.input_names)
    backend = get_backend(args.solver)

    def progress(found):
        log.info("found %s", found.measures)

    try:
        front = explore_poi(cfg.spec, samples, backend, order=args.order, on_solve=progress)
    except ExplorationAborted as exc:
        exc.partial.write_trace(out / "trace.jsonl")
        print(f"error: {exc}; partial trace in {out / 'trace.jsonl'}", file=sys.stderr)
        return EXIT_SOLVER
    doc = {
        "config": os.path.abspath(cfg.path) if cfg.path else None,
        "name": cfg.name,
        "samples": {**info, "count": len(samples), "file": "samples.csv"},
        "solver": args.solver or os.environ.get(SOLVER_ENV, "builtin"),
        **front.to_dict(),
    }
    (out / "front.json").write_text(json.dumps(doc, indent=2) + "\n")
    for k, e in enumerate(front.sorted_entries()):
        title = f"c={float(e.measures.correctness):.4f}, e={e.measures.e_normalized:.2f}"
        (out / f"diagram-{k}.dot").write_text(to_dot(e.diagram.pruned(), cfg.spec, title))
        _write_diagram(out / f"diagram-{k}.json", e.diagram, cfg)
    front.write_trace(out / "trace.jsonl")
    report = front_report(front)
    table = format_report(report)
    (out / "summary.txt").write_text(table + "\n")
    print(f"{cfg.name}: {len(samples)} samples, front written to {out}")
    for k, e in enumerate(front.sorted_entries()):
        print(f"  [{k}] {e.measures}  nodes={len(e.diagram)}")
    print(table)
    return EXIT_OK


def cmd_synth(args) -> int:
    cfg = load_config(args.config)
    for name in ("e_low", "e_high"):
        v = getattr(args, name)
        if not 0 <= v <= GRID_MAX:
            raise InputError(f"--{name.replace('_', '-')} must be in 0..{GRID_MAX}, got {v}")
    samples, _ = _samples(cfg, args)
    if args.wcnf:
        bounds = None if (args.e_low, args.e_high) == (0, GRID_MAX) else (args.e_low, args.e_high)
        if args.e_low <= args.e_high:
            build_full(cfg.spec, samples, bounds).instance.write(args.wcnf)
    found = quint_synt(cfg.spec, samples, args.e_low, args.e_high, get_backend(args.solver))
    if found is None:
        print(f"no interpretation with explainability in [{args.e_low}, {args.e_high}]")
        return EXIT_NONE
    m = found.measures
    print(f"correctness {m.correctness} ({float(m.correctness):.6f}), "
          f"explainability {m.explainability} ({m.e_normalized:.2f})")
    print(json.dumps(diagram_to_dict(found.diagram)))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_diagram(out / "diagram.json", found.diagram, cfg)
        (out / "diagram.dot").write_text(to_dot(found.diagram.pruned(), cfg.spec, str(m)))
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        data = json.loads(Path(args.diagram).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read diagram {args.diagram}: {exc}") from exc
    config_path = args.config or data.get("config")
    if not config_path:
        raise InputError("the diagram file names no config; pass --config")
    cfg = load_config(config_path)
    if "entries" in data:
        entries = data["entries"]
        if not 0 <= args.entry < len(entries):
            raise InputError(f"--entry {args.entry} out of range (front has {len(entries)} entries)")
        data = entries[args.entry]["diagram"]
    d = diagram_from_dict(data, cfg.spec)
    samples = load_samples_csv(args.samples, cfg.oracle)
    m = measures(d, cfg.spec, samples)
    print(json.dumps({"correctness": _fraction_dict(m.correctness),
                      "explainability": {"grid": m.explainability, "normalized": m.e_normalized}}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paretointerp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def pac_flags(p):
        p.add_argument("--delta", type=float, help="confidence parameter (default from config)")
        p.add_argument("--epsilon", type=float, help="error parameter (default from config)")
        p.add_argument("--agnostic", action="store_true", help="use the agnostic bound")

    def sample_flags(p):
        p.add_argument("--samples", help="CSV of inputs with the output in the last column")
        p.add_argument("--seed", type=int, default=0, help="seed for drawing samples")
        p.add_argument("--num-samples", type=int, help="sample count (default: PAC bound)")
        pac_flags(p)
        p.add_argument("--solver", help=f"builtin, builtin-binary, builtin-linear or a command "
                                        f"(default: ${SOLVER_ENV} or builtin)")

    p = sub.add_parser("sample-size", help="PAC sample size for a config")
    p.add_argument("config")
    pac_flags(p)
    p.set_defaults(func=cmd_sample_size)

    p = sub.add_parser("explore", help="enumerate the Pareto front")
    p.add_argument("config")
    sample_flags(p)
    p.add_argument("--order", choices=("lifo", "fifo"), default="lifo")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("synth", help="one Pareto-optimal diagram in an explainability interval")
    p.add_argument("config")
    p.add_argument("--e-low", type=int, default=0, help="lower bound on the 0..100 grid")
    p.add_argument("--e-high", type=int, default=GRID_MAX, help="upper bound on the 0..100 grid")
    sample_flags(p)
    p.add_argument("--out", help="directory for diagram.json and diagram.dot")
    p.add_argument("--wcnf", help="also write the MaxSAT instance to this path")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("eval", help="measures of a saved diagram on a sample file")
    p.add_argument("diagram", help="diagram JSON or front.json")
    p.add_argument("samples", help="sample CSV")
    p.add_argument("--config", help="config (default: the one recorded in the diagram file)")
    p.add_argument("--entry", type=int, default=0, help="front entry index when given front.json")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors, --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OracleError as exc:
        print(f"black-box error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (SolverError, ConsistencyError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
