"""Single Pareto-optimal synthesis in an explainability interval, and full front exploration.

:func:`quint_synt` solves one MaxSAT instance whose objective adds the
satisfied sample weights to the explainability rewards; any optimum of that
sum is Pareto-optimal among diagrams whose explainability lies in the
requested interval.

:func:`explore_poi` runs the region-splitting worklist.  A region is a triple
``(e_low, e_high, c_floor)``: the explainability interval still to search and
the correctness of a known Pareto point at ``e > e_high``.  After a solve
returning ``(c, e)``:

* ``c > c_floor`` -- a new Pareto point; search ``[e_low, e - 1]`` for better
  correctness with floor ``c`` and ``[e + 1, e_high]`` with the old floor;
* ``c <= c_floor`` -- dominated by the known point; everything in
  ``[e, e_high]`` is dominated too, so only ``[e_low, e - 1]`` remains;
* no diagram in the interval -- the region is dropped.

Empty intervals are never pushed.
"""
from __future__ import annotations

import json
import statistics
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .decode import decode_assignment, diagram_to_dict, verify_measures
from .encoder import build_full
from .errors import ConsistencyError, InputError, SolverError
from .maxsat import Backend, get_backend
from .model import (GRID_MAX, DecisionDiagram, InterpretationClassSpec, MeasurePair, Sample,
                    check_samples, grid_pred, grid_succ, interval_is_empty, measures)


@dataclass(frozen=True)
class Region:
    e_low: int
    e_high: int
    c_floor: Fraction = Fraction(0)

    @property
    def empty(self) -> bool:
        return interval_is_empty(self.e_low, self.e_high)

    def to_dict(self) -> dict:
        return {"e_low": self.e_low, "e_high": self.e_high, "c_floor": str(self.c_floor)}


@dataclass
class Synthesis:
    diagram: DecisionDiagram
    measures: MeasurePair
    by_family: dict
    optimum: int
    seconds: float = 0.0


def quint_synt(spec: InterpretationClassSpec, samples: Sequence[Sample], e_low: int, e_high: int,
               backend: Backend | str | None = None,
               on_solve: Callable[[Synthesis], None] | None = None) -> Synthesis | None:
    """A Pareto-optimal diagram with explainability in ``[e_low, e_high]``, or ``None``.

    The decoded diagram's measures are recomputed and must equal the
    per-family satisfied soft weights; a mismatch raises
    :class:`ConsistencyError`.
    """
    if not (0 <= e_low <= GRID_MAX and 0 <= e_high <= GRID_MAX):
        raise InputError(f"bounds [{e_low}, {e_high}] must lie in 0..{GRID_MAX}")
    if interval_is_empty(e_low, e_high):
        return None
    samples = check_samples(spec, samples)
    solve = get_backend(backend)
    # the full grid is vacuous by the config invariant, so skip the adder there
    bounds = None if (e_low, e_high) == (0, GRID_MAX) else (e_low, e_high)
    enc = build_full(spec, samples, bounds)
    start = time.perf_counter()
    outcome = solve(enc.instance)
    elapsed = time.perf_counter() - start
    if not outcome.optimal:
        return None
    by_family = enc.satisfied_by_family(outcome.model)
    d = decode_assignment(enc.pool, outcome.model, spec)
    problems = verify_measures(d, samples, spec, by_family)
    m = measures(d, spec, samples)
    if not e_low <= m.explainability <= e_high:
        problems.append(f"explainability {m.explainability} outside [{e_low}, {e_high}]")
    if problems:
        raise ConsistencyError("; ".join(problems))
    result = Synthesis(d, m, by_family, outcome.optimum, elapsed)
    if on_solve is not None:
        on_solve(result)
    return result


@dataclass
class FrontEntry:
    diagram: DecisionDiagram
    measures: MeasurePair
    region: Region
    pop: int


@dataclass
class ParetoFront:
    entries: list[FrontEntry] = field(default_factory=list)
    trace: list[dict] = field(default_factory=list)

    def pairs(self) -> set[MeasurePair]:
        return {e.measures for e in self.entries}

    @property
    def pops(self) -> int:
        return len(self.trace)

    def sorted_entries(self) -> list[FrontEntry]:
        """Entries by increasing correctness (hence decreasing explainability)."""
        return sorted(self.entries, key=lambda e: (e.measures.correctness, -e.measures.explainability))

    def to_dict(self) -> dict:
        out = []
        for k, e in enumerate(self.sorted_entries()):
            c = e.measures.correctness
            out.append({
                "index": k,
                "correctness": {"fraction": f"{c.numerator}/{c.denominator}",
                                "decimal": round(float(c), 6)},
                "explainability": {"grid": e.measures.explainability,
                                   "normalized": e.measures.e_normalized},
                "diagram": diagram_to_dict(e.diagram),
                "region": e.region.to_dict(),
                "found_at_pop": e.pop,
            })
        return {"entries": out, "PO": len(self.entries), "TNP": self.pops}

    def write_trace(self, path):
        with open(path, "w") as fh:
            for rec in self.trace:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")


class ExplorationAborted(SolverError):
    """A backend failure interrupted the exploration; ``partial`` holds what was found."""

    def __init__(self, message, partial: ParetoFront):
        super().__init__(message)
        self.partial = partial


MAX_POPS = 2 * (GRID_MAX + 1)


def explore_poi(spec: InterpretationClassSpec, samples: Sequence[Sample],
                backend: Backend | str | None = None, order: str = "lifo",
                max_pops: int = MAX_POPS,
                on_solve: Callable[[Synthesis], None] | None = None) -> ParetoFront:
    """Minimal representative set of Pareto-optimal diagrams for ``samples``."""
    if order not in ("lifo", "fifo"):
        raise InputError(f"worklist order must be 'lifo' or 'fifo', got {order!r}")
    samples = check_samples(spec, samples)
    solve = get_backend(backend)
    front = ParetoFront()
    work = deque([Region(0, GRID_MAX, Fraction(0))])
    while work:
        region = work.pop() if order == "lifo" else work.popleft()
        if front.pops >= max_pops:
            raise ConsistencyError(f"exploration exceeded {max_pops} worklist pops")
        rec = {"pop": front.pops, "region": region.to_dict()}
        start = time.perf_counter()
        try:
            found = quint_synt(spec, samples, region.e_low, region.e_high, solve, on_solve)
        except SolverError as exc:
            rec.update(outcome="error", error=str(exc))
            front.trace.append(rec)
            raise ExplorationAborted(f"backend failed at pop {rec['pop']}: {exc}", front) from exc
        rec["seconds"] = time.perf_counter() - start
        pushes = []
        if found is None:
            rec["outcome"] = "none"
        else:
            c, e = found.measures.correctness, found.measures.explainability
            rec["measures"] = {"c": str(c), "e": e}
            if c > region.c_floor:
                rec["outcome"] = "pareto"
                front.entries.append(FrontEntry(found.diagram, found.measures, region, rec["pop"]))
                pushes = [Region(region.e_low, grid_pred(e), c),
                          Region(grid_succ(e), region.e_high, region.c_floor)]
            else:
                rec["outcome"] = "dominated"
                pushes = [Region(region.e_low, grid_pred(e), region.c_floor)]
        pushes = [r for r in pushes if not r.empty]
        work.extend(pushes)
        rec["pushes"] = [r.to_dict() for r in pushes]
        front.trace.append(rec)
    return front


def front_report(front: ParetoFront) -> dict:
    """PO/TNP counts and solve-time statistics in the shape of a results table row."""
    times = [r["seconds"] for r in front.trace if "seconds" in r]
    found = [r["seconds"] for r in front.trace if r.get("outcome") in ("pareto", "dominated")]
    unsat = [r["seconds"] for r in front.trace if r.get("outcome") == "none"]
    report = {"PO": len(front.entries), "TNP": front.pops}
    for name, vals in (("solve", found or times), ("unsat", unsat)):
        report[f"{name}_min"] = min(vals) if vals else None
        report[f"{name}_max"] = max(vals) if vals else None
        report[f"{name}_median"] = statistics.median(vals) if vals else None
    return report


def format_report(report: dict) -> str:
    def fmt(v):
        return "-" if v is None else f"{v:.3f}"

    return (
        f"{'PO':>4} {'TNP':>5} {'min (s)':>9} {'max (s)':>9} {'median (s)':>11} {'unsat max (s)':>14}\n"
        f"{report['PO']:>4} {report['TNP']:>5} {fmt(report['solve_min']):>9} "
        f"{fmt(report['solve_max']):>9} {fmt(report['solve_median']):>11} "
        f"{fmt(report['unsat_max']):>14}"
    )
