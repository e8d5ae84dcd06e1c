"""Turn MaxSAT models back into diagrams, check their measures, render them."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .cnf import VarPool
from .encoder import CORRECTNESS, EXPLAINABILITY, slot_targets
from .errors import ConsistencyError, InputError
from .model import (DecisionDiagram, InterpretationClassSpec, Node, Sample, correctness_measure,
                    explainability_measure, validate_diagram)


def decode_assignment(pool: VarPool, model, spec: InterpretationClassSpec,
                      prune: bool = True) -> DecisionDiagram:
    """Read ``lam``/``tau`` into a diagram; drop unreachable slots unless ``prune`` is off."""
    nodes = []
    for i in range(1, spec.node_bound + 1):
        chosen = [p for p in spec.predicates if model[pool.lam(i, p.id)]]
        if len(chosen) != 1:
            raise ConsistencyError(f"slot {i} has {len(chosen)} predicates in the model")
        p = chosen[0]
        targets = []
        for c in range(p.arity):
            hits = [j for j in slot_targets(spec, i) if model[pool.tau(i, c, j)]]
            if len(hits) != 1:
                raise ConsistencyError(f"slot {i} branch {c} has {len(hits)} targets")
            targets.append(hits[0])
        nodes.append(Node(i, p, tuple(targets)))
    d = DecisionDiagram(tuple(nodes))
    reach = d.reachable_slots()
    for i in range(1, spec.node_bound + 1):
        if bool(model[pool.used(i)]) != (i in reach):
            raise ConsistencyError(f"used[{i}] disagrees with reachability")
    if prune:
        d = d.pruned()
    problems = validate_diagram(d, spec)
    if problems:
        raise ConsistencyError("decoded diagram is invalid: " + "; ".join(problems))
    return d


def verify_measures(d: DecisionDiagram, samples: Sequence[Sample], spec: InterpretationClassSpec,
                    by_family: dict[str, int]) -> list[str]:
    """Compare diagram measures against per-family satisfied soft weight; [] means equal."""
    problems = []
    total = sum(s.weight for s in samples)
    c = correctness_measure(d, samples)
    c_solver = Fraction(by_family.get(CORRECTNESS, -1), total)
    if c != c_solver:
        problems.append(f"correctness {c} from the diagram, {c_solver} from the soft clauses")
    e = explainability_measure(d, spec)
    if e != by_family.get(EXPLAINABILITY):
        problems.append(
            f"explainability {e} from the diagram, {by_family.get(EXPLAINABILITY)} from the soft clauses"
        )
    return problems


# ---------------------------------------------------------------------------
# serialisation


def diagram_to_dict(d: DecisionDiagram) -> dict:
    return {
        "nodes": [
            {"slot": nd.slot, "predicate": nd.predicate.id, "targets": list(nd.targets)}
            for nd in d.nodes
        ]
    }


def diagram_from_dict(data: dict, spec: InterpretationClassSpec) -> DecisionDiagram:
    try:
        nodes = tuple(
            Node(int(nd["slot"]), spec.predicate(nd["predicate"]), tuple(nd["targets"]))
            for nd in data["nodes"]
        )
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed diagram description: {exc}") from exc
    d = DecisionDiagram(nodes)
    problems = validate_diagram(d, spec)
    if problems:
        raise InputError("invalid diagram: " + "; ".join(problems))
    return d


def to_dot(d: DecisionDiagram, spec: InterpretationClassSpec, title: str | None = None) -> str:
    """Graphviz source: diamond decision nodes, box leaves, edges labelled by branch ranges."""
    names = spec.input_names or None
    lines = ["digraph interpretation {", "  rankdir=TB;"]
    if title:
        lines.append(f'  label="{title}"; labelloc=t;')
    for nd in d.nodes:
        lines.append(f'  n{nd.slot} [shape=diamond, label="{nd.predicate.id}"];')
    for lab in spec.labels:
        if any(t == lab for nd in d.nodes for t in nd.targets):
            lines.append(f'  "leaf_{lab}" [shape=box, style=rounded, label="{lab}"];')
    for nd in d.nodes:
        fname = nd.predicate.feature.describe(names)
        grouped: dict = {}
        for c, t in enumerate(nd.targets):
            grouped.setdefault(t, []).append(nd.predicate.branching.describe_branch(c, fname))
        for t, texts in grouped.items():
            dst = f"n{t}" if isinstance(t, int) else f'"leaf_{t}"'
            label = "\\n".join(texts).replace('"', "'")
            lines.append(f'  n{nd.slot} -> {dst} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
