"""Domain types for bounded multi-valued decision diagrams and their measures.

Everything here is an immutable value.  Correctness is kept as an exact
:class:`fractions.Fraction`; explainability lives on the integer grid
``0..GRID_MAX`` (two decimal digits, so ``e / 100`` is the normalised score).
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import ConsistencyError, InputError

Label = str
Target = Union[int, Label]

GRID_MAX = 100
GRID_BITS = 7


def grid_pred(e: int) -> int:
    return e - 1


def grid_succ(e: int) -> int:
    return e + 1


def interval_is_empty(low: int, high: int) -> bool:
    return low > high


# ---------------------------------------------------------------------------
# features and branchings


@dataclass(frozen=True)
class FeatureSpec:
    """Maps an input vector to a real number.

    ``projection`` and ``abs_projection`` read one column; ``affine`` is a dot
    product with ``coefficients`` plus ``offset``.
    """

    kind: str
    column: int | None = None
    coefficients: tuple[float, ...] = ()
    offset: float = 0.0

    def __post_init__(self):
        if self.kind in ("projection", "abs_projection"):
            if not isinstance(self.column, int) or self.column < 0:
                raise InputError(f"{self.kind} feature needs a non-negative column index")
        elif self.kind == "affine":
            if not self.coefficients:
                raise InputError("affine feature needs at least one coefficient")
            object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        else:
            raise InputError(f"unknown feature kind {self.kind!r}")

    @classmethod
    def projection(cls, column: int) -> "FeatureSpec":
        return cls("projection", column=column)

    @classmethod
    def abs_projection(cls, column: int) -> "FeatureSpec":
        return cls("abs_projection", column=column)

    @classmethod
    def affine(cls, coefficients: Sequence[float], offset: float = 0.0) -> "FeatureSpec":
        return cls("affine", coefficients=tuple(coefficients), offset=float(offset))

    def columns(self) -> tuple[int, ...]:
        if self.kind == "affine":
            return tuple(range(len(self.coefficients)))
        return (self.column,)

    def __call__(self, x: Sequence[float]) -> float:
        if self.kind == "affine":
            if len(x) != len(self.coefficients):
                raise InputError(
                    f"affine feature expects dimension {len(self.coefficients)}, got {len(x)}"
                )
            return math.fsum(c * v for c, v in zip(self.coefficients, x)) + self.offset
        if self.column >= len(x):
            raise InputError(f"feature reads column {self.column} of a {len(x)}-dimensional input")
        v = float(x[self.column])
        return abs(v) if self.kind == "abs_projection" else v

    def describe(self, names: Sequence[str] | None = None) -> str:
        def name(i):
            return names[i] if names and i < len(names) else f"x{i}"

        if self.kind == "projection":
            return name(self.column)
        if self.kind == "abs_projection":
            return f"|{name(self.column)}|"
        terms = " + ".join(f"{c:g}*{name(i)}" for i, c in enumerate(self.coefficients) if c)
        return f"{terms} + {self.offset:g}" if self.offset else terms


@dataclass(frozen=True)
class BranchingSpec:
    """Partition of the real line into branch indices.

    ``thresholds``: branch = number of cut-points <= value.
    ``categorical``: explicit value -> branch map with a default branch.
    """

    kind: str
    cuts: tuple[float, ...] = ()
    mapping: tuple[tuple[float, int], ...] = ()
    default: int = 0

    def __post_init__(self):
        if self.kind == "thresholds":
            cuts = tuple(float(c) for c in self.cuts)
            if any(b <= a for a, b in zip(cuts, cuts[1:])):
                raise InputError(f"threshold cut-points must be strictly increasing: {cuts}")
            object.__setattr__(self, "cuts", cuts)
        elif self.kind == "categorical":
            pairs = tuple(sorted((float(v), int(b)) for v, b in self.mapping))
            if len({v for v, _ in pairs}) != len(pairs):
                raise InputError("categorical branching maps a value twice")
            if any(b < 0 for _, b in pairs) or self.default < 0:
                raise InputError("categorical branches must be non-negative")
            object.__setattr__(self, "mapping", pairs)
        else:
            raise InputError(f"unknown branching kind {self.kind!r}")

    @classmethod
    def thresholds(cls, cuts: Iterable[float]) -> "BranchingSpec":
        return cls("thresholds", cuts=tuple(cuts))

    @classmethod
    def categorical(cls, mapping, default: int = 0) -> "BranchingSpec":
        items = mapping.items() if hasattr(mapping, "items") else mapping
        return cls("categorical", mapping=tuple(items), default=default)

    def min_arity(self) -> int:
        if self.kind == "thresholds":
            return len(self.cuts) + 1
        return max([b for _, b in self.mapping] + [self.default]) + 1

    def __call__(self, value: float) -> int:
        if self.kind == "thresholds":
            return bisect.bisect_right(self.cuts, value)
        for v, b in self.mapping:
            if v == value:
                return b
        return self.default

    def describe_branch(self, branch: int, feature: str) -> str:
        if self.kind == "thresholds":
            lo = self.cuts[branch - 1] if branch > 0 else None
            hi = self.cuts[branch] if branch < len(self.cuts) else None
            if lo is None and hi is None:
                return "any"
            if lo is None:
                return f"{feature} < {hi:g}"
            if hi is None:
                return f"{feature} >= {lo:g}"
            return f"{feature} in [{lo:g}, {hi:g})"
        values = [f"{v:g}" for v, b in self.mapping if b == branch]
        text = f"{feature} in {{{', '.join(values)}}}" if values else ""
        if branch == self.default:
            text = f"{text} or other" if text else "other"
        return text


@dataclass(frozen=True)
class Predicate:
    id: str
    feature: FeatureSpec
    branching: BranchingSpec
    arity: int
    weight: int = 0

    def __post_init__(self):
        if not isinstance(self.arity, int) or self.arity < 2:
            raise InputError(f"predicate {self.id!r}: arity must be >= 2, got {self.arity}")
        if self.branching.min_arity() > self.arity:
            raise InputError(
                f"predicate {self.id!r}: branching produces values >= arity {self.arity}"
            )
        if self.branching.kind == "thresholds" and self.branching.min_arity() != self.arity:
            raise InputError(
                f"predicate {self.id!r}: {len(self.branching.cuts)} cut-points give arity "
                f"{self.branching.min_arity()}, declared {self.arity}"
            )
        _check_grid_weight(self.weight, f"predicate {self.id!r} weight")

    @classmethod
    def make(cls, id, feature, branching, weight=0, arity=None) -> "Predicate":
        return cls(id, feature, branching, arity or branching.min_arity(), weight)


def _check_grid_weight(w, what):
    if isinstance(w, bool) or not isinstance(w, int) or not 0 <= w <= GRID_MAX:
        raise InputError(f"{what} must be an integer in 0..{GRID_MAX}, got {w!r}")


# ---------------------------------------------------------------------------
# interpretation class


@dataclass(frozen=True)
class InterpretationClassSpec:
    """Bounded diagram class: predicates, labels, node bound and node rewards.

    ``unused_weights[i - 1]`` is the reward for leaving template slot ``i``
    unreachable.  The sum over slots of ``max(unused reward, best predicate
    weight)`` may not exceed 100, so every explainability value fits the
    seven-bit grid.
    """

    predicates: tuple[Predicate, ...]
    labels: tuple[Label, ...]
    node_bound: int
    unused_weights: tuple[int, ...]
    input_dim: int
    input_names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "predicates", tuple(self.predicates))
        object.__setattr__(self, "labels", tuple(self.labels))
        if isinstance(self.unused_weights, int):
            object.__setattr__(self, "unused_weights", (self.unused_weights,) * self.node_bound)
        object.__setattr__(self, "unused_weights", tuple(self.unused_weights))
        object.__setattr__(self, "input_names", tuple(self.input_names))
        if not self.predicates:
            raise InputError("at least one predicate is required")
        ids = [p.id for p in self.predicates]
        if len(set(ids)) != len(ids):
            raise InputError(f"duplicate predicate ids: {ids}")
        if not self.labels or len(set(self.labels)) != len(self.labels):
            raise InputError(f"labels must be non-empty and distinct: {self.labels}")
        if any(not isinstance(lab, str) for lab in self.labels):
            raise InputError("labels must be strings")
        if not isinstance(self.node_bound, int) or self.node_bound < 1:
            raise InputError(f"node bound must be >= 1, got {self.node_bound}")
        if len(self.unused_weights) != self.node_bound:
            raise InputError("one unused-node weight per template slot is required")
        for i, w in enumerate(self.unused_weights, 1):
            _check_grid_weight(w, f"unused weight of slot {i}")
        if self.input_names and len(self.input_names) != self.input_dim:
            raise InputError("input_names must match input_dim")
        for p in self.predicates:
            if max(p.feature.columns()) >= self.input_dim or (
                p.feature.kind == "affine" and len(p.feature.coefficients) != self.input_dim
            ):
                raise InputError(f"predicate {p.id!r} reads outside the {self.input_dim} inputs")
        best = max(p.weight for p in self.predicates)
        total = sum(max(u, best) for u in self.unused_weights)
        if total > GRID_MAX:
            raise InputError(
                f"sum over slots of max(unused weight, predicate weight) is {total} > {GRID_MAX}"
            )

    @property
    def cmax(self) -> int:
        return max(p.arity for p in self.predicates)

    def predicate(self, pid: str) -> Predicate:
        for p in self.predicates:
            if p.id == pid:
                return p
        raise InputError(f"unknown predicate {pid!r}")

    def unused_weight(self, slot: int) -> int:
        return self.unused_weights[slot - 1]


# ---------------------------------------------------------------------------
# samples


@dataclass(frozen=True)
class Sample:
    input: tuple[float, ...]
    label: Label
    weight: int = 1

    def __post_init__(self):
        object.__setattr__(self, "input", tuple(float(v) for v in self.input))
        if isinstance(self.weight, bool) or not isinstance(self.weight, int):
            raise InputError(f"sample weights must be integers, got {self.weight!r}")
        if self.weight < 1:
            raise InputError(f"sample weight must be >= 1, got {self.weight}")


def check_samples(spec: InterpretationClassSpec, samples: Sequence[Sample]) -> tuple[Sample, ...]:
    samples = tuple(samples)
    if not samples:
        raise InputError("the sample set is empty")
    for k, s in enumerate(samples):
        if len(s.input) != spec.input_dim:
            raise InputError(
                f"sample {k} has dimension {len(s.input)}, expected {spec.input_dim}"
            )
        if s.label not in spec.labels:
            raise InputError(f"sample {k} has unknown label {s.label!r}")
    return samples


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True)
class Node:
    """Internal node at template ``slot``; ``targets[c]`` is the successor on branch ``c``.

    A target is either a later slot number (``int``) or a leaf label (``str``).
    """

    slot: int
    predicate: Predicate
    targets: tuple[Target, ...]


@dataclass(frozen=True)
class DecisionDiagram:
    nodes: tuple[Node, ...]
    _by_slot: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        nodes = tuple(sorted(self.nodes, key=lambda nd: nd.slot))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "_by_slot", {nd.slot: nd for nd in nodes})

    @property
    def root(self) -> Node:
        return self.nodes[0]

    def node(self, slot: int) -> Node:
        return self._by_slot[slot]

    def has_slot(self, slot: int) -> bool:
        return slot in self._by_slot

    def reachable_slots(self) -> frozenset[int]:
        seen = set()
        stack = [self.root.slot] if self.nodes else []
        while stack:
            s = stack.pop()
            if s in seen or s not in self._by_slot:
                continue
            seen.add(s)
            stack.extend(t for t in self._by_slot[s].targets if isinstance(t, int))
        return frozenset(seen)

    def pruned(self) -> "DecisionDiagram":
        keep = self.reachable_slots()
        return DecisionDiagram(tuple(nd for nd in self.nodes if nd.slot in keep))

    def __len__(self):
        return len(self.nodes)


def constant_diagram(spec: InterpretationClassSpec, label: Label, predicate: Predicate | None = None):
    p = predicate or spec.predicates[0]
    return DecisionDiagram((Node(1, p, (label,) * p.arity),))


# ---------------------------------------------------------------------------
# evaluation


def evaluate_predicate(p: Predicate, x: Sequence[float]) -> int:
    b = p.branching(p.feature(x))
    if not 0 <= b < p.arity:
        raise ConsistencyError(f"predicate {p.id!r} produced branch {b} outside arity {p.arity}")
    return b


def diagram_path(d: DecisionDiagram, x: Sequence[float]) -> tuple[list[int], Label]:
    """Slots visited from the root and the leaf label reached."""
    node = d.root
    visited = [node.slot]
    while True:
        t = node.targets[evaluate_predicate(node.predicate, x)]
        if isinstance(t, str):
            return visited, t
        if t <= node.slot:
            raise ConsistencyError(f"backward edge {node.slot} -> {t}")
        node = d.node(t)
        visited.append(t)


def evaluate_diagram(d: DecisionDiagram, x: Sequence[float]) -> Label:
    return diagram_path(d, x)[1]


def correctness_measure(d: DecisionDiagram, samples: Sequence[Sample]) -> Fraction:
    if not samples:
        raise InputError("correctness is undefined on an empty sample set")
    total = sum(s.weight for s in samples)
    agree = sum(s.weight for s in samples if evaluate_diagram(d, s.input) == s.label)
    return Fraction(agree, total)


def explainability_measure(d: DecisionDiagram, spec: InterpretationClassSpec) -> int:
    """Per template slot: the predicate weight if reachable, else the unused reward."""
    used = d.reachable_slots()
    e = 0
    for slot in range(1, spec.node_bound + 1):
        e += d.node(slot).predicate.weight if slot in used else spec.unused_weight(slot)
    return e


# ---------------------------------------------------------------------------
# measures and dominance


@dataclass(frozen=True, order=True)
class MeasurePair:
    correctness: Fraction
    explainability: int

    def __post_init__(self):
        c = Fraction(self.correctness)
        if not 0 <= c <= 1:
            raise InputError(f"correctness {c} outside [0, 1]")
        object.__setattr__(self, "correctness", c)

    @property
    def e_normalized(self) -> float:
        return self.explainability / GRID_MAX

    def __str__(self):
        return f"(c={float(self.correctness):.4f}, e={self.e_normalized:.2f})"


def measures(d: DecisionDiagram, spec: InterpretationClassSpec, samples: Sequence[Sample]) -> MeasurePair:
    return MeasurePair(correctness_measure(d, samples), explainability_measure(d, spec))


def preceq(a: MeasurePair, b: MeasurePair) -> bool:
    return a.correctness <= b.correctness and a.explainability <= b.explainability


def dominates(a: MeasurePair, b: MeasurePair) -> bool:
    """True iff ``a`` strictly dominates ``b``."""
    return preceq(b, a) and a != b


def max_preceq(pairs: Iterable[MeasurePair]) -> set[MeasurePair]:
    # sort by correctness descending, explainability descending, then sweep
    ordered = sorted(set(pairs), key=lambda m: (-m.correctness, -m.explainability))
    front = set()
    best_e = -1
    for m in ordered:
        if m.explainability > best_e:
            front.add(m)
            best_e = m.explainability
    return front


# ---------------------------------------------------------------------------
# validation


def validate_diagram(d: DecisionDiagram, spec: InterpretationClassSpec) -> list[str]:
    """Every invariant violation of ``d`` within ``spec``; an empty list means valid."""
    problems = []
    if not d.nodes:
        return ["diagram has no nodes"]
    if d.root.slot != 1:
        problems.append(f"root must be slot 1, found slot {d.root.slot}")
    slots = [nd.slot for nd in d.nodes]
    if len(set(slots)) != len(slots):
        problems.append(f"duplicate slots {slots}")
    known = {p.id: p for p in spec.predicates}
    for nd in d.nodes:
        if not 1 <= nd.slot <= spec.node_bound:
            problems.append(f"slot {nd.slot} outside 1..{spec.node_bound}")
        if known.get(nd.predicate.id) != nd.predicate:
            problems.append(f"slot {nd.slot}: predicate {nd.predicate.id!r} not in the class")
        arity = nd.predicate.arity
        if len(nd.targets) < arity:
            problems.append(f"slot {nd.slot}: {len(nd.targets)} transitions for arity {arity}")
        for c, t in enumerate(nd.targets):
            if c >= arity:
                problems.append(f"slot {nd.slot}: branch {c} >= arity {arity} carries a transition")
            elif isinstance(t, bool) or not isinstance(t, (int, str)):
                problems.append(f"slot {nd.slot}: branch {c} has invalid target {t!r}")
            elif isinstance(t, str):
                if t not in spec.labels:
                    problems.append(f"slot {nd.slot}: branch {c} targets unknown label {t!r}")
            elif t <= nd.slot:
                problems.append(f"slot {nd.slot}: branch {c} targets slot {t} (not later)")
            elif not d.has_slot(t):
                problems.append(f"slot {nd.slot}: branch {c} targets missing slot {t}")
    return problems
