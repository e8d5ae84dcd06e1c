"""Exhaustive enumeration of small interpretation classes and their exact Pareto fronts.

This is the ground truth the solver pipeline is tested against, so it shares
nothing with the encoder beyond the model types.  Diagrams are full
templates: every slot carries a predicate and targets, reachable or not,
which is exactly what the explainability soft clauses score.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .blackbox import class_size_upper_bound
from .errors import InputError
from .model import (DecisionDiagram, InterpretationClassSpec, MeasurePair, Node, Sample,
                    check_samples, evaluate_predicate, max_preceq, measures)

ENUMERATION_LIMIT = 10 ** 7


def _targets(spec: InterpretationClassSpec, i: int) -> list:
    return list(range(i + 1, spec.node_bound + 1)) + list(spec.labels)


def slot_choices(spec: InterpretationClassSpec, i: int) -> list[Node]:
    """Every node slot ``i`` can hold."""
    out = []
    for p in spec.predicates:
        for targets in product(_targets(spec, i), repeat=p.arity):
            out.append(Node(i, p, targets))
    return out


def count_class(spec: InterpretationClassSpec) -> int:
    """Exact class size: prod over slots of sum over predicates of targets ** arity."""
    n, L = spec.node_bound, len(spec.labels)
    out = 1
    for i in range(1, n + 1):
        out *= sum((n - i + L) ** p.arity for p in spec.predicates)
    return out


def _guard(spec: InterpretationClassSpec):
    bound = class_size_upper_bound(spec)
    if bound > ENUMERATION_LIMIT:
        raise InputError(f"class too large to enumerate (upper bound {bound} > {ENUMERATION_LIMIT})")


def enumerate_class(spec: InterpretationClassSpec) -> Iterator[DecisionDiagram]:
    """Every syntactically valid full-template diagram, each exactly once."""
    _guard(spec)
    per_slot = [slot_choices(spec, i) for i in range(1, spec.node_bound + 1)]
    for nodes in product(*per_slot):
        yield DecisionDiagram(nodes)


def _naive_table(spec, samples) -> dict[MeasurePair, DecisionDiagram]:
    table: dict[MeasurePair, DecisionDiagram] = {}
    for d in enumerate_class(spec):
        table.setdefault(measures(d, spec, samples), d)
    return table


def _vectorized_table(spec, samples) -> dict[MeasurePair, DecisionDiagram]:
    """Same table as the naive sweep, with the root slot's choices evaluated in numpy.

    For each assignment of slots ``2..n`` the value vector of every slot is
    computed bottom-up; then all root choices for one predicate are evaluated
    at once by fancy indexing.  Reachability is tracked as bitmasks over
    slots ``2..n``.
    """
    n = spec.node_bound
    S = len(samples)
    labels = list(spec.labels)
    y = np.array([labels.index(s.label) for s in samples])
    w = np.array([s.weight for s in samples], dtype=np.int64)
    total = int(w.sum())
    branch = {p.id: np.array([evaluate_predicate(p, s.input) for s in samples])
              for p in spec.predicates}
    cols = np.arange(S)

    # rows of the value matrix: slots 2..n, then the labels
    def row(t):
        return t - 2 if isinstance(t, int) else n - 1 + labels.index(t)

    nrows = n - 1 + len(labels)
    V = np.zeros((nrows, S), dtype=np.int64)
    for k in range(len(labels)):
        V[n - 1 + k] = k
    root_tables = []
    for p in spec.predicates:
        tuples = list(product(_targets(spec, 1), repeat=p.arity))
        T = np.array([[row(t) for t in tp] for tp in tuples], dtype=np.int64)
        root_tables.append((p, tuples, T))

    table: dict[MeasurePair, DecisionDiagram] = {}
    suffix_slots = [slot_choices(spec, i) for i in range(n, 1, -1)]
    masks = np.zeros(nrows, dtype=np.int64)
    for suffix in product(*suffix_slots):
        # suffix is ordered slot n, n-1, ..., 2
        for nd in suffix:
            b = branch[nd.predicate.id]
            tr = np.array([row(t) for t in nd.targets])
            V[nd.slot - 2] = V[tr[b], cols]
            m = 1 << (nd.slot - 2)
            for t in nd.targets:
                if isinstance(t, int):
                    m |= int(masks[t - 2])
            masks[nd.slot - 2] = m
        by_slot = {nd.slot: nd for nd in suffix}
        e_of_mask = np.zeros(1 << max(n - 1, 0), dtype=np.int64)
        for mask in range(len(e_of_mask)):
            e_of_mask[mask] = sum(
                by_slot[j].predicate.weight if mask >> (j - 2) & 1 else spec.unused_weight(j)
                for j in range(2, n + 1)
            )
        for p, tuples, T in root_tables:
            out = V[T[:, branch[p.id]], cols]  # (choices, samples)
            agree = (out == y) @ w
            used = np.bitwise_or.reduce(masks[T], axis=1)
            e = p.weight + e_of_mask[used]
            keys = agree * 128 + e
            uniq, first = np.unique(keys, return_index=True)
            for key, k in zip(uniq.tolist(), first.tolist()):
                pair = MeasurePair(Fraction(key >> 7, total), key & 127)
                if pair not in table:
                    table[pair] = DecisionDiagram((Node(1, p, tuples[k]),) + tuple(suffix))
    return table


def measure_table(spec: InterpretationClassSpec, samples: Sequence[Sample],
                  method: str = "vectorized") -> dict[MeasurePair, DecisionDiagram]:
    """Every achievable measure pair in the class, with one witness diagram each."""
    samples = check_samples(spec, samples)
    _guard(spec)
    if method == "naive":
        return _naive_table(spec, samples)
    if method == "vectorized":
        return _vectorized_table(spec, samples)
    raise InputError(f"unknown enumeration method {method!r}")


def exact_front(spec: InterpretationClassSpec, samples: Sequence[Sample],
                method: str = "vectorized") -> dict[MeasurePair, DecisionDiagram]:
    """The maximal measure pairs of the class with a witness diagram for each."""
    table = measure_table(spec, samples, method)
    return {m: table[m] for m in max_preceq(table)}


def best_correctness_at(table: dict[MeasurePair, DecisionDiagram]) -> dict[int, Fraction]:
    """Highest achievable correctness for every achievable explainability value."""
    best: dict[int, Fraction] = {}
    for m in table:
        if m.correctness > best.get(m.explainability, Fraction(-1)):
            best[m.explainability] = m.correctness
    return best
