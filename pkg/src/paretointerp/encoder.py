"""Weighted MaxSAT encoding of bounded multi-valued decision-diagram synthesis.

Variable families (all registered in a :class:`~paretointerp.cnf.VarPool`):

``lam[i, p]``        slot ``i`` is assigned predicate ``p``
``tau[i, c, j]``     branch ``c`` of slot ``i`` goes to slot ``j > i`` or to label ``j``
``match[i, s]``      the sub-diagram rooted at ``i`` labels sample ``s`` correctly
``match[l, s]``      leaf ``l`` equals the label of sample ``s`` (fixed by unit clauses)
``used[i]``          slot ``i`` is reachable from the root
``lam_used[i, p]``   ``used[i] and lam[i, p]``
``reach[i', c, i]``  ``tau[i', c, i] and used[i']`` (reachability auxiliaries)
``weight_bits``      seven-bit words of the explainability terms (threshold part only)
``adder_bits``/``carry``/``smaller``/``larger``  adder and comparator internals

Soft clauses are units: ``match[1, s]`` with the sample weight, ``not used[i]``
with the slot's unused reward and ``lam_used[i, p]`` with the predicate
weight.  Zero-weight softs are omitted.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .circuits import Gates, const_word, greater_than, int_to_bits, less_than, ripple_add
from .cnf import Clause, VarPool, WcnfInstance
from .errors import InputError
from .model import (GRID_BITS, GRID_MAX, InterpretationClassSpec, Sample, check_samples,
                    evaluate_predicate)

CORRECTNESS = "correctness"
EXPLAINABILITY = "explainability"


def slot_targets(spec: InterpretationClassSpec, i: int) -> list:
    """Possible successors of slot ``i``: later slots, then every label."""
    return list(range(i + 1, spec.node_bound + 1)) + list(spec.labels)


def _exactly_one(lits: Sequence[int], guard: int | None = None) -> list[Clause]:
    pre = () if guard is None else (-guard,)
    out = [pre + tuple(lits)]
    out += [(-a, -b) for a, b in combinations(lits, 2)]
    return out


def encode_structure(spec: InterpretationClassSpec, pool: VarPool) -> list[Clause]:
    """Each slot has exactly one predicate and exactly one target per valid branch."""
    n, cmax = spec.node_bound, spec.cmax
    clauses: list[Clause] = []
    for i in range(1, n + 1):
        lams = [pool.var("lam", (i, p.id)) for p in spec.predicates]
        clauses += _exactly_one(lams)
        targets = slot_targets(spec, i)
        taus = {c: [pool.var("tau", (i, c, j)) for j in targets] for c in range(cmax)}
        for c in range(cmax):
            # at most one target per branch, whatever the predicate
            clauses += [(-a, -b) for a, b in combinations(taus[c], 2)]
        for p, lam in zip(spec.predicates, lams):
            for c in range(p.arity):
                clauses.append((-lam, *taus[c]))
            for c in range(p.arity, cmax):
                clauses += [(-lam, -t) for t in taus[c]]
    return clauses


def encode_samples(spec: InterpretationClassSpec, samples: Sequence[Sample],
                   pool: VarPool) -> list[Clause]:
    """Define ``match[i, s]`` bottom-up from the leaves.

    Given ``lam[i, p]`` and the constant branch ``c = p(s)``, the matching
    variable of slot ``i`` equals that of whichever target ``tau[i, c, j]``
    selects.  Because structure clauses force exactly one predicate and one
    target, the two clauses per ``(p, j)`` below define ``match[i, s]``
    completely without extra auxiliaries.
    """
    samples = check_samples(spec, samples)
    n = spec.node_bound
    clauses: list[Clause] = []
    for s, smp in enumerate(samples):
        for lab in spec.labels:
            m = pool.var("match", (lab, s))
            clauses.append((m,) if smp.label == lab else (-m,))
    for s, smp in enumerate(samples):
        branch = {p.id: evaluate_predicate(p, smp.input) for p in spec.predicates}
        for i in range(n, 0, -1):
            m = pool.var("match", (i, s))
            for p in spec.predicates:
                lam = pool.lam(i, p.id)
                c = branch[p.id]
                for j in slot_targets(spec, i):
                    t = pool.tau(i, c, j)
                    mj = pool.match(j, s)
                    clauses.append((-lam, -t, -mj, m))
                    clauses.append((-lam, -t, mj, -m))
    return clauses


def encode_correctness_soft(samples: Sequence[Sample], pool: VarPool) -> list[tuple[int, Clause]]:
    if not samples:
        raise InputError("cannot encode correctness for an empty sample set")
    return [(smp.weight, (pool.match(1, s),)) for s, smp in enumerate(samples)]


def encode_explainability(spec: InterpretationClassSpec, pool: VarPool
                          ) -> tuple[list[Clause], list[tuple[int, Clause]]]:
    """Reachability definitions (hard) and explainability rewards (soft)."""
    n = spec.node_bound
    hard: list[Clause] = []
    used = {i: pool.var("used", i) for i in range(1, n + 1)}
    hard.append((used[1],))
    for i in range(2, n + 1):
        reach = []
        for k in range(1, i):
            for c in range(spec.cmax):
                r = pool.var("reach", (k, c, i))
                t = pool.tau(k, c, i)
                hard += [(-r, t), (-r, used[k]), (r, -t, -used[k])]
                reach.append(r)
        hard.append((-used[i], *reach))
        hard += [(used[i], -r) for r in reach]
    soft: list[tuple[int, Clause]] = []
    for i in range(1, n + 1):
        for p in spec.predicates:
            lu = pool.var("lam_used", (i, p.id))
            lam = pool.lam(i, p.id)
            hard += [(-lu, used[i]), (-lu, lam), (lu, -used[i], -lam)]
    for i in range(1, n + 1):
        if spec.unused_weight(i) > 0:
            soft.append((spec.unused_weight(i), (-used[i],)))
        for p in spec.predicates:
            if p.weight > 0:
                soft.append((p.weight, (pool.lam_used(i, p.id),)))
    return hard, soft


def encode_threshold(spec: InterpretationClassSpec, pool: VarPool, low: int, high: int
                     ) -> list[Clause]:
    """Hard constraints ``low <= explainability <= high`` via adders and comparators.

    Two ripple-carry chains accumulate the unused-slot words and the
    used-predicate words; their sum is compared against ``high + 1`` (strict
    smaller) and ``low - 1`` (strict larger).  ``low == 0`` needs no lower
    comparator.
    """
    if not (0 <= low <= high <= GRID_MAX):
        raise InputError(f"threshold interval [{low}, {high}] must satisfy 0 <= low <= high <= 100")
    n, W = spec.node_bound, GRID_BITS
    clauses: list[Clause] = []
    g = Gates(pool, clauses)
    words_u, words_l = [], []
    for i in range(1, n + 1):
        u = pool.used(i)
        wu = []
        for k, bit in enumerate(int_to_bits(spec.unused_weight(i), W)):
            b = pool.new("weight_bits", (i, "u", k))
            clauses += [(-b, -u), (b, u)] if bit else [(-b,)]
            wu.append(b)
        wl = []
        for k in range(W):
            b = pool.new("weight_bits", (i, "lam", k))
            src = [pool.lam_used(i, p.id) for p in spec.predicates if p.weight >> k & 1]
            clauses.append((-b, *src))
            clauses += [(b, -s) for s in src]
            wl.append(b)
        words_u.append(wu)
        words_l.append(wl)
    acc_u: list = [False] * W
    acc_l: list = [False] * W
    for i in range(1, n + 1):
        acc_u = ripple_add(g, acc_u, words_u[i - 1], W, stage=(i + 1, "u"))
        acc_l = ripple_add(g, acc_l, words_l[i - 1], W, stage=(i + 1, "lam"))
    total = ripple_add(g, acc_u, acc_l, W, stage=("fin",))
    g.assert_bit(less_than(g, total, const_word(high + 1, W), tag="high"))
    if low > 0:
        g.assert_bit(greater_than(g, total, const_word(low - 1, W), tag="low"))
    return clauses


@dataclass
class Encoding:
    """A complete instance together with the pool and per-soft family tags."""

    spec: InterpretationClassSpec
    samples: tuple[Sample, ...]
    pool: VarPool
    instance: WcnfInstance
    families: list[str] = field(default_factory=list)
    bounds: tuple[int, int] | None = None

    def family_total(self, family: str) -> int:
        return sum(w for (w, _), f in zip(self.instance.soft, self.families) if f == family)

    @property
    def correctness_total(self) -> int:
        return self.family_total(CORRECTNESS)

    @property
    def explainability_total(self) -> int:
        return self.family_total(EXPLAINABILITY)

    def satisfied_by_family(self, model) -> dict[str, int]:
        out = {CORRECTNESS: 0, EXPLAINABILITY: 0}
        for (w, clause), fam in zip(self.instance.soft, self.families):
            if any(model[abs(l)] == (l > 0) for l in clause):
                out[fam] += w
        return out


def build_full(spec: InterpretationClassSpec, samples: Sequence[Sample],
               bounds: tuple[int, int] | None = None) -> Encoding:
    samples = check_samples(spec, samples)
    pool = VarPool()
    hard = encode_structure(spec, pool)
    hard += encode_samples(spec, samples, pool)
    soft_c = encode_correctness_soft(samples, pool)
    hard_e, soft_e = encode_explainability(spec, pool)
    hard += hard_e
    if bounds is not None:
        hard += encode_threshold(spec, pool, *bounds)
    inst = WcnfInstance(pool.top, hard, soft_c + soft_e)
    families = [CORRECTNESS] * len(soft_c) + [EXPLAINABILITY] * len(soft_e)
    return Encoding(spec, samples, pool, inst, families, bounds)


def structure_literals(pool: VarPool, spec: InterpretationClassSpec, diagram) -> list[int]:
    """Unit literals pinning ``lam`` and ``tau`` to the nodes present in ``diagram``."""
    lits = []
    for nd in diagram.nodes:
        for p in spec.predicates:
            lam = pool.lam(nd.slot, p.id)
            lits.append(lam if p.id == nd.predicate.id else -lam)
        for c in range(spec.cmax):
            for j in slot_targets(spec, nd.slot):
                t = pool.tau(nd.slot, c, j)
                on = c < len(nd.targets) and nd.targets[c] == j
                lits.append(t if on else -t)
    return lits
