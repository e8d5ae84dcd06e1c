"""Random small interpretation classes with scripted black boxes, for tests and demos."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blackbox import Dimension, OracleSpec, draw_samples
from .model import GRID_MAX, BranchingSpec, FeatureSpec, InterpretationClassSpec, Predicate, Sample


@dataclass
class ToyInstance:
    spec: InterpretationClassSpec
    samples: tuple[Sample, ...]
    oracle: OracleSpec
    seed: int


def random_toy_instance(seed: int, max_nodes: int = 3, max_predicates: int = 3, max_arity: int = 3,
                        max_samples: int = 40, dim: int = 2) -> ToyInstance:
    """A random class over ``[0, 1)**dim`` labelled by a random half-space or box oracle.

    Grid weights are drawn so that every slot's largest possible reward fits
    its share of the 0..100 budget.
    """
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_nodes + 1))
    npred = int(rng.integers(1, max_predicates + 1))
    share = GRID_MAX // n
    predicates = []
    for k in range(npred):
        arity = int(rng.integers(2, max_arity + 1))
        cuts = np.sort(rng.uniform(0.1, 0.9, arity - 1)).round(3)
        cuts = np.unique(cuts)
        if len(cuts) < arity - 1:
            cuts = np.linspace(0.2, 0.8, arity - 1).round(3)
        col = int(rng.integers(0, dim))
        predicates.append(Predicate.make(
            f"p{k}", FeatureSpec.projection(col), BranchingSpec.thresholds(cuts.tolist()),
            weight=int(rng.integers(0, share + 1)),
        ))
    unused = [int(rng.integers(0, share + 1)) for _ in range(n)]
    spec = InterpretationClassSpec(
        predicates=tuple(predicates), labels=("0", "1"), node_bound=n,
        unused_weights=tuple(unused), input_dim=dim,
        input_names=tuple(f"x{k}" for k in range(dim)),
    )
    domain = tuple(Dimension(f"x{k}", 0.0, 1.0) for k in range(dim))
    if rng.random() < 0.5:
        oracle = OracleSpec("builtin", domain, name="linear", seed=seed,
                            params={"noise": float(rng.choice([0.0, 0.1]))})
    else:
        lo = rng.uniform(0.0, 0.5, size=(2, dim))
        boxes = [[(float(a), float(a) + 0.5) for a in row] for row in lo]
        oracle = OracleSpec("builtin", domain, name="boxes", seed=seed, params={"boxes": boxes})
    m = int(rng.integers(5, max_samples + 1))
    samples = draw_samples(oracle, m, seed=seed)
    weights = rng.integers(1, 4, size=m) if rng.random() < 0.3 else np.ones(m, dtype=int)
    samples = tuple(Sample(s.input, s.label, int(w)) for s, w in zip(samples, weights))
    return ToyInstance(spec, samples, oracle, seed)
