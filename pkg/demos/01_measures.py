"""
Measuring a hand-written decision diagram
=========================================

Build a two-slot class, write one diagram by hand and score it.
"""
from paretointerp.model import (BranchingSpec, DecisionDiagram, FeatureSpec,
                                InterpretationClassSpec, Node, Predicate, Sample, measures)

# two threshold predicates over the unit square
p = Predicate.make("x_half", FeatureSpec.projection(0), BranchingSpec.thresholds([0.5]), weight=20)
q = Predicate.make("y_half", FeatureSpec.projection(1), BranchingSpec.thresholds([0.5]), weight=10)
spec = InterpretationClassSpec(predicates=(p, q), labels=("no", "yes"), node_bound=2,
                               unused_weights=(40, 40), input_dim=2)

# "yes" only in the upper-right quadrant
d = DecisionDiagram((Node(1, p, ("no", 2)), Node(2, q, ("no", "yes"))))

samples = [Sample((0.2, 0.9), "no"), Sample((0.7, 0.8), "yes"),
           Sample((0.9, 0.1), "no"), Sample((0.6, 0.6), "no", weight=2)]
m = measures(d, spec, samples)
print("correctness", m.correctness, "explainability", m.explainability)

# dropping slot 2 frees its unused reward
flat = DecisionDiagram((Node(1, p, ("no", "yes")), Node(2, q, ("no", "no"))))
print("flat diagram:", measures(flat, spec, samples))
