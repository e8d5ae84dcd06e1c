"""Pareto-optimal decision-diagram interpretations of black-box classifiers."""

__version__ = "0.1.0"

from .blackbox import (OracleSpec, PacParams, class_size_upper_bound, draw_samples,
                       load_samples_csv, pac_sample_size)
from .bruteforce import enumerate_class, exact_front
from .config import Config, load_config
from .decode import decode_assignment, diagram_from_dict, diagram_to_dict, to_dot, verify_measures
from .encoder import build_full
from .errors import (ConfigError, ConsistencyError, ExternalSolverError, InputError, OracleError,
                     ParetoInterpError, SolverError)
from .explorer import ParetoFront, Region, explore_poi, front_report, quint_synt
from .maxsat import SolveOutcome, check_model, solve, solve_external
from .model import (BranchingSpec, DecisionDiagram, FeatureSpec, InterpretationClassSpec,
                    MeasurePair, Node, Predicate, Sample, correctness_measure, dominates,
                    evaluate_diagram, explainability_measure, max_preceq, measures)
