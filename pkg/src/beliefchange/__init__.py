"""Belief change over propositional and probabilistic belief states."""

from .credal import (
    ConditionedModel,
    PartialModel,
    accepted,
    as_constraints,
    condition_extended,
    constrain,
    embed_belief_set,
    embed_prob,
    lower,
    top,
    upper,
)
from .errors import (
    BeliefChangeError,
    CapExceededError,
    InconsistentError,
    ModeError,
    NullEvidenceError,
    ParseError,
    PreconditionError,
    SolverError,
)
from .logic import BeliefSet, Language, expand, models, parse_sentence
from .lprob import ConstraintSet, LinearConstraint, entails, feasible, optimize, parse_constraint
from .mce import MceConfig, MceSolution, maxent, mce_preservation_witness, mce_update
from .measures import MeasureReport, ignorance, measure, uncertainty
from .prob import (
    ProbFunction,
    condition,
    jeffrey_binary,
    jeffrey_general,
    jeffrey_path,
    uniform,
)
from .session import Caps, RunConfig, Session, run_script, run_script_text

__all__ = [
    "ConditionedModel",
    "PartialModel",
    "accepted",
    "as_constraints",
    "condition_extended",
    "constrain",
    "embed_belief_set",
    "embed_prob",
    "lower",
    "top",
    "upper",
    "BeliefChangeError",
    "CapExceededError",
    "InconsistentError",
    "ModeError",
    "NullEvidenceError",
    "ParseError",
    "PreconditionError",
    "SolverError",
    "ProbFunction",
    "condition",
    "jeffrey_binary",
    "jeffrey_general",
    "jeffrey_path",
    "uniform",
    "BeliefSet",
    "Language",
    "expand",
    "models",
    "parse_sentence",
    "ConstraintSet",
    "LinearConstraint",
    "entails",
    "feasible",
    "optimize",
    "parse_constraint",
    "MceConfig",
    "MceSolution",
    "maxent",
    "mce_preservation_witness",
    "mce_update",
    "MeasureReport",
    "ignorance",
    "measure",
    "uncertainty",
    "Caps",
    "RunConfig",
    "Session",
    "run_script",
    "run_script_text",
]
