"""Belief-function evidence fusion with a minimum-distance decision rule,
applied to name-based entity matching."""

from .combination import CombinationRule, combine_all, conflict, conjunctive, dempster, disjunctive
from .decision import (
    AppriouParams,
    DecisionConfig,
    DecisionOutcome,
    appriou_decide,
    betp,
    candidates,
    decide_max_bel,
    decide_max_betp,
    decide_max_pl,
    decide_min_distance,
    jaccard,
    jousselme_distance,
)
from .errors import EvidenceError
from .evidence import Frame, MassFunction, bel, categorical, focal_elements, frame_new, mass_new, pl, vacuous
from .pipeline import (
    AlignmentDocument,
    CorrespondenceDecision,
    EntityCatalog,
    PipelineConfig,
    SimilarityRecord,
    run_pipeline,
)
from .similarity import MatcherKind, hamming_sim, jaro_sim, levenshtein_sim, score

__version__ = "0.1.0"
