"""Polarization scoring and contrarian content recommendation over endorsement graphs."""

from .acceptance import AcceptanceModel, accept_prob, fit_acceptance_model
from .errors import (
    ContrarecError,
    ConvergenceError,
    DataFormatError,
    EmptyPoolError,
    MissingArtifactError,
)
from .graph import (
    EndorsementGraph,
    HubSet,
    ShareRecord,
    ShareTable,
    largest_connected_component,
    load_dataset,
    normalize_url,
    synth_polarized_graph,
    top_k_hubs,
)
from .items import ItemScore, exclusivity_scores, item_polarization, popularity_score, score_items
from .layout import compute_layout
from .partition import load_assignment, partition
from .polarization import (
    PolarizationProfile,
    delta_polarization,
    expected_hitting_times,
    updated_hitting_time,
    user_polarization,
)
from .recommend import (
    FactorWeights,
    RankedList,
    Recommendation,
    aggregate_rankings,
    build_candidate_pool,
    build_factor_lists,
    footrule_distance,
    random_baseline,
    recommend,
)
from .topics import build_topic_vectors, cosine_similarity, diversity_ranking, extract_topics

__version__ = "0.1.0"
