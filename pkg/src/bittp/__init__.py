"""Weighted-sum heuristic solver for the bi-objective traveling thief problem."""

from .archive import (
    Archive,
    Entry,
    ObjectiveBounds,
    hypervolume,
    normalize,
    subset_select,
    weakly_dominates,
)
from .driver import (
    AlphaDistribution,
    CycleStats,
    WsmConfig,
    bit_flip_exploit,
    random_search,
    run,
    sample_alpha,
)
from .evaluation import (
    PackingPlan,
    Solution,
    Tour,
    TourContext,
    speed,
    total_profit,
    travel_time,
    validate_solution,
    weight_after,
    weighted_objective,
)
from .instance import (
    CEIL_2D,
    EUC_2D,
    InstanceError,
    ProblemInstance,
    load_instance,
    parse_instance,
)
from .packing import ScoredItems, carry_distances, randomized_packing, reeval_period, score_items
from .tour_search import (
    NeighborLists,
    average_pair_distance,
    construct_tour,
    distance_matrix,
    two_opt_exploit,
)

__version__ = "0.1.0"

__all__ = [
    "Archive",
    "AlphaDistribution",
    "CEIL_2D",
    "CycleStats",
    "EUC_2D",
    "Entry",
    "InstanceError",
    "NeighborLists",
    "ObjectiveBounds",
    "PackingPlan",
    "ProblemInstance",
    "ScoredItems",
    "Solution",
    "Tour",
    "TourContext",
    "WsmConfig",
    "average_pair_distance",
    "bit_flip_exploit",
    "carry_distances",
    "construct_tour",
    "distance_matrix",
    "hypervolume",
    "load_instance",
    "normalize",
    "parse_instance",
    "random_search",
    "randomized_packing",
    "reeval_period",
    "run",
    "sample_alpha",
    "score_items",
    "speed",
    "subset_select",
    "total_profit",
    "travel_time",
    "two_opt_exploit",
    "validate_solution",
    "weakly_dominates",
    "weight_after",
    "weighted_objective",
    "__version__",
]
