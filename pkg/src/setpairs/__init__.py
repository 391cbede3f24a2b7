"""Exact tools for cross intersecting and 1-cross intersecting set pair systems."""

from .core import (
    CROSS,
    ONE_CROSS,
    Rat,
    SetPair,
    SetPairSystem,
    VerificationReport,
    binom,
    ground_set,
    indices_avoiding,
    reduce,
    sigma,
    subsystem,
    verify,
)
from .constructions import (
    complementary_five_cycles,
    pad_to_sizes,
    standard_example,
    strip_free_elements,
)
from .lemmas import induction_identity, ratio, ratio_bound_scan, reduction_is_safe
from .biclique import (
    Biclique,
    BicliquePartition,
    crown_graph,
    partition_to_system,
    system_to_partition,
    thickness,
    verify_partition,
)
from .search import (
    SearchConfig,
    SearchOutcome,
    bound_audit,
    brute_force_oracle,
    canonical_form,
    enumerate_extremal,
    exists_system,
    max_m,
)

__version__ = "0.1.0"
