"""Compatibility and agreement supertrees of unrooted phylogenetic trees,
decided through minimal cuts of the display graph."""

from .cuts import (
    Cut,
    ResourceLimitExceeded,
    cuts_parallel,
    enumerate_minimal_cuts,
    is_legal_cut,
    is_minimal_cut,
    is_nice_cut,
    legal_minimal_cuts,
    sigma_of_cut,
)
from .display import DisplayGraph, build_display_graph
from .elig import Elig, build_elig, legal_minimal_separators, minimal_separators
from .oracle import oracle_agreement, oracle_compatible
from .solver import (
    AGREEMENT,
    COMPATIBILITY,
    Witness,
    agreement_cut_function,
    decide_agreement,
    decide_compatibility,
    minimize_cut_function,
    split_edge_at,
    verify_witness,
)
from .tree import (
    PhyloTree,
    Profile,
    Split,
    agrees,
    displays,
    parse_newick,
    parse_newick_many,
    restrict,
    serialize_newick,
    splits_compatible,
    splits_of,
    tree_from_splits,
)

__version__ = "0.1.0"
