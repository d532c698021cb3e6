# flake8: noqa F401, F403
from .pairing import (
    Layout,
    PairingSet,
    PairRecord,
    SuperPair,
    derive_pairs,
    fragment_records,
    layout_of,
    pair_superhighways,
    split_bough,
)
from .paths import (
    InterestSet,
    Relation,
    Segment,
    audit_counting_lemma,
    build_interest,
    build_intpot_edge,
    edge_interest,
    family_hits,
    interest_segments,
    interest_to_json,
    lift_to_paths,
    nh_owner_fragments,
)
from .sampling import (
    CoverSample,
    EdgeInfo,
    cover_class,
    covset_sizes,
    draw_sampled_ids,
    edge_infos,
    exact_bottoms,
    pick_outcomes,
    qualifying_count,
    repetitions,
    retained,
    sample_covset,
    sampling_enabled,
)

__all__ = [
    "Layout",
    "PairingSet",
    "PairRecord",
    "SuperPair",
    "derive_pairs",
    "fragment_records",
    "layout_of",
    "pair_superhighways",
    "split_bough",
    "InterestSet",
    "Relation",
    "Segment",
    "audit_counting_lemma",
    "build_interest",
    "build_intpot_edge",
    "edge_interest",
    "family_hits",
    "interest_segments",
    "interest_to_json",
    "lift_to_paths",
    "nh_owner_fragments",
    "CoverSample",
    "EdgeInfo",
    "cover_class",
    "covset_sizes",
    "draw_sampled_ids",
    "edge_infos",
    "exact_bottoms",
    "pick_outcomes",
    "qualifying_count",
    "repetitions",
    "retained",
    "sample_covset",
    "sampling_enabled",
]
