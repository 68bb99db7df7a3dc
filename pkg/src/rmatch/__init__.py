"""Perfect and fractional matchings in n-balanced r-partite r-graphs."""

from .conditions import (
    ConditionReport,
    check_fractional_condition,
    check_itupl_condition,
    check_ko_threshold,
    check_latin_property,
    check_main_condition,
    check_vertex_degree,
)
from .constructive import (
    AugmentationTrace,
    augment_near_perfect,
    build_near_perfect,
    contract_to_tripartite,
    decontract_matching,
    find_perfect_matching,
    solve,
)
from .fractional import (
    FractionalAssignment,
    analyze_cover,
    cheapest_optimal_cover,
    decompose_complete_multipartite,
    nu_star,
    perfect_fractional_matching,
    select_good_matching,
    tau_star,
    verify_duality,
)
from .generators import gen_complete, gen_latin, gen_parity_sharpness, gen_random, gen_union_cover
from .hypergraph import (
    Hypergraph,
    PartialTuple,
    enumerate_legal_tuples,
    parse_hypergraph,
    read_hypergraph,
    validate_matching,
)
from .oracle import OracleResult, has_perfect_matching, max_matching

__version__ = "0.1.0"
