"""Multi-pair maximum flow and CNF-to-flow reduction gadgets."""

from .cnf import CnfFormula, PartialAssignment, Partition, plan_partition, satisfies
from .driver import (
    MaxSatResult,
    VerificationReport,
    brute_force_max_sat,
    decide_threshold,
    max_sat_via_flow,
    mlec_max_sat,
    recover_triple,
    verify_lemma,
)
from .flow import brute_force_min_cut, cut_capacity, is_acyclic, max_flow, max_flow_bounded, min_cut
from .gadgets import (
    GadgetGraph,
    GadgetTooLarge,
    build_cap_gadget,
    build_mlec_gadget,
    build_uncap_gadget,
    subgadget,
    witness_cut_cap,
    witness_cut_kpmf,
    witness_flow_cap,
    witness_flow_uncap,
)
from .multipair import (
    FlowMatrix,
    GomoryHuTree,
    all_pairs_max_flow,
    gh_query,
    global_max_flow,
    gomory_hu_tree,
    kpmf,
    max_local_edge_connectivity,
    single_source_max_flow,
    st_max_flow,
)
from .network import CutResult, FlowNetwork, FlowResult, flow_violations

__version__ = "0.1.0"
