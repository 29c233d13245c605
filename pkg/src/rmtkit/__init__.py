"""Reliable message transmission under general Byzantine adversaries with
partial topology knowledge: adversary-structure algebra, cut conditions,
and a Z-CPA simulator."""

from .adversary import (
    AdversaryStructure,
    join,
    joint_structure,
    local_structure,
    member,
    normalize,
    order_geq,
    restrict,
    threshold,
)
from .cuts import Instance, check_rmt_cut, check_zpp_cut, find_rmt_cut, find_zpp_cut
from .engine import (
    AdversaryBehavior,
    ExecutionOutcome,
    constant_lie,
    delayed_lie,
    equivocate,
    exhaustive_search,
    run,
    silent,
    strategy_library,
)
from .generate import GeneratorSpec, generate_instances, named_instances
from .topology import CutWitness, Graph, ViewFunction, ad_hoc_view, enumerate_cuts, full_view, joint_view, neighbors

__version__ = "0.1.0"
