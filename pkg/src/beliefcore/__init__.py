"""Belief networks and influence diagrams: construction, editing, text I/O,
exact inference (polytree propagation, cutset conditioning, join trees,
node reduction), Gibbs sampling and join-tree cost estimates."""

from .clustering import build_join_tree, jt_infer_jensen, jt_infer_meta, moralize, triangulate
from .conditioning import (
    conditioning_infer_joint,
    conditioning_infer_weighted,
    find_loop_cutset,
)
from .editing import (
    add_arc,
    add_node,
    add_state,
    copy_diagram,
    delete_arc,
    delete_node,
    delete_state,
    edit_distribution,
)
from .errors import *  # noqa: F401,F403
from .estimators import (
    StepCounter,
    calibrate,
    estimate_jensen_init,
    estimate_jensen_update,
    unit_step_accounting,
)
from .fixtures import fixture
from .io import load, load_file, save, save_file
from .model import (
    Beliefs,
    Diagram,
    Node,
    NodeKind,
    build_diagram,
    graph_order,
    is_acyclic,
    is_belief_net,
    is_consistent,
    is_strictly_positive,
    make_node,
    make_strictly_positive,
)
from .oracle import joint_enumeration_oracle
from .polytree import is_polytree, polytree_infer
from .random_nets import random_influence_diagram, random_network
from .reduction import Policy, SolveResult, evaluate_influence_diagram, reduction_query
from .simulation import SimParams, gibbs_infer
from .transforms import (
    absorb_chance_node,
    reduce_deterministic_node,
    remove_all_barren,
    remove_barren_node,
    reverse_arc,
)

__version__ = "0.1.0"
