"""Exclusivity-graph analysis with certificates.

Decides membership of probability assignments in the stable-set
polytope, the theta body, and the clique-constrained polytope of an
exclusivity graph; searches OR powers for multi-copy clique-bound
violations; builds the four-block self-complementary host graph; and
models the CHSH and KCBS measurement scenarios end to end.
"""

__version__ = "0.1.0"

from .assignments import (
    CopyVerdict,
    ProbabilityAssignment,
    QstabVerdict,
    StabVerdict,
    in_qstab,
    in_stab,
    self_inconsistency_check,
    tensor_power,
    unit_range_assignment,
    validate_assignment,
)
from .cliques import (
    enumerate_independent_sets,
    enumerate_maximal_cliques,
    max_weight_independent_set,
    max_weighted_clique,
)
from .constructions import (
    HConstruction,
    build_h,
    embed_assignment,
    embed_for_th_test,
    th_membership_via_h,
)
from .graphs import (
    Clique,
    Graph,
    IsomorphismWitness,
    complement,
    complete_graph,
    cycle_graph,
    empty_graph,
    find_isomorphism,
    generalized_composition,
    induced_subgraph,
    is_perfect,
    is_self_complementary,
    or_power,
    or_product,
    path_graph,
)
from .scalars import ONE, SQRT2, ZERO, ScalarQ2, parse_scalar
from .scenarios import (
    Behavior,
    ColoredExclusivityGraph,
    Event,
    MeasurementScenario,
    bell_chsh_scenario,
    behavior_to_assignment,
    complete_chsh_behavior,
    exclusivity_graph,
    in_classical,
    kcbs_scenario,
    make_behavior,
    validate_behavior,
)
from .theta import (
    MembershipVerdict,
    QuantumCertificate,
    SdpProblem,
    ThetaResult,
    extract_witness,
    in_th,
    lovasz_theta,
    solve_sdp,
    verify_quantum_certificate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
