"""Generalised probabilistic theories with a mediator: classical fields cannot entangle.

Submodules
----------
core, classical, quantum, composition
    systems, states, effects, transformations and their tensor products
circuits
    mediated circuits and their decomposition into local operations
separability
    certificates for separable and entangled bipartite states
scenarios, signalling
    the no-go harness, the quantum-mediator interferometer, model
    classification and the light-cone argument
"""
__version__ = "0.1.0"

from .circuits import (
    MediatedCircuit,
    ProductMapTerm,
    apply_circuit,
    build_nonmediated_circuit,
    circuit_matrix,
    locc_decompose,
    reconstruct_channel,
)
from .classical import atomic_effect, delta_state, distribution, make_classical, resolution_of_identity
from .composition import compose, product_effect, product_map, product_state, reduced_state
from .config import CODATA, PhysicalConstants, Tolerances, get_tolerances, tolerances
from .core import (
    DiscardBehaviour,
    EffectVector,
    Instrument,
    StateVector,
    SystemType,
    TransformationMatrix,
    ValidationReport,
    evaluate,
    identity_map,
    make_custom,
    validate_effect,
    validate_instrument,
    validate_state,
    validate_transformation,
    zero_effect,
)
from .errors import *  # noqa: F401,F403
from .quantum import (
    cptp_to_transformation,
    density_to_state,
    make_quantum,
    maximally_mixed,
    negativity,
    operator_to_effect,
    partial_trace,
    partial_transpose,
    pure_state,
    state_to_density,
    transformation_to_choi,
    unitary_channel,
)
from .rng import make_rng
from .scenarios import (
    ConditionProfile,
    NoGoReport,
    bmv_protocol,
    classify_model,
    collapse_channel,
    verify_no_go,
)
from .separability import SeparabilityCertificate, Verdict, find_witness, is_separable
from .signalling import ProtocolParams, SignallingReport, assess_superluminality, run_protocol
