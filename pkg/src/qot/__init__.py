"""Quantum Wasserstein distances over restricted coupling sets."""

from .coupling import (
    CLASSICAL_QUANTUM,
    GENERAL,
    PPT,
    PRODUCT,
    QUANTUM_CLASSICAL,
    SEPARABLE,
    SYMMETRIC_PPT,
    CouplingSet,
    coupling_set,
    ppt_extension,
)
from .metrology import (
    F_MAX,
    F_WY,
    MonotoneFunction,
    gen_qfi,
    gen_variance,
    qfi,
    skew_information,
    variance,
)
from .qstates import (
    DensityMatrix,
    HermitianOperator,
    angular_momentum,
    maximally_entangled,
    pauli,
    su_generators,
    validate_density,
)
from .wasserstein import (
    CostSpec,
    TransportResult,
    distance_squared,
    generalized_distance_squared,
    maximal_self_distance,
    self_distance_table,
    tilde_distance_squared,
    tilde_variance,
    wasserstein_variance,
)

__version__ = "0.1.0"

__all__ = [
    "CLASSICAL_QUANTUM",
    "GENERAL",
    "PPT",
    "PRODUCT",
    "QUANTUM_CLASSICAL",
    "SEPARABLE",
    "SYMMETRIC_PPT",
    "CouplingSet",
    "CostSpec",
    "DensityMatrix",
    "F_MAX",
    "F_WY",
    "HermitianOperator",
    "MonotoneFunction",
    "TransportResult",
    "angular_momentum",
    "coupling_set",
    "distance_squared",
    "gen_qfi",
    "gen_variance",
    "generalized_distance_squared",
    "maximal_self_distance",
    "maximally_entangled",
    "pauli",
    "ppt_extension",
    "qfi",
    "self_distance_table",
    "skew_information",
    "su_generators",
    "tilde_distance_squared",
    "tilde_variance",
    "validate_density",
    "variance",
    "wasserstein_variance",
]
