"""Correlations and pointer-basis regimes of two phonon-dephased donor charge qubits."""
from .correlations import (
    CorrelationPoint,
    XState,
    classical_correlation,
    correlation_point,
    joint_entropy,
    k_function,
    mutual_information,
    quantum_discord,
)
from .dynamics import Trajectory, evolve
from .geometry import (
    DEFAULT_GEOMETRY,
    QubitGeometry,
    SubstrateContext,
    distance_set,
    donor_positions,
)
from .kernel import (
    DecoherenceExponents,
    big_gamma,
    coherences,
    exponents_on_grid,
    gamma_interqubit,
    gamma_point,
)
from .oracle import (
    MeasurementBasis,
    classical_info_at,
    conditional_decomposition,
    densify,
    g_closed_form,
    maximize_classical,
)
from .regimes import (
    BasisLabel,
    RegimeReport,
    classify_basis,
    crossover_temperature,
    pointer_temperature_estimate,
    scan_regimes,
    temperature_sweep,
)

__version__ = "0.1.0"
