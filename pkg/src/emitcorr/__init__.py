"""Two driven quantum emitters with collective dissipation: dynamics and correlations."""

from .correlations import (
    CorrelationRecord,
    MeasurementBasis,
    OptimizerSettings,
    classical_correlation,
    concurrence,
    correlation_record,
    entanglement_of_formation,
    mutual_information,
    quantum_discord,
)
from .coupling import (
    CollectiveParams,
    DipoleGeometry,
    PlasmonWaveguide,
    beta_tilde,
    feasibility_check,
    free_space_coupling,
    plasmonic_coupling,
)
from .dynamics import DriveConfig, EvolutionSpec, Trajectory, evolve, steady_state
from .kernels import BACKEND
from .scenario import ScenarioConfig, figure_preset, parse_config, run_scenario, run_steady

__version__ = "0.1.0"
