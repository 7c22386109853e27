"""Trap-guided atomic-clock Sagnac interferometer toolkit.

Simulation, verification, and design of ring-trap interferometer schemes:
phase and contrast readout, phase-space trajectories, dynamic/geometric
phase decomposition, sensitivity limits, and sweep-profile design.
"""

from .errors import (
    ConfigurationError,
    ConvergenceError,
    DegeneratePath,
    InsufficientResolution,
    InvalidIndex,
    KappaUndefined,
    NegativeSample,
    NonPositiveDuration,
    NoZeroInBracket,
    QfiFormulaInvalid,
    QuadratureNonConvergence,
    StepCountInsufficient,
    TimeOutOfRange,
    TruncationInsufficient,
    UnsupportedFamily,
    ZeroProfile,
)
from .model import (
    Branch,
    ProfileFamily,
    SweepProfile,
    TrapConfig,
    eval_profile,
    lambda_drive,
    make_profile,
    zero_profile,
)
from .spectrum import SpectrumValue, spectrum_closed_form, spectrum_derivative, spectrum_numeric
from .evolution import BranchEvolution, alpha_at, phi_at, sample_trajectory
from .fock import FockState, coherence_fock, evolve_fock, evolve_two_component
from .interferometer import (
    InterferometerResult,
    interferometer_phase_closed,
    interferometer_phase_integral,
    readout,
    sagnac_phase,
)
from .geometry import (
    PhaseDecomposition,
    SchemeClass,
    branch_dynamic_phase,
    branch_geometric_phase,
    decompose,
    shoelace_area,
)
from .design import SchemeSpec, design_time, find_zero_time
from .sensitivity import (
    SensitivityReport,
    delta_omega,
    delta_omega_point,
    phase_slope,
    qfi,
    sensitivity_report,
)

__version__ = "0.1.0"
