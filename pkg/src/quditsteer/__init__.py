"""Measurement-device-independent EPR steering for qudits.

Simulates the qudit steering protocol with two mutually unbiased
measurement settings, evaluates the steering inequality and its
quantum-refereed (MDI) witness, certifies private randomness by
semidefinite programming, and verifies the wave-plate optics that realize
the protocol's measurements and partial Bell-state projection.
"""

from .qmath import eig_max_hermitian, is_psd, ket, kron, partial_trace, projector
from .scenario import (
    IsotropicState,
    Povm,
    QuestionStateSet,
    SteeringFunctional,
    fourier_mub,
    isotropic,
    max_entangled,
    question_states,
    question_states_qutrit,
    steering_functional_two_mubs,
)
from .protocol import (
    CorrelationTable,
    CountsTable,
    MdiTable,
    WitnessReport,
    correlations,
    critical_p,
    mdi_table,
    poisson_mc,
    qrs_witness,
    random_lhs_table,
    steering_parameter,
)
from .sdp import (
    Assemblage,
    GuessingSolver,
    LhsDecision,
    RandomnessResult,
    SdpProblem,
    SdpSolution,
    assemblage,
    guessing_probability,
    lhs_bound_bruteforce,
    lhs_membership,
    solve_sdp,
)

__version__ = "0.1.0"
