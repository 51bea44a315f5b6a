"""Nonlinear flag-qubit search simulator.

Dense register states, the idealized pairwise Step 4 pipeline, the local
nonlinear flag dynamics with closed-form and RK4 paths, and locality checks.
"""

__version__ = "0.1.0"

from .dynamics import (
    FlagOperator,
    NonlinearParams,
    Trajectory,
    closed_form_evolve,
    closed_form_trajectory,
    decide_s,
    default_alpha,
    default_params,
    hold_time,
    omega,
    rk4_evolve,
    sigma3_closed_form,
    single_qubit_evolve,
)
from .kernels import BACKEND
from .locality import (
    LocalityReport,
    mob_transform,
    no_signaling_check,
    pairwise_signaling_check,
    signaling_check_mob,
)
from .pipeline import (
    OracleSpec,
    PipelineState,
    apply_oracle,
    apply_walsh,
    init_state,
    measure_flag,
    pairwise_pass,
    run_pairwise,
    step4_pairwise,
)
from .qstate import (
    DensityMatrix,
    StateVector,
    apply_single_qubit_gate,
    partial_trace,
    purity,
)

__all__ = [
    "BACKEND",
    "DensityMatrix",
    "FlagOperator",
    "LocalityReport",
    "NonlinearParams",
    "OracleSpec",
    "PipelineState",
    "StateVector",
    "Trajectory",
    "apply_oracle",
    "apply_single_qubit_gate",
    "apply_walsh",
    "closed_form_evolve",
    "closed_form_trajectory",
    "decide_s",
    "default_alpha",
    "default_params",
    "hold_time",
    "init_state",
    "measure_flag",
    "mob_transform",
    "no_signaling_check",
    "omega",
    "pairwise_pass",
    "pairwise_signaling_check",
    "partial_trace",
    "purity",
    "rk4_evolve",
    "run_pairwise",
    "sigma3_closed_form",
    "signaling_check_mob",
    "single_qubit_evolve",
    "step4_pairwise",
]
