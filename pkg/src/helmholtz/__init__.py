"""Exact Helmholtz-condition checking and Lagrangian reconstruction for
second-order systems with gradient-type dissipative forces."""

from .conditions import (
    CONDITION_IDS,
    ConditionReport,
    GhcIntermediates,
    HessianNotSymmetric,
    Identity,
    NotQuasiLinear,
    QuasiLinearForm,
    SodeSystem,
    all_passed,
    classical_check,
    classical_gh_check,
    compute_r_s,
    decompose,
    first_order_check,
    generalized_check_full,
    generalized_check_minimal,
    gh_form_check,
    gh_form_check_system,
    redundancy_witness,
)
from .expr import (
    TIME,
    Expression,
    JetVariable,
    acc,
    const,
    coord,
    jet_order,
    param,
    partial,
    total_derivative,
    truncated_derivative,
    var,
    vel,
)
from .homotopy import closed_two_form_potential, hessian_potential
from .parser import ParseError, parse
from .reconstruct import (
    LagrangianPair,
    ReconstructionRefused,
    ReconstructionTrace,
    StepAssertionError,
    compose_dissipative,
    euler_lagrange,
    reconstruct,
)

__version__ = "0.1.0"
