"""
Core engine: signals, linear systems, sector specs, certification and simulation
"""

from .certify import (
    Certificate,
    Infeasible,
    ViolationWitness,
    best_rate,
    certify,
    check_frequency_condition,
    check_hard_condition,
    find_violation,
    gamma_bound,
    gradient_method_lure,
)
from .lti import StateSpace, impulse_response, rho_scale, toeplitz_matrix, transfer_eval
from .nonlinearity import Nonlinearity, random_sector_nonlinearity
from .sector import QuadSpec, compatibility, preset, sector_interval_to_M
from .signals import Signal, SipConfig, Weight, quad_form, seminorm, sip
from .simulator import empirical_gain, interconnect, verify_exponential_decay
from .slemma import slemma_min_tau

__all__ = [
    "Signal",
    "SipConfig",
    "Weight",
    "sip",
    "seminorm",
    "quad_form",
    "StateSpace",
    "impulse_response",
    "rho_scale",
    "toeplitz_matrix",
    "transfer_eval",
    "QuadSpec",
    "preset",
    "compatibility",
    "sector_interval_to_M",
    "Certificate",
    "Infeasible",
    "ViolationWitness",
    "gamma_bound",
    "check_hard_condition",
    "check_frequency_condition",
    "certify",
    "find_violation",
    "best_rate",
    "gradient_method_lure",
    "slemma_min_tau",
    "Nonlinearity",
    "random_sector_nonlinearity",
    "interconnect",
    "empirical_gain",
    "verify_exponential_decay",
]
