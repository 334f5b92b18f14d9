"""Autarkies for dependency-quantified CNF: finding A0, A1 and E1 autarkies,
autarky reduction to lean kernels, and certificates for the result."""

from .core import (
    DQCNF,
    AutarkyWitness,
    Clause,
    Prefix,
    apply_autarky,
    cleanup_prefix,
    compose,
    formula,
    is_autarky,
    is_tautology,
    substitute_clause,
    value_class,
)
from .parser import parse_dqdimacs, print_dqdimacs
from .reduction import ReduceConfig, ReductionLog, lean_kernel, verify_log
from .values import Cnf, Const, Dnf, Lit, Table

__version__ = "0.1.0"
