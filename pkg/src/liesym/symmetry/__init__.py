"""Symmetry checks: conformal classification, Lie and Noether conditions."""
from .conformal import (
    HV, KV, NOTCKV, PROPER, SPCKV, ConformalClassification, ckv_ricci_identity, classify,
    conformal_factor, conformal_psi_law, conformal_ricci_potential, gradient_field,
    gradient_potential, kg_symmetry_residual, kv_discover_polynomial, null2d_condition,
    schrodinger_check_gradient, schrodinger_check_nongradient, schrodinger_operator,
    yamabe_residual,
)
from .noether import (
    Lagrangian, PointSymmetry, acceleration, combine_integrals, conformal_lagrangian,
    induced_noether, noether_condition, noether_integral, noether_residual, time_free, velocity,
)
from .report import (
    ConstraintReport, NotASymmetryError, NotConformalError, combine_verdicts, merge, run_checks,
    skipped,
)
from .tables import TableRow, table_verify

__all__ = [
    "HV", "KV", "NOTCKV", "PROPER", "SPCKV", "ConformalClassification", "ConstraintReport",
    "Lagrangian", "NotASymmetryError", "NotConformalError", "PointSymmetry", "TableRow",
    "acceleration", "ckv_ricci_identity", "classify", "combine_integrals", "combine_verdicts",
    "conformal_factor", "conformal_lagrangian", "conformal_psi_law", "conformal_ricci_potential",
    "gradient_field", "gradient_potential", "induced_noether", "kg_symmetry_residual",
    "kv_discover_polynomial", "merge", "noether_condition", "noether_integral", "noether_residual",
    "null2d_condition", "run_checks", "schrodinger_check_gradient",
    "schrodinger_check_nongradient", "schrodinger_operator", "skipped", "table_verify",
    "time_free", "velocity", "yamabe_residual",
]
