"""Link budgets, element-level field sums and coverage maps for RIS, repeaters and reflectors."""

from .farfield import CASES, DeploymentCase, LinkBudget, evaluate_case
from .fieldsum import RisPanel, apply_impairments, field_sum_gain_db, set_profile
from .radio import RadioConfig, fspl_db

__version__ = "0.1.0"

__all__ = [
    "CASES", "DeploymentCase", "LinkBudget", "RadioConfig", "RisPanel",
    "apply_impairments", "evaluate_case", "field_sum_gain_db", "fspl_db", "set_profile",
]
