"""Configuration settings for family analysis."""

import os

from abmod.core.errors import UsageError
from abmod.ideals.groebner import DEFAULT_SPAIR_BUDGET

AVAILABLE_CHECKS = ("mu_probe", "g_equals_e", "estim", "quasihomogeneous", "horizontal")


def _budget_from_env():
    value = os.environ.get("ABMOD_SPAIR_BUDGET")
    if not value:
        return DEFAULT_SPAIR_BUDGET
    try:
        budget = int(value)
    except ValueError:
        raise UsageError(f"ABMOD_SPAIR_BUDGET must be an integer, got '{value}'") from None
    if budget <= 0:
        raise UsageError("ABMOD_SPAIR_BUDGET must be positive")
    return budget


class AnalysisConfig:
    """Configuration class for analysis settings."""

    def __init__(self):
        # Default analysis settings
        self.b_order = 8  # Truncation order N of E mod b^N
        self.order = "grevlex"  # Options: grevlex, grlex
        self.samples = [0, 1, 3]  # Parameter values probed for mu-constancy
        self.checks = list(AVAILABLE_CHECKS)  # Criteria run by analyze
        self.estim_k = 1  # Power of m used by the estim criterion
        self.spair_budget = _budget_from_env()  # Cap on processed S-pairs per Groebner basis
        self.confirm_truncation = True  # Recompute G at N + 2 and compare

    def set_analysis_mode(self, mode="full"):
        """
        Configure analysis settings based on predefined modes.

        Args:
            mode (str): Analysis mode - one of:
                - 'quick': mu probe and the G = E test only
                - 'standard': adds the estim criterion and quasi-homogeneity
                - 'full': every check and the N + 2 truncation re-run

        Returns:
            dict: The current analysis settings
        """
        if mode == "quick":
            self.checks = ["mu_probe", "g_equals_e"]
            self.confirm_truncation = False
        elif mode == "standard":
            self.checks = ["mu_probe", "g_equals_e", "estim", "quasihomogeneous"]
            self.confirm_truncation = False
        elif mode == "full":
            self.checks = list(AVAILABLE_CHECKS)
            self.confirm_truncation = True
        else:
            raise UsageError(f"unknown analysis mode '{mode}' (use quick, standard or full)")

        return self.settings()

    def settings(self):
        return {
            "b_order": self.b_order,
            "order": self.order,
            "samples": list(self.samples),
            "checks": list(self.checks),
            "estim_k": self.estim_k,
            "spair_budget": self.spair_budget,
            "confirm_truncation": self.confirm_truncation,
        }
