"""
Package settings.

Edit the dictionaries below to change defaults for every caller, or set the
environment variables to override them per shell:

    PM_BANDITS_TOL        membership tolerance for the row-space test
    PM_BANDITS_EXACT      auto | on | off  (rational arithmetic mode)
    PM_BANDITS_SEED_BASE  base seed for experiments
    PM_BANDITS_WORKERS    worker processes for multi-seed experiments

Priority everywhere: explicit argument > environment variable > default.
"""

import os

REDUCTION_SETTINGS = {
    "tol": float(os.getenv("PM_BANDITS_TOL", "1e-9")),
    "exact": os.getenv("PM_BANDITS_EXACT", "auto").lower(),  # auto | on | off
    "max_denominator": 10**6,  # "small fraction" bound for auto exact mode
}

LEARNER_SETTINGS = {
    "default": "reduced:exp3",
    "eta": None,  # None -> horizon-tuned
    "gamma": None,
}

EXPERIMENT_SETTINGS = {
    "seeds": 32,
    "seed_base": int(os.getenv("PM_BANDITS_SEED_BASE", "2011")),
    "workers": int(os.getenv("PM_BANDITS_WORKERS", "1")),
    "epsilon_fraction": 0.5,
    "horizons": [2**k for k in range(10, 18)],
    "lower_bound_horizon": 10_000,
}


def resolve_tol(tol: float | None) -> float:
    """Explicit tolerance if given, otherwise the configured one."""
    if tol is None:
        return REDUCTION_SETTINGS["tol"]
    if not tol > 0:
        raise ValueError(f"Tolerance must be positive, got {tol}")
    return float(tol)


def resolve_exact(exact: bool | None) -> bool | None:
    """Map the explicit flag or the configured mode to True / False / None (auto)."""
    if exact is not None:
        return bool(exact)
    mode = REDUCTION_SETTINGS["exact"]
    if mode in ("on", "1", "true", "yes"):
        return True
    if mode in ("off", "0", "false", "no"):
        return False
    return None
