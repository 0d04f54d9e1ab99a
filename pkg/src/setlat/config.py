"""Configuration for setlat: numeric defaults, environment overrides, typed views."""

import os
from typing import Any, Dict, Optional

from .domain.exceptions import ConfigurationError
from .domain.models import DiniConfig, Tolerances

# Try to load environment variables from .env file
try:
    from pathlib import Path

    from dotenv import load_dotenv

    env_path = Path(__file__).parent.parent.parent / ".env"
    load_dotenv(dotenv_path=env_path)
except ImportError:
    # dotenv not installed, that's okay
    pass


# Default configuration
DEFAULT_CONFIG: Dict[str, Any] = {
    # tolerances
    "tau": 1e-9,
    "tau_h": 1e-6,
    "tau_strict": 1e-7,
    "eps_lsc": 1e-6,
    "guard_tol": 1e-12,
    # lower Dini discretization
    "dini_t0": 0.1,
    "dini_rho": 0.5,
    "dini_k": 24,
    "dini_window": 6,
    "dini_stability_tol": 1e-4,
    "dini_extrapolate": True,
    "dini_residual_depth": 10,
    # sampling
    "segment_points": 129,
    "hull_edge_samples": 9,
    "dual_refinement": 1,
    # logging
    "log_level": "WARNING",
    "log_format": "text",
    "log_file": None,
}

# Environment variable mappings
CONFIG_ENV_VARS = {
    "SETLAT_TAU": "tau",
    "SETLAT_TAU_H": "tau_h",
    "SETLAT_TAU_STRICT": "tau_strict",
    "SETLAT_EPS_LSC": "eps_lsc",
    "SETLAT_GUARD_TOL": "guard_tol",
    "SETLAT_DINI_T0": "dini_t0",
    "SETLAT_DINI_RHO": "dini_rho",
    "SETLAT_DINI_K": "dini_k",
    "SETLAT_DINI_WINDOW": "dini_window",
    "SETLAT_DINI_STABILITY_TOL": "dini_stability_tol",
    "SETLAT_DINI_EXTRAPOLATE": "dini_extrapolate",
    "SETLAT_DINI_RESIDUAL_DEPTH": "dini_residual_depth",
    "SETLAT_SEGMENT_POINTS": "segment_points",
    "SETLAT_HULL_EDGE_SAMPLES": "hull_edge_samples",
    "SETLAT_DUAL_REFINEMENT": "dual_refinement",
    "SETLAT_LOG_LEVEL": "log_level",
    "SETLAT_LOG_FORMAT": "log_format",
    "SETLAT_LOG_FILE": "log_file",
}


def _coerce(env_var: str, raw: str, default: Any) -> Any:
    """Convert an environment string to the type of its default."""
    try:
        if isinstance(default, bool):
            return raw.lower() in ("true", "1", "yes")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
    except ValueError as e:
        raise ConfigurationError(
            f"Invalid value for {env_var}: {raw!r}", {"variable": env_var}
        ) from e
    return raw


def load_config(overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Load configuration from defaults, environment variables and overrides."""
    config = DEFAULT_CONFIG.copy()

    for env_var, config_key in CONFIG_ENV_VARS.items():
        env_value = os.getenv(env_var)
        if env_value is not None:
            config[config_key] = _coerce(env_var, env_value, config[config_key])

    for key, value in (overrides or {}).items():
        if key not in DEFAULT_CONFIG:
            raise ConfigurationError(f"Unknown configuration key: {key}")
        if value is not None:
            config[key] = value

    validate_config(config)
    return config


def validate_config(config: Dict[str, Any]) -> None:
    """Validate ranges of the numeric configuration."""
    for key in ("tau", "tau_h", "tau_strict", "eps_lsc", "guard_tol",
                "dini_t0", "dini_stability_tol"):
        if not config[key] > 0:
            raise ConfigurationError(f"{key} must be positive", {"value": config[key]})

    if not 0 < config["dini_rho"] < 1:
        raise ConfigurationError("dini_rho must lie in (0, 1)")

    if not config["dini_k"] > config["dini_window"] >= 1:
        raise ConfigurationError(
            "dini_k must exceed dini_window and dini_window must be at least 1",
            {"dini_k": config["dini_k"], "dini_window": config["dini_window"]},
        )

    if config["dini_residual_depth"] < 2:
        raise ConfigurationError("dini_residual_depth must be at least 2")

    if config["segment_points"] < 33:
        raise ConfigurationError("segment_points must be at least 33")

    if config["hull_edge_samples"] < 2:
        raise ConfigurationError("hull_edge_samples must be at least 2")

    if config["dual_refinement"] < 0:
        raise ConfigurationError("dual_refinement must be nonnegative")

    if config["log_format"] not in ("text", "json"):
        raise ConfigurationError("log_format must be 'text' or 'json'")


def get_tolerances(config: Optional[Dict[str, Any]] = None) -> Tolerances:
    """Typed view of the tolerance settings."""
    config = config or load_config()
    return Tolerances(
        tau=config["tau"],
        tau_h=config["tau_h"],
        tau_strict=config["tau_strict"],
        eps_lsc=config["eps_lsc"],
        guard_tol=config["guard_tol"],
    )


def get_dini_config(config: Optional[Dict[str, Any]] = None) -> DiniConfig:
    """Typed view of the Dini discretization settings."""
    config = config or load_config()
    return DiniConfig(
        t0=config["dini_t0"],
        rho=config["dini_rho"],
        K=config["dini_k"],
        window=config["dini_window"],
        stability_tol=config["dini_stability_tol"],
        extrapolate=config["dini_extrapolate"],
        residual_depth=config["dini_residual_depth"],
    )


def get_logging_config(config: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Logging settings in the shape configure_logging expects."""
    config = config or load_config()
    return {
        "level": config["log_level"],
        "format_type": config["log_format"],
        "log_file": config["log_file"],
    }


def get_application_config(
    overrides: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """Get complete application configuration."""
    config = load_config(overrides)
    return {
        "tolerances": get_tolerances(config),
        "dini": get_dini_config(config),
        "logging": get_logging_config(config),
        "segment_points": config["segment_points"],
        "hull_edge_samples": config["hull_edge_samples"],
        "dual_refinement": config["dual_refinement"],
        "debug": os.getenv("DEBUG", "false").lower() in ("true", "1", "yes"),
    }
