"""Python bindings for the dbq solver and experiment runner."""

import json as _json

from ._dbq import (
    BlowUpError,
    ConfigError,
    ConvergenceError,
    certify_bound,
    eta,
    fit_rate,
    list_experiments,
    log_grid,
    omega,
    propagator,
    radial_norms,
    roots,
    time_grid,
)
from ._dbq import run_config as _run_config


def run(config, threads=1):
    """Run a config given as a dict or JSON string; returns the parsed report."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return _json.loads(_run_config(text, threads))


__all__ = [
    "BlowUpError",
    "ConfigError",
    "ConvergenceError",
    "certify_bound",
    "eta",
    "fit_rate",
    "list_experiments",
    "log_grid",
    "omega",
    "propagator",
    "radial_norms",
    "roots",
    "run",
    "time_grid",
]
