"""Scenario configuration: strict per-model schemas with figure-caption
defaults, so each published figure is a one-line run.

Unknown keys are rejected by name (exit code 2 in the CLI); every default
can be overridden from the config file or the command line.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from typing import Any

import numpy as np

__all__ = ["SchemaError", "ScenarioConfig", "load_config", "MODELS",
           "effective_config"]

MODELS = ("goodwin", "keen", "mmc", "ledger", "network", "wedge",
          "balance", "dividend")


class SchemaError(ValueError):
    """Configuration violates the model schema; message names the key."""


RUN_DEFAULTS: dict[str, Any] = {
    "seed": 0,
    "paths": 1,
    "dt": 1e-3,
    "horizon": 10.0,
    "out_dir": "out",
    "svg": False,
    "per_path_csv": False,
    "record_stride": 1,
}

# parameter defaults mirror the published figure captions
PARAM_DEFAULTS: dict[str, dict[str, Any]] = {
    "goodwin": {
        "a": 0.225, "b": 0.20, "c": 0.4, "d": 0.6,
        "omega": 0.005, "sigma_s": 0.0, "sigma_lambda": 0.0,
        "s_w0": 0.75, "lambda_w0": 0.9,
    },
    "keen": {
        "a": 0.225, "b": 0.20, "c": 0.075, "d": 0.03, "r_l": 0.03,
        "nu_f": 0.1, "p": -0.0065, "q": 20.0, "r": -5.0,
        "omega": 0.005, "sigma_s": 0.0, "sigma_lambda": 0.0,
        "s_w0": 0.75, "lambda_w0": 0.9, "gamma_f0": 0.2,
        "with_nu_factor": True, "gamma_cap": 10.0,
    },
    "mmc": {
        "kappa_c": 0.5, "sigma_c": 0.0, "sigma_k": 0.0,
        "alpha0": 0.5, "alpha1": 0.5,
        "upsilon0": -1.6, "upsilon1": 1.1, "upsilon2": 0.1, "upsilon3": -0.2,
        "delta_rf": 0.75, "delta_rb": 0.5, "xi_delta": 0.025, "xi_a": 0.02,
        "r_d": 0.02, "r_l": 0.04, "nu_f": 0.13, "nu_b": 0.1,
        "a": 0.05, "b": 0.05, "c": 0.075, "omega": 0.005,
        "sigma_s": 0.0, "sigma_lambda": 0.0, "alpha": 0.02, "beta": 0.01,
        "c_r0": 3.0, "d_r0": 30.0, "l_r0": 20.0, "d_f0": 20.0, "l_f0": 50.0,
        "k_f0": 40.0, "k_b0": 20.0, "theta_w0": 1.0, "n_w0": 100.0,
        "s_w0": 0.7, "lambda_w0": 0.95,
    },
    "ledger": {
        "script": "two_bank_creation",
        "amount": 2.0,
        "central_bank_fallback": False,
        "repo_haircut": 0.0,
        "bank1": {"external_assets": 19.0, "interbank_assets": 6.0, "cash": 3.0,
                  "external_liabilities": 20.0, "interbank_liabilities": 3.0,
                  "equity": 5.0},
        "bank2": {"external_assets": 24.0, "interbank_assets": 9.0, "cash": 4.0,
                  "external_liabilities": 25.0, "interbank_liabilities": 7.0,
                  "equity": 5.0},
        "events": [],
    },
    "network": {
        "external_assets": [60.0, 80.0],
        "external_liabilities": [50.0, 60.0],
        "mutual": [[0.0, 10.0], [20.0, 0.0]],
        "recoveries": [0.4, 0.4],
        "sigma": [0.4, 0.4],
        "rho": 0.0,
        "mu": 0.0,
        "dynamics": "lognormal",
        "jump_common": 0.0,
        "jump_idiosyncratic": [],
        "jump_theta": [],
    },
    "wedge": {
        "x1_grid": [1.0, 1.75, 2.5, 3.25, 4.0],
        "x2_grid": [1.0, 1.75, 2.5, 3.25, 4.0],
        "external_liabilities": [50.0, 60.0],
        "mutual": [[0.0, 10.0], [20.0, 0.0]],
        "recoveries": [0.4, 0.4],
        "sigma": [0.4, 0.4],
        "rho": 0.0,
        "mu": 0.0,
    },
    "balance": {
        "lam": 0.2, "mu": 0.25, "nu": 0.05, "xi": 0.03, "alpha": 0.15,
        "beta": 0.01, "r": 0.06, "zeta": 0.02, "sigma": 0.0,
        "discount": 0.04, "t_lag": 1.0,
        "x0": 100.0, "i0": 20.0, "c0": 10.0, "d0": 90.0, "y0": 25.0, "e0": 15.0,
        "weights": {"rwa": 0.8, "kappa": 0.105, "k2": 1.0, "k3": 0.0, "k4": 0.0,
                    "rsf_x": 0.65, "rsf_i": 0.5, "asf_d": 0.9, "asf_y": 0.5,
                    "co_d": 0.1, "co_y": 0.4, "ci_x": 0.05, "ci_i": 0.2},
        "grid": {"delta": [0.0, 0.25, 0.5, 0.75, 1.0]},
    },
    "dividend": {
        "mu": 0.05, "sigma": 0.25, "discount": 0.10,
        "lambda1": 0.05, "delta1": 3.00, "lambda2": 0.02, "delta2": 1.00,
        "horizons": [2.0, 5.0, 15.0],
        "e_max_mult": 10.0, "n_grid": 1200, "dtau": 2e-3,
    },
}

_WEIGHT_KEYS = set(PARAM_DEFAULTS["balance"]["weights"])
_GRID_KEYS = {"phi", "psi", "omega", "pi", "delta"}
_LEDGER_BANK_KEYS = set(PARAM_DEFAULTS["ledger"]["bank1"])
_LEDGER_EVENT_KEYS = {"kind", "amount", "bank", "counterparty", "interest"}


@dataclass
class ScenarioConfig:
    model: str
    parameters: dict[str, Any]
    run: dict[str, Any]


def _check_keys(given: dict, allowed: set[str], where: str) -> None:
    for key in given:
        if key not in allowed:
            raise SchemaError(f"unknown key {key!r} in {where}")


def load_config(raw: dict) -> ScenarioConfig:
    """Validate a raw config dict against the model schema and fill defaults."""
    if not isinstance(raw, dict):
        raise SchemaError("configuration must be a JSON object")
    _check_keys(raw, {"model", "parameters", "run"}, "top level")
    model = raw.get("model")
    if model not in MODELS:
        raise SchemaError(
            f"unknown model {model!r}; choose one of {', '.join(MODELS)}")
    params = copy.deepcopy(PARAM_DEFAULTS[model])
    given = raw.get("parameters", {})
    if not isinstance(given, dict):
        raise SchemaError("'parameters' must be an object")
    _check_keys(given, set(params), f"parameters of model {model!r}")
    if model == "balance":
        if "weights" in given:
            _check_keys(given["weights"], _WEIGHT_KEYS, "balance weights")
            params["weights"].update(given.pop("weights"))
        if "grid" in given:
            _check_keys(given["grid"], _GRID_KEYS, "balance control grid")
            params["grid"] = given.pop("grid")
    if model == "ledger":
        for bank_key in ("bank1", "bank2"):
            if bank_key in given:
                _check_keys(given[bank_key], _LEDGER_BANK_KEYS, bank_key)
                params[bank_key].update(given.pop(bank_key))
        if "events" in given:
            for i, ev in enumerate(given["events"]):
                _check_keys(ev, _LEDGER_EVENT_KEYS, f"ledger event {i}")
            params["events"] = given.pop("events")
    params.update(given)

    run = dict(RUN_DEFAULTS)
    run_given = raw.get("run", {})
    if not isinstance(run_given, dict):
        raise SchemaError("'run' must be an object")
    _check_keys(run_given, set(run), "run block")
    run.update(run_given)
    for name in ("dt", "horizon"):
        if not run[name] > 0:
            raise SchemaError(f"run.{name} must be positive")
    if int(run["paths"]) < 1:
        raise SchemaError("run.paths must be at least 1")
    return ScenarioConfig(model=model, parameters=params, run=run)


def effective_config(cfg: ScenarioConfig) -> dict:
    """Defaults-filled dict that reproduces the run when fed back in."""
    return {"model": cfg.model, "parameters": cfg.parameters, "run": cfg.run}
