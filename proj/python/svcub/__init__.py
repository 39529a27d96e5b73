"""Deterministic cubature pricing for stochastic Volterra integral equations."""

import json as _json

from ._svcub import *  # noqa: F401,F403
from ._svcub import CubatureMeasure, Model, MomentSystem

__version__ = "0.1.0"


def measure_dict(measure: CubatureMeasure) -> dict:
    """Measure as a JSON-compatible dict."""
    return _json.loads(measure.to_json())


def model_from_dict(data: dict) -> Model:
    """Model from a JSON-compatible dict (same format as the CLI model files)."""
    return Model.from_json(_json.dumps(data))


def system_dict(system: MomentSystem) -> dict:
    """Moment system with expectations as a JSON-compatible dict."""
    return _json.loads(system.to_json())
