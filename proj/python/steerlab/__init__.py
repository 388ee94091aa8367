"""Quantum steering in collision models.

Structured results are returned as plain dicts. Configurations use the same
schema as the ``steerlab`` command line tool and may be given as dicts; missing
keys take their defaults.
"""

import json
from pathlib import Path

from . import _steerlab
from ._steerlab import (
    DomainError,
    InputError,
    ResourceError,
    SearchError,
    SolverError,
    collision_unitary,
    coupling,
    trajectory,
)

__version__ = _steerlab.__version__

__all__ = [
    "DomainError",
    "InputError",
    "ResourceError",
    "SearchError",
    "SolverError",
    "collision_unitary",
    "coupling",
    "trajectory",
    "config",
    "ideal_assemblage",
    "steering_weight",
    "lower_bound",
    "find_third_strategy",
    "run",
]


def _config_text(cfg):
    doc = {"version": 1}
    doc.update(cfg or {})
    return json.dumps(doc)


def config(cfg=None):
    """Fully resolved configuration with defaults filled in."""
    return json.loads(_steerlab.resolve_config(_config_text(cfg)))


def ideal_assemblage(cfg=None):
    """Noiseless assemblage for x1, x2, x3 after N collisions."""
    return json.loads(_steerlab.ideal_assemblage(_config_text(cfg)))


def steering_weight(assemblage, cfg=None):
    """Steering weight of an assemblage document, with its dual certificate."""
    return json.loads(_steerlab.steering_weight(json.dumps(assemblage), _config_text(cfg)))


def lower_bound(cfg=None):
    """Tomography-robust lower bound on exact (infinite-shot) probabilities."""
    return json.loads(_steerlab.lower_bound(_config_text(cfg)))


def find_third_strategy(cfg=None):
    """Search for the x3 directions that maximize the steering weight."""
    return json.loads(_steerlab.find_third_strategy(_config_text(cfg)))


def run(command, out, config_path=None, inputs=(), seed=None):
    """Run one pipeline stage as the command line tool would.

    Returns ``(exit_code, log)``.
    """
    cfg = Path(config_path) if config_path is not None else None
    return _steerlab.run(command, cfg, Path(out), [Path(p) for p in inputs], seed)
