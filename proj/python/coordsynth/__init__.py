"""Python access to the coordinator synthesis library.

Models are passed as text in the same grammar the command line reads.
"""

import json

from . import _coordsynth
from ._coordsynth import (
    CoordsynthError,
    enumerate_coordinators,
    generate,
    generator_names,
    holds_on_lasso,
    spec_automaton,
)

__all__ = [
    "CoordsynthError",
    "enumerate_coordinators",
    "generate",
    "generator_names",
    "holds_on_lasso",
    "spec_automaton",
    "synthesize",
    "verify",
]


def synthesize(model, mode="symbolic", bounds=None, jobs=1, timeout=None, solver=None):
    """Run synthesis and verification; returns the JSON report as a dict.

    The coordinator's process equations are under ``report["coordinator"]["text"]``
    when one was found.
    """
    return json.loads(_coordsynth.synthesize(model, mode, bounds, jobs, timeout, solver))


def verify(model, coordinator):
    """Check a coordinator; a failing verdict carries a ``witness`` string."""
    return json.loads(_coordsynth.verify(model, coordinator))
