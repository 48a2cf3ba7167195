"""photonq: photon counting statistics of a single photon scattered by a small quantum system.

Three routes to the same statistics check each other: a discrete collision model
(`photonq.collision`, `photonq.montecarlo`), its continuous time limit (`photonq.continuum`)
and closed forms for a two-level atom (`photonq.analytic`).
"""

from . import model
from . import numerics
from . import collision
from . import continuum
from . import analytic
from . import montecarlo

__all__ = (
    "model",
    "numerics",
    "collision",
    "continuum",
    "analytic",
    "montecarlo",
)
