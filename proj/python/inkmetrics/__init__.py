"""Drawing metrics from timestamped stroke logs.

Fourteen per-drawing metrics (step-length exponent, Hurst index, temporal
Gini, entropy, convex-hull coverage, colour profile, ...) plus the
correlation / residualization / Varimax-PCA / pruning / consensus workflow
that organizes them into dimensions. Everything is implemented in the C++
core; this package re-exports the bound surface.
"""

from ._inkmetrics import *  # noqa: F401,F403
from ._inkmetrics import __version__  # noqa: F401
