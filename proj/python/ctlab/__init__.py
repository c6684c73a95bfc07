"""Continuous-time Gaussian channel lab: spectra, simulation, mutual
information estimators, and max-Gaussian extremes.

The heavy lifting lives in the compiled `_ctlab` extension; this package
just re-exports it. The extension is found either inside the installed
package (pip build) or on sys.path (in-tree CMake build).
"""

try:
    from ._ctlab import *  # noqa: F401,F403
except ImportError:
    from _ctlab import *  # noqa: F401,F403

__version__ = "0.1.0"
