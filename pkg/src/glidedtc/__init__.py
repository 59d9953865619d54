"""glidedtc: numerical laboratory for a glide-symmetry-enforced discrete time crystal.

Exact two-level dynamics in the instantaneous basis, resonance-root table,
stroboscopic period-doubling diagnostics, band topology (half-integer
winding, pi Berry phase), and an exact interacting Floquet spin-chain
simulator with prethermal-lifetime scaling.
"""

__version__ = "0.1.0"

from .backend import BACKEND

__all__ = ["BACKEND", "__version__"]
