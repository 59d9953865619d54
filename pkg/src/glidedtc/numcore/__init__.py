"""Numerical substrate: adaptive unitary integration, DFT, Bessel J0."""

from .bessel import bessel_j0
from .integrate import (
    IntegrationError,
    TimeGrid,
    ToleranceError,
    integrate_schrodinger,
    propagator,
)
from .spectrum import ObservableSeries, Spectrum, dft

__all__ = [
    "IntegrationError",
    "ObservableSeries",
    "Spectrum",
    "TimeGrid",
    "ToleranceError",
    "bessel_j0",
    "dft",
    "integrate_schrodinger",
    "propagator",
]
