"""Exact and fast computations for conjugate Walsh-Fourier analysis on the dyadic group."""

from walshlab.dyadic import ConjugateParameter, modifier, variation
from walshlab.spectral import CylinderFunction, Spectrum, fwht_forward, fwht_inverse

__all__ = [
    "ConjugateParameter",
    "CylinderFunction",
    "Spectrum",
    "fwht_forward",
    "fwht_inverse",
    "modifier",
    "variation",
]

__version__ = "0.1.0"
