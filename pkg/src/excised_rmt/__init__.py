"""Excised random-matrix model for families of quadratic twists.

Library layout:

- ``groups``   — reproducible Haar sampling from SO(2N), SO(2N+1), USp(2N), U(N)
- ``spectral`` — eigenangles, characteristic polynomial at 1, excision
- ``stats``    — streaming Monte Carlo statistics (histograms, pair correlation)
- ``theory``   — closed-form density kernels, lower-order terms, matrix sizes
- ``arith``    — fundamental-discriminant families and Euler-product estimators
- ``zeros``    — external zero-data ingestion and comparison reports
- ``cli``      — command-line driver
"""

from excised_rmt.groups import GroupKind, GroupSpec, SeedSpec, GroupMatrix, sample, sample_stream
from excised_rmt.spectral import (
    EigenangleSpectrum,
    CharPolyValue,
    ExcisionRule,
    eigenangles,
    char_poly_at_one,
    first_eigenangle,
    excise,
)
from excised_rmt.theory import SymmetryCase

__all__ = [
    "GroupKind",
    "GroupSpec",
    "SeedSpec",
    "GroupMatrix",
    "sample",
    "sample_stream",
    "EigenangleSpectrum",
    "CharPolyValue",
    "ExcisionRule",
    "eigenangles",
    "char_poly_at_one",
    "first_eigenangle",
    "excise",
    "SymmetryCase",
]
