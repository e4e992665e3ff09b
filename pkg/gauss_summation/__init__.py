"""Gaussian summation of infinite series with 1/k^2 tails.

Summation rules for the discrete measure with mass 1/nu^2 at 1/nu^2, nu a
nonzero integer, together with error estimates, reference sums and a
command-line interface reproducing the standard benchmarks.
"""

__version__ = "1.0.0"
