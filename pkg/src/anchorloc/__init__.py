"""Mobile-anchor localization: range-free heard/not-heard algorithms, their
range-based variants and the Monte Carlo harness used to compare them."""

__version__ = "0.1.0"
