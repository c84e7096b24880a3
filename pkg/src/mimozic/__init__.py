"""MIMO Gaussian Z-interference channels: regimes, capacity regions, sum rates."""

__version__ = "0.1.0"
