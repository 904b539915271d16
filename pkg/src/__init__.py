"""Fixed pole globally optimal least squares realization toolkit."""

__version__ = "0.1.0"
