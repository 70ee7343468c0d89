"""Baseline construction and descriptive statistics for a country-indicator panel."""

__version__ = "0.1.0"
