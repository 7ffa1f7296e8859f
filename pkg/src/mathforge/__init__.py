"""Exact-arithmetic worksheet generation and rule-based consultations."""

__version__ = "0.1.0"
