"""Subsumption and ground interpolation for EL-family concept boxes,
decided by reduction to ground Horn problems over semilattices with
monotone operators."""

__version__ = "0.1.0"
