"""Exact-arithmetic toolkit for local zeta integrals, p-adic measures,
compact-group trilinear invariants, and archimedean Gamma-factor identities."""

__version__ = "0.1.0"
