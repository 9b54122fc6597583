"""Explicit hyperbolicity constants, finite-instance verification and curtain-model experiments."""
