"""Verification and computation engine for the open XXZ chain with
non-diagonal boundaries and the trigonometric SOS model with a
reflecting end."""

__version__ = "0.1.0"
