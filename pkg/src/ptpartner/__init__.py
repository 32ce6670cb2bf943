"""Hermitian partners of PT-symmetric Hamiltonians, and numerical checks of them."""

__version__ = "0.1.0"
