"""Exact verification kernel for differential operators on truncated polynomials,
their Poisson symbols, the Weyl algebra and U(sl2)."""

__version__ = "0.1.0"
