"""Exact-arithmetic coHochschild homology for finite-type graded
coalgebras over Q and F_p, with box-(co)algebra structure checks,
collapse analysis, and free-loop-space homology tables."""

__version__ = "0.1.0"
