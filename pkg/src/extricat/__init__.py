"""Exact computations with recollements of extriangulated categories and
glued cotorsion pairs, over representation-finite algebras on F_p."""

__version__ = "0.1.0"
