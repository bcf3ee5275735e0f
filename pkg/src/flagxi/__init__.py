"""Exact computations for Springer morphisms, Schubert calculus and orthogonal Grassmannian rings."""

__version__ = "0.1.0"
