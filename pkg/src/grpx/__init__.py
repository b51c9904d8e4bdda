"""Finite group toolkit: finite fields, permutation and matrix groups, coset
enumeration, modules, symplectic-type groups, Clifford theory and second cohomology."""

__version__ = "0.1.0"
