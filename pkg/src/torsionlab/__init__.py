"""Exhaustive finite checks for torsion bounds on the discriminant class."""

__version__ = "0.1.0"
