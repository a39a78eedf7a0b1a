"""Exact class-group statistics for cubic fields.

Enumeration of cubic fields by discriminant, local splitting data, class
groups and their S-quotients, 2-Selmer groups, K-group 2-torsion, and the
exact rational mass/average predictions they are compared against.
"""

__version__ = "0.1.0"
