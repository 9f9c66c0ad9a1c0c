"""Integer-coefficient polynomial approximation of constants.

Constructions, matching upper/lower bounds, certified norm enclosures, an
exact small-degree search oracle, and decay-rate fitting, on three families
of domains: disks in the complex plane (sup norm), cubes in R^d (sup norm),
and balls in R^d (weighted L_p).
"""

__version__ = "0.1.0"
