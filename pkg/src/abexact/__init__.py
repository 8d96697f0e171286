"""Exact arithmetic for abelian-field class invariants.

Subpackages cover: characters of (Z/mZ)^x and their rational / p-adic
orbits, exact cyclotomic arithmetic and p-adic factor contexts, the
Bernoulli minus-part class-number pipeline, Stickelberger elements and
their annihilator/torsion machinery, and the cyclic-cubic unit-index
workbench with its fixture verifier.
"""

__version__ = "0.1.0"
