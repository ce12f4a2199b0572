"""Symbolic toolkit for the plane Cremona group over perfect fields:
Galois orbits, Mori fiber spaces, Sarkisov links, word rewriting, and
homomorphisms onto free products of direct sums of Z/2Z."""

__version__ = "0.1.0"
