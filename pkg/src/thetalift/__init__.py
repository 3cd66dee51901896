"""Primality of theta-curves via the lifted knot in the double branched cover."""

__version__ = "0.1.0"
