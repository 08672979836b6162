"""Anticyclotomic p-adic L-functions of definite quaternion algebras, built
from Gross points on the Bruhat-Tits tree."""

__version__ = "0.1.0"
