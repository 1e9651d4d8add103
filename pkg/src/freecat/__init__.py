"""Automorphisms of categories of finitely generated free algebras.

Free semigroups, monoids and modules over small rings; main functions,
central functions, transported (star) structures and their checks.
"""

from .category import Category, FreeAlgebra, Hom, apply, compose, identity
from .functors import AutomorphismPair, Identity, Inner, ModTwist, SemReversal, Table
from .mainfn import MainFunction, main_function
from .reports import Report
from .universe import Universe
from .varieties import make_variety

__all__ = [
    "Category", "FreeAlgebra", "Hom", "apply", "compose", "identity",
    "AutomorphismPair", "Identity", "Inner", "ModTwist", "SemReversal", "Table",
    "MainFunction", "main_function", "Report", "Universe", "make_variety",
]

__version__ = "0.1.0"
