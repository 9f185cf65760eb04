"""Reduction laboratory for the weak silly substitution calculus.

Modules
-------
terms        named terms with explicit substitutions, parser and printer
calculus     weak rewriting rules, redex enumeration, GC postponement
strategies   call-by-name and call-by-silly strategies
machines     MAM and Silly MAM, read-back, structural reductions
multitypes   silly multi types: derivations, subject reduction/expansion
cbv          closed call-by-value reference evaluator
harness      term enumeration, reduction graphs, property suites
cli          command line front end
"""

from .core import IMPLEMENTATION
from .terms import parse, to_str, alpha_eq

__version__ = "0.1.0"
__all__ = ["IMPLEMENTATION", "parse", "to_str", "alpha_eq"]
