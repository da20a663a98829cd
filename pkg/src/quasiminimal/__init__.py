"""Quasiminimal subshifts

Decision procedures for substitutive and countable subshifts, the ruler
sequence, the generating order, and halting-table constructions whose
dynamical problems encode the halting problem.
"""
__all__ = ["words", "automata", "ruler", "substitution", "template", "order",
           "oracle", "constructions", "dyck", "params", "errors", "main"]
