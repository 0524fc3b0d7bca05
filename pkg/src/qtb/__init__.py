"""Shuffle-algebra tools for the Fock modules of the quantum toroidal gl1 algebra.

Exact and high-precision arithmetic for the shuffle algebra and its
bimodule, the Fock representation and its Heisenberg form, the graded
dimension count of the bimodule quotient, Bethe roots by continuation,
and the off-shell Bethe covector.  See ``qtb.cli`` for the command line.
"""

__version__ = "0.1.0"
