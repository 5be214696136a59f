"""Exact-arithmetic invariants of veering triangulations.

Computes the veering, taut, and AB polynomials of a veering
triangulation together with the dual/flow graph structures, homology,
cones of carried classes and homology directions, Thurston-norm face
data, and a layeredness decision.  All arithmetic is exact (integers,
rationals, Laurent polynomials over the integers); there is no floating
point anywhere in the computation path.
"""

__version__ = "0.1.0"
