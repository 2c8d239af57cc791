"""ordloc: a workbench for finite ordered locales.

Finite frames with causal preorders: axiom checking with counterexample
witnesses, localic cones, hulls, complements, diamonds, futures/pasts,
the space-locale adjunction on finite instances, ideal points, causal
coverages and domains of dependence.
"""

__version__ = "0.1.0"
