"""Exact symbolic engine for Kac-Moody 2-categories and the affine-to-finite
evaluation 2-functor in rank 3.

The package is organised in layers:

* :mod:`kmeval.scalar` -- exact rationals, Laurent polynomials in q, truncated
  power series.
* :mod:`kmeval.roots` -- integer weights, simple roots, the cyclic bar map.
* :mod:`kmeval.decat` -- the idempotented quantum algebras as word algebras,
  the evaluation homomorphism and its tensor-power verification oracle.
* :mod:`kmeval.diagram` -- string diagrams between 1-morphism words.
* :mod:`kmeval.rewrite` -- the local-relation rewriting engine and graded
  hom-space enumeration.
* :mod:`kmeval.homotopy` -- bounded complexes, chain maps, homotopy solving.
* :mod:`kmeval.evaluation` -- the evaluation 2-functor on generators and the
  relation verification harness.
* :mod:`kmeval.obstruction` -- the multiplicative scalar constraint system and
  its parity solver.
"""

__version__ = "0.1.0"
