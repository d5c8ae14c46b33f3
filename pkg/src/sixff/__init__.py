"""sixff: an exact verification engine for six-functor calculus on finite
groupoids.

The library instantiates, over finite groupoids with exact coefficients,
the full calculus of correspondences, the six functors, the 2-category of
kernels with suave/prim duality, adjunction and mate machinery, descent
data, and Hecke algebras with their canonical anti-involution - and
machine-checks every structural identity it claims.
"""

__version__ = "0.1.0"
