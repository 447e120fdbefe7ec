"""Surfaces of degree 10 and sectional genus 6 in P^5 whose ideal has the
syzygy property N_{3,3}.

Submodules
----------
fieldpoly   prime field arithmetic and homogeneous polynomials
linalg      dense elimination over F_p
groebner    ideals, normal forms, Hilbert functions
resolve     graded free resolutions and Betti tables
surfacegen  explicit surfaces from linear systems; the Enriques surface
classifier  the adjunction-theoretic case tree
mfcubic     matrix factorizations over a cubic hypersurface
cli         command-line interface
"""

__version__ = "0.1.0"
