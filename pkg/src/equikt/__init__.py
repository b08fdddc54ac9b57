"""Torus-equivariant K_0 presentations of affine Schubert, Demazure and toric varieties."""

__version__ = "0.1.0"
