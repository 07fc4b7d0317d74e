"""jetmoduli - exact moduli dimensions and Poincare series for jets of affine connections."""

__version__ = "0.3.0"
