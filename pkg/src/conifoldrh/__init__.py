"""Quantum Riemann-Hilbert machinery for the resolved conifold at desk scale.

Subpackages split along the natural layers: exact lattice/torus algebra
(:mod:`lattice`, :mod:`qtorus`), the numerical special-function layer
(:mod:`bernoulli`, :mod:`contour`, :mod:`multisine`), the solution functions
and identity checks (:mod:`rhsolver`), and the CLI (:mod:`cli`).
"""

__version__ = "0.1.0"
