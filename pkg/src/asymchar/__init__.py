"""Asymptotic characters of compact simple Lie groups.

Root systems and representations, the scaling limit X(lambda, x) of normalized
characters, Duistermaat-Heckman densities, explicit bound constants, numerical
minimization of Re X, root covers mu(G), and Mittag-Leffler lattice sums.
"""

__version__ = "0.1.0"
