"""causalqed: desk-scale causal perturbation theory.

Symbolic Wick calculus and inductive causal construction, numerical
distribution splitting with on-shell normalization, second-order QED
Green functions, truncated Fock-grid kernel operators, and adiabatic
limit convergence sweeps.
"""

__version__ = "0.1.0"
