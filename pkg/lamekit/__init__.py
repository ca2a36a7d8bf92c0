"""Numerics for Lamé's equation: Floquet and Lamé-Wangerin eigenvalues, eigenfunctions and their zeros."""

from lamekit.config import DEFAULT_CONFIG, SolverConfig
from lamekit.elliptic import Modulus, jacobi, modulus_from_k
from lamekit.errors import ConvergenceError, DomainError, LameError, TerminatingSequenceError, WindingRefusedError
from lamekit.floquet import discriminant, floquet_eigenvalues
from lamekit.recurrence import LameParams
from lamekit.special import algebraic_functions, ell_index, gegenbauer_limit, lame_polynomials
from lamekit.spectra import wangerin_eigenvalues
from lamekit.wangerin import SeriesEigenfunction, eigenfunction, evaluate_in_strip, evaluate_on_segment

__all__ = [
    "DEFAULT_CONFIG",
    "ConvergenceError",
    "DomainError",
    "LameError",
    "LameParams",
    "Modulus",
    "SeriesEigenfunction",
    "SolverConfig",
    "TerminatingSequenceError",
    "WindingRefusedError",
    "algebraic_functions",
    "discriminant",
    "eigenfunction",
    "ell_index",
    "evaluate_in_strip",
    "evaluate_on_segment",
    "floquet_eigenvalues",
    "gegenbauer_limit",
    "jacobi",
    "lame_polynomials",
    "modulus_from_k",
    "wangerin_eigenvalues",
]
