"""Numerics for Dirichlet L-functions, the series l_chi(t) over their zeros,
the Euler-product side of the absolute tensor square, and zero-side versus
prime-side checks of the key equations."""
from .characters import DirichletCharacter, character_from_label, enumerate_characters, gauss_sum
from .cramer import CramerEvalParams, ParameterError, l_explicit, l_zero_sum
from .keyeq import KeyEqParams, ResidualReport, verify_r1, verify_r2
from .lfunctions import ZeroList, find_zeros, l_value, zeros_for
from .tensor import ContourSpec, TensorEvalParams, tensor_params, tensor_square

__version__ = "0.1.0"
