"""Davenport-Heilbronn-type functions: construction, evaluation, zeros and ray curves."""

from .characters import (Character, conductor, conjugate, enumerate_characters, gauss_sum, get_character,
                         is_primitive, parity, value)
from .dh import DHSpec, build_dh, epsilon, eval_dh, eval_W, fe_residual, series_coefficient, theta_from_epsilon
from .lfunc import EvalParams, dirichlet_L, hurwitz_zeta, log_gamma
from .lincomb import ComboFunction, SameFEPair, build_same_fe_pair, combo_eval, combo_fe_residual, make_combo
from .rays import RayCurve, curves_through_zero, trace_preimage
from .zeros import (SearchRect, ZeroRecord, derivative_zero_between, find_zeros, mirror_check, refine_newton,
                    winding_number)

__version__ = "0.1.0"
