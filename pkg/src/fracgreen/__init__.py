"""Periodic Green's function of ``c + (-Laplacian)**(alpha/2)`` and Mittag-Leffler functions."""

from .errors import (BracketFailure, CurvesDisjoint, DomainError, FracGreenError, InvalidInterval,
                     NonConvergence, NoRoot, SeriesDiverging, SingularPoint, TailNotResolved,
                     TruncationFailure, ValidityViolation)
from .green import (GreenMethod, GreenParams, PiMethod, ProfileSample, c_alpha, green_at_pi,
                    green_closed_alpha2, green_closed_alpha4, green_deriv_alpha4,
                    green_deriv_integral, green_fourier, green_fourier_with_error,
                    green_integral, profile)
from .mittag_leffler import (MLMethod, MLQuery, ml_asymptotic_sub2, ml_asymptotic_sup2,
                             ml_deriv_identity_residual, ml_eval, ml_eval_array,
                             ml_integral_rep, ml_series)
from .quadrature import (QuadConfig, QuadResult, adaptive_quad, oscillatory_cos_quad,
                         semi_infinite_quad, wynn_epsilon)
from .series import SeriesControl
from .zeros import (I1_asym, I2_asym, I_ab, I_ab_split, OscIntegralParams, ZeroCurve, ZeroRecord,
                    ab_from_c, coalescence_alpha, count_sign_changes, green_pi, pair_exists,
                    predict_first_zero, scan_pi_zeros, transcendental_roots_alpha4, zero_curves)

__version__ = "0.1.0"
