"""Multiple Bernoulli polynomials, q-shifted factorials, multiple elliptic
gamma functions and multiple sine functions, with executable checks of
their functional equations and modular identities."""

from .bernoulli import (BernoulliPoly, PeriodVector, classical_bernoulli_numbers, eval_multiple_bernoulli,
                        multiple_bernoulli_poly, q_cubic)
from .errors import (ConvergenceError, DivergentInput, DomainError, DomainViolation, IllConditioned,
                     InadmissibleSample, MaxTermsExceeded, MultigammaError, PoleOnContour, PoleProximity,
                     QuadratureFailure, RatioOnRealAxis, SlowConvergenceWarning, TruncationCapacity)
from .gammafuncs import (GammaEvaluation, check_g_functional_equation, elliptic_gamma,
                         multiple_elliptic_gamma, theta0)
from .identities import (check_equal_period_gamma, check_felder_varchenko, check_g2_modular,
                         check_gamma_product_identity, check_jacobi, check_modular_transformation,
                         check_sine_product_expansion, check_summation_formula)
from .multisine import (check_sine_relations, multiple_sine, multiple_sine_integral, multiple_sine_product,
                        sine_s1)
from .policy import DEFAULT_POLICY, Estimate, TruncationPolicy
from .qseries import (TauVector, q_polylog, q_shifted_factorial, q_shifted_factorial_product,
                      zero_pole_lattice)
from .quadrature import (ContourKind, ContourSpec, g_integral_rep, integrate_contour, psi2,
                         q_polylog_contour, s2_equal_periods)
from .registry import sweep
from .report import IdentityReport

__version__ = "0.1.0"
