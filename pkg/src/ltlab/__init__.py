"""Exact verification laboratory for determinantal hypersurfaces with
good reduction, their character-sum L-functions, and the associated
formal-module congruences."""

from .ffield import (CyclotomicInteger, FieldDesc, FieldElement, field_of,
                     make_field, prime_power, psi_value, rel_trace)
from .hypersurface import (HyperParams, count_points, d_as, d_full,
                           hermitian_check, subtrace_histogram)
from .lfunc import (char_sums_all, conjecture_report, l_series, predicted_S,
                    zeta_consistency)
from .skewpoly import SkewPolynomial, d_operator, r_action, symmetry_report
from .symbolic import IDENTITY_NAMES, MultiPoly, verify_identity
from .formalmod import (AdditivePolynomial, TruncatedSeries,
                        additive_root_lift, drinfeld_check, make_lt,
                        make_univ, mu_n, verify_section3)
from .congruence import (SamplePoint, TowerModel, build_tower,
                         congruence_report, sample_point)

__version__ = "1.0.0"
