"""Exact tools around Hadamard quotients of power series over Q and F_q(x):
heights, reductions modulo places, relation search and the algebraicity
criterion built from them."""

__version__ = "0.1.0"

from .errors import HadquotError, SpecSyntaxError
from .fields import FieldCtx, Place, enumerate_places, log_abs, product_formula_defect
from .series import (
    PowerSeries,
    algebraic,
    catalan,
    diff_op,
    hadamard_product,
    hadamard_quotient,
    literal,
    polylog,
    rational,
    scale,
)
from .heights import (
    a_analyticity_audit,
    height,
    radius_profile,
    series_height,
    truncation_height_curve,
    weil_height,
)
from .expsum import (
    ExpSumForm,
    dominant_pole_decompose,
    expsum_to_rational,
    hadamard_inverse_approx,
    rational_to_expsum,
)
from .relations import BivariateRelation, find_relation, siegel_dims, verify_relation
from .reduction import (
    hadamard_inverse_period_mod,
    minimal_relation_mod,
    place_set_density,
    profile,
    reduce_series,
    split_unit_density,
)
from .criterion import criterion_run, dominant_pole_hypothesis, theorem14_check, theorem17_check
from .specfmt import parse_spec, format_spec
