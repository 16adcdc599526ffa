"""Global extrema of the exponential Takagi class T_v(x) = sum_n v^n T_0(2^n x).

Typical use::

    >>> from takagi_extrema import global_extremum
    >>> rep = global_extremum("3/5", "max")
    >>> rep.value, rep.points()
    (Fraction(5, 6), [Fraction(1, 3), Fraction(2, 3)])

Reals may be given as ints, Fractions, ``"p/q"`` strings, floats, or exact
algebraic points (:class:`AlgebraicRoot`, :func:`from_expression`).
"""

from .consistency import (
    ConsistencyResult,
    Mode,
    catalog_anticonsistent,
    catalog_consistent,
    check_polynomial_criterion,
    consistent_function,
    construct,
    locate_un,
    locate_wk,
    neg_band,
    residual_at_self,
    sign_run_bound,
    sqrt_lift,
)
from .dyadic import DyadicExpansion
from .errors import (
    InvalidParameter,
    NonCanonicalExpansion,
    SignAmbiguous,
    TakagiError,
    TolNotReached,
)
from .extrema import (
    BlockCantor,
    Branch,
    ExtremumReport,
    FourPoints,
    Kind,
    OnePoint,
    ShiftedMinSet,
    TwoPoints,
    assemble_blockcantor,
    assemble_shifted,
    band_from_polynomial,
    extremum_points_from_series,
    global_extremum,
    neg_band_value,
    value_from_series,
)
from .inverse import (
    InverseOutcome,
    Status,
    candidate_roots,
    inverse,
    select_consistent_root,
    series_from_point,
)
from .oracle import grid_extremum, independent_consistent_prefix
from .realpoint import (
    AlgebraicRoot,
    FloatPoint,
    Rational,
    RealPoint,
    as_point,
    from_expression,
    nth_root,
    root_in,
)
from .selfsimilar import chi, chi_digits, chi_product, h_iterate, h_map, transport_Ev
from .takagi_core import (
    EvalParams,
    functional_equation_residual,
    s_vn,
    t0,
    t_v,
    truncation_index,
)
from .unitary import (
    AltGeom,
    ClosedForm,
    Geom,
    Lex,
    NegKFamily,
    PairAlt,
    RationalFunction,
    SignSeq,
    SqrtLift,
    TwoToOne,
    attached_series,
    is_intermediate,
    lex_compare,
)

__version__ = "0.1.0"
