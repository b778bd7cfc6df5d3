"""Bellissard's coefficient sequence R_n: generation in float, exact and
interval arithmetic, certification of its bounds, limit-periodicity
evidence, and spectra of the associated Jacobi operators."""

from .analysis import (
    BoundsReport,
    ConvergenceReport,
    ScanReport,
    ViolationRecord,
    check_conjecture,
    check_prop1,
    check_splitting,
    check_theorem,
    proposition_decay,
    proposition_limit,
    scan_conjecture,
    theorem_bounds,
    uniformity_table,
)
from .errors import (
    BellissardError,
    BudgetError,
    CapError,
    DegenerateRecursionError,
    DomainError,
    ParseError,
    RangeError,
    RegimeError,
    UsageError,
)
from .numerics import Backend, Interval, Ordering, compare, parse_decimal, to_float
from .operators import (
    GOLDEN_MEAN,
    Boundary,
    ChainSpec,
    Provenance,
    JacobiMatrix,
    SpectrumReport,
    bellissard_determinant,
    build_almost_mathieu,
    build_bellissard,
    build_chain,
    build_from_lambda_seq,
    dyson_map,
    eigenvalues,
    integrated_density,
    mode_frequencies,
    spectrum_report,
    sturm_count,
)
from .sequence import LambdaParam, RSequence, closed_form, generate, verify_recurrences

__version__ = "0.1.0"
