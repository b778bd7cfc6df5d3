"""Bound checks on R_n: the proved four-way split, the conjectured one,
the refuted finer splitting, and the limit-periodicity propositions.

All checks read an immutable :class:`~bellissard.sequence.RSequence`. In
exact mode comparisons are true rational comparisons. In float mode an
absolute margin tolerance (default 1e-9) absorbs rounding so that values
sitting on a bound, such as R_4 = 1/(lambda - 1), are not misreported.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetError, DomainError, RangeError, RegimeError, UsageError
from .numerics import (
    Backend,
    Interval,
    Ordering,
    Scalar,
    coerce,
    compare,
    format_scalar,
    parse_decimal,
    to_float,
)
from .sequence import LambdaParam, RSequence, generate

__all__ = [
    "Kind",
    "ViolationRecord",
    "Attainment",
    "BoundsReport",
    "TheoremBounds",
    "ConvergenceReport",
    "Sample",
    "UniformityRow",
    "ScanRow",
    "ScanReport",
    "theorem_bounds",
    "check_theorem",
    "check_conjecture",
    "check_splitting",
    "check_prop1",
    "scan_conjecture",
    "lambda_grid",
    "proposition_decay",
    "proposition_limit",
    "uniformity_table",
    "CONJECTURE_INEQUALITIES",
    "DEFAULT_MARGIN_TOL",
]

DEFAULT_MARGIN_TOL = 1e-9
DEFAULT_SCAN_BUDGET = 10**8
EXACT_COST_WEIGHT = 256

CONJECTURE_INEQUALITIES = (
    "c1-lower", "c1-upper",
    "c2-lower", "c2-upper",
    "c3-lower", "c3-upper",
    "c4-lower", "c4-upper",
)


class Kind(str, enum.Enum):
    THEOREM = "theorem"
    CONJECTURE = "conjecture"
    SPLITTING = "splitting"
    PROP1 = "prop1"


@dataclass(frozen=True)
class ViolationRecord:
    """One failed inequality.

    ``lhs`` is the sequence value R_index, ``rhs`` the bound it was held to,
    and ``margin`` the signed slack (value - bound for a lower bound, bound -
    value for an upper bound). ``n`` is the family parameter: the n of 4n + r
    for the mod-4 checks, the offset for splitting checks.
    """

    n: int
    index: int
    inequality: str
    lhs: Scalar
    rhs: Scalar
    margin: Scalar
    k: int | None = None

    def to_dict(self) -> dict:
        d = {
            "n": self.n,
            "index": self.index,
            "inequality": self.inequality,
            "lhs": _json_scalar(self.lhs),
            "rhs": _json_scalar(self.rhs),
            "margin": _json_scalar(self.margin),
        }
        if self.k is not None:
            d["k"] = self.k
        return d


@dataclass(frozen=True)
class Attainment:
    """A non-strict bound met with equality (informational)."""

    n: int
    index: int
    inequality: str
    value: Scalar

    def to_dict(self) -> dict:
        return {"n": self.n, "index": self.index, "inequality": self.inequality, "value": _json_scalar(self.value)}


@dataclass
class BoundsReport:
    kind: Kind
    lam: LambdaParam
    checked_count: int
    violations: list[ViolationRecord] = field(default_factory=list)
    attained: list[Attainment] = field(default_factory=list)
    boundary: list[Attainment] = field(default_factory=list)
    undecided: list[tuple[int, int, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def backend(self) -> Backend:
        return self.lam.backend

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def regime_warning(self) -> bool:
        return not self.lam.regime_ok

    def violated(self) -> set[str]:
        return {v.inequality for v in self.violations}

    def first_violation(self, inequality: str) -> ViolationRecord | None:
        for v in self.violations:
            if v.inequality == inequality:
                return v
        return None

    def to_dict(self) -> dict:
        lam = {"decimal": self.lam.decimal}
        if self.backend is not Backend.FLOAT64:
            lam["exact"] = format_scalar(self.lam.value)
        return {
            "kind": self.kind.value,
            "lambda": lam,
            "backend": self.backend.value,
            "checked_count": self.checked_count,
            "violations": [v.to_dict() for v in self.violations],
            "attained": [a.to_dict() for a in self.attained],
            "boundary": [a.to_dict() for a in self.boundary],
            "undecided": [{"n": n, "index": i, "inequality": q} for n, i, q in self.undecided],
            "warnings": list(self.warnings),
        }


def _json_scalar(x):
    if isinstance(x, (Fraction, Interval)):
        return format_scalar(x)
    return float(x)


class _Checker:
    """Accumulates pass/fail results for batches of one-sided bounds."""

    def __init__(self, seq: RSequence, tol: float):
        if tol < 0:
            raise UsageError("margin tolerance must be non-negative")
        self.seq = seq
        self.backend = seq.backend
        self.tol = tol
        self.floats = np.asarray(seq.values, dtype=float) if self.backend is Backend.FLOAT64 else None
        self.zero = 0.0 if self.floats is not None else coerce(0, self.backend)
        self.violations: list[ViolationRecord] = []
        self.attained: list[Attainment] = []
        self.undecided: list[tuple[int, int, str]] = []
        self.indices: set[int] = set()

    def check(self, ident, ns, idxs, side, bound, strict, *, ks=None, sink=None):
        """Hold R[idxs] on ``side`` ("lower" or "upper") of ``bound``.

        ``bound`` is one scalar or a sequence aligned with ``idxs``.
        """
        ns = list(ns)
        idxs = list(idxs)
        if not idxs:
            return
        attained_sink = self.attained if sink is None else sink
        self.indices.update(idxs)
        per_index = isinstance(bound, (list, tuple, np.ndarray))
        if self.floats is not None:
            vals = self.floats[idxs]
            b = np.asarray(bound, dtype=float) if per_index else float(bound)
            margin = vals - b if side == "lower" else b - vals
            bad = margin < -self.tol
            hit = ~bad & (np.abs(margin) <= self.tol) if not strict else np.zeros_like(bad)
            bb = np.broadcast_to(b, vals.shape)
            for i in np.flatnonzero(bad):
                self.violations.append(
                    ViolationRecord(ns[i], idxs[i], ident, float(vals[i]), float(bb[i]), float(margin[i]),
                                    None if ks is None else ks[i])
                )
            for i in np.flatnonzero(hit):
                attained_sink.append(Attainment(ns[i], idxs[i], ident, float(vals[i])))
            return
        for j, (n, idx) in enumerate(zip(ns, idxs)):
            v = self.seq.values[idx]
            b = bound[j] if per_index else bound
            margin = v - b if side == "lower" else b - v
            order = compare(margin, self.zero)
            if order is Ordering.GT:
                continue
            if order is Ordering.INDETERMINATE:
                self.undecided.append((n, idx, ident))
            elif order is Ordering.EQ and not strict:
                attained_sink.append(Attainment(n, idx, ident, v))
            else:
                self.violations.append(ViolationRecord(n, idx, ident, v, b, margin, None if ks is None else ks[j]))

    def report(self, kind: Kind, warnings: list[str], boundary=()) -> BoundsReport:
        key = lambda r: (r.index, r.inequality)  # noqa: E731
        und = sorted(self.undecided, key=lambda t: (t[1], t[2]))
        if und:
            warnings = warnings + [f"{len(und)} comparisons undecided at interval precision"]
        return BoundsReport(
            kind,
            self.seq.lam,
            len(self.indices),
            sorted(self.violations, key=key),
            sorted(self.attained, key=key),
            sorted(boundary, key=key),
            und,
            warnings,
        )


def _regime_warnings(seq: RSequence) -> list[str]:
    if seq.lam.regime_ok:
        return []
    if not seq.lam.unproven_regime:
        raise RegimeError("lambda <= 2 requires the unproven-regime flag")
    return [f"lambda = {seq.lam.decimal} lies outside the proven regime lambda > 2"]


def _class_indices(N: int, r: int, start: int = 0) -> tuple[list[int], list[int]]:
    ns = list(range(start, (N - r) // 4 + 1)) if N >= r else []
    return ns, [4 * n + r for n in ns]


@dataclass(frozen=True)
class TheoremBounds:
    """Per residue class mod 4: (lower, lower strict?, upper, upper strict?)."""

    lam: LambdaParam
    sigma: Scalar
    classes: dict[int, tuple[str, Scalar, bool, Scalar, bool]]


def theorem_bounds(lam: LambdaParam) -> TheoremBounds:
    one = coerce(1, lam.backend)
    x = lam.value
    if compare(x, one) is not Ordering.GT:
        raise DomainError("sigma = 1/(lambda - 1) needs lambda > 1")
    sigma = one / (x - one)
    zero = coerce(0, lam.backend)
    return TheoremBounds(
        lam,
        sigma,
        {
            0: ("p1", zero, True, sigma, False),
            2: ("p2", one - sigma, False, one, True),
            3: ("p3", x - one, True, x - one + sigma, False),
            1: ("p4", x - sigma, False, x, True),
        },
    )


def check_theorem(seq: RSequence, tol: float = DEFAULT_MARGIN_TOL) -> BoundsReport:
    """Check the proved bounds on every residue class mod 4.

    Strict bounds are enforced for n >= 1. The base values R_0..R_3 sit on
    the excluded endpoints by construction; they are checked non-strictly and
    listed in ``boundary`` rather than as violations.
    """
    warnings = _regime_warnings(seq)
    if seq.N < 3:
        raise RangeError("theorem check needs R_0..R_3 at least")
    tb = theorem_bounds(seq.lam)
    chk = _Checker(seq, tol)
    boundary: list[Attainment] = []
    for r in (0, 1, 2, 3):
        label, lo, lo_strict, hi, hi_strict = tb.classes[r]
        ns, idxs = _class_indices(seq.N, r, start=1)
        chk.check(f"{label}-lower", ns, idxs, "lower", lo, lo_strict)
        chk.check(f"{label}-upper", ns, idxs, "upper", hi, hi_strict)
        chk.check(f"{label}-lower", [0], [r], "lower", lo, False, sink=boundary)
        chk.check(f"{label}-upper", [0], [r], "upper", hi, False, sink=boundary)
    return chk.report(Kind.THEOREM, warnings, boundary)


def check_conjecture(seq: RSequence, tol: float = DEFAULT_MARGIN_TOL) -> BoundsReport:
    """Hold each residue class mod 4 between the sequence's own early values:
    R_0 <= R_4n <= R_4, R_6 <= R_4n+2 <= R_2, R_3 <= R_4n+3 <= R_7,
    R_5 <= R_4n+1 <= R_1, for every n >= 0.
    """
    warnings = _regime_warnings(seq)
    if seq.N < 7:
        raise RangeError("conjecture check needs R_0..R_7 at least")
    R = seq.values
    chk = _Checker(seq, tol)
    for label, r, lo, hi in (("c1", 0, 0, 4), ("c2", 2, 6, 2), ("c3", 3, 3, 7), ("c4", 1, 5, 1)):
        ns, idxs = _class_indices(seq.N, r)
        chk.check(f"{label}-lower", ns, idxs, "lower", R[lo], False)
        chk.check(f"{label}-upper", ns, idxs, "upper", R[hi], False)
    return chk.report(Kind.CONJECTURE, warnings)


def _lo_hi(a, b):
    if isinstance(a, Interval):
        return Interval(min(a.lo, b.lo), min(a.hi, b.hi), a.precision), Interval(max(a.lo, b.lo), max(a.hi, b.hi), a.precision)
    return (a, b) if a <= b else (b, a)


def check_splitting(
    seq: RSequence,
    r: int,
    max_k: int,
    offsets: Iterable[int] | None = None,
    tol: float = DEFAULT_MARGIN_TOL,
) -> BoundsReport:
    """Check that R_{k 2^r + n} lies between R_n and R_{2^r + n}.

    Runs over every offset n < 2^r (or the given ``offsets``) and k = 0..max_k.
    """
    warnings = _regime_warnings(seq)
    if r < 0 or max_k < 0:
        raise UsageError("r and max_k must be non-negative")
    period = 1 << r
    offsets = list(range(period)) if offsets is None else sorted(set(offsets))
    if any(not 0 <= n < period for n in offsets):
        raise UsageError(f"offsets must lie in [0, {period})")
    if offsets:
        seq.require(max(max_k, 1) * period + max(offsets))
    chk = _Checker(seq, tol)
    R = seq.values
    for n in offsets:
        lo, hi = _lo_hi(R[n], R[period + n])
        ks = list(range(max_k + 1))
        idxs = [k * period + n for k in ks]
        ns = [n] * len(ks)
        chk.check("split-lower", ns, idxs, "lower", lo, False, ks=ks)
        chk.check("split-upper", ns, idxs, "upper", hi, False, ks=ks)
    return chk.report(Kind.SPLITTING, warnings)


def check_prop1(seq: RSequence, tol: float = DEFAULT_MARGIN_TOL) -> BoundsReport:
    """0 < R_2n < R_n and R_2n <= 1 for 1 <= n <= N/2."""
    warnings = _regime_warnings(seq)
    if seq.N < 2:
        raise RangeError("prop1 check needs R_0..R_2 at least")
    ns = list(range(1, seq.N // 2 + 1))
    idxs = [2 * n for n in ns]
    chk = _Checker(seq, tol)
    one = 1.0 if seq.backend is Backend.FLOAT64 else coerce(1, seq.backend)
    chk.check("prop1-positive", ns, idxs, "lower", chk.zero, True)
    halves = np.asarray(seq.values)[ns] if chk.floats is not None else [seq.values[n] for n in ns]
    chk.check("prop1-decreasing", ns, idxs, "upper", halves, True)
    chk.check("prop1-unit", ns, idxs, "upper", one, False)
    return chk.report(Kind.PROP1, warnings)


# -- lambda scans -------------------------------------------------------------


def _to_fraction(x) -> Fraction:
    if isinstance(x, str):
        return parse_decimal(x)
    if isinstance(x, float):
        return parse_decimal(repr(x))
    return Fraction(x)


def lambda_grid(lo, hi, step) -> list[Fraction]:
    """Exact grid lo, lo + step, ... up to and including hi. Empty if lo > hi."""
    lo, hi, step = _to_fraction(lo), _to_fraction(hi), _to_fraction(step)
    if step <= 0:
        raise UsageError("scan step must be positive")
    if lo > hi:
        return []
    count = int((hi - lo) // step) + 1
    return [lo + k * step for k in range(count)]


@dataclass(frozen=True)
class ScanRow:
    lam: Fraction
    first_violation: dict[str, int | None]
    violation_count: int

    @property
    def c2_violated(self) -> bool:
        return self.first_violation["c2-lower"] is not None or self.first_violation["c2-upper"] is not None

    def to_dict(self) -> dict:
        return {
            "lambda": {"decimal": repr(float(self.lam)), "exact": format_scalar(self.lam)},
            "first_violation": dict(self.first_violation),
            "violation_count": self.violation_count,
        }


@dataclass
class ScanReport:
    """Per-lambda smallest violating n (of 4n + r) for each conjecture inequality.

    The c2 region and threshold bracket are empirical on the grid; nothing
    here claims a proven threshold.
    """

    backend: Backend
    N: int
    rows: list[ScanRow]

    @property
    def c2_region(self) -> list[Fraction]:
        return [row.lam for row in self.rows if row.c2_violated]

    @property
    def region_contiguous(self) -> bool:
        flags = [row.c2_violated for row in self.rows]
        if not any(flags):
            return True
        first = flags.index(True)
        last = len(flags) - 1 - flags[::-1].index(True)
        return all(flags[first : last + 1])

    @property
    def threshold_bracket(self) -> tuple[Fraction, Fraction | None] | None:
        """(largest violating lambda, next grid lambda) or None if nothing violated."""
        if not self.c2_region:
            return None
        lams = [row.lam for row in self.rows]
        i = lams.index(self.c2_region[-1])
        return lams[i], lams[i + 1] if i + 1 < len(lams) else None

    @property
    def any_violation(self) -> bool:
        return any(row.violation_count for row in self.rows)

    def to_dict(self) -> dict:
        bracket = self.threshold_bracket
        return {
            "kind": "scan",
            "backend": self.backend.value,
            "N": self.N,
            "rows": [row.to_dict() for row in self.rows],
            "c2_region": [format_scalar(x) for x in self.c2_region],
            "region_contiguous": self.region_contiguous,
            "threshold_bracket": None if bracket is None else [None if b is None else format_scalar(b) for b in bracket],
        }


def _scan_one(args) -> ScanRow:
    lam, N, backend, unproven, tol = args
    seq = generate(LambdaParam.of(lam, backend, unproven_regime=unproven), N)
    rep = check_conjecture(seq, tol)
    first = {}
    for ident in CONJECTURE_INEQUALITIES:
        v = rep.first_violation(ident)
        first[ident] = None if v is None else v.n
    return ScanRow(lam, first, len(rep.violations))


def scan_conjecture(
    lambda_lo,
    lambda_hi,
    step,
    N: int,
    backend: Backend | str = Backend.FLOAT64,
    *,
    tol: float = DEFAULT_MARGIN_TOL,
    budget: int = DEFAULT_SCAN_BUDGET,
    unproven_regime: bool = False,
    workers: int = 1,
) -> ScanReport:
    """Run :func:`check_conjecture` over an exact lambda grid.

    Grid points are exact rationals; in float mode each is rounded once when
    the sequence is built. The work estimate ``len(grid) * (N + 1)`` (times
    256 in exact mode) must fit in ``budget``. ``workers > 1`` spreads the
    grid over processes; row order stays the grid order.
    """
    backend = Backend.parse(backend)
    grid = lambda_grid(lambda_lo, lambda_hi, step)
    if grid and grid[0] <= 2 and not unproven_regime:
        raise RegimeError("scan grid must lie above lambda = 2 (or pass unproven_regime=True)")
    if N < 7:
        raise RangeError("conjecture scan needs N >= 7")
    weight = EXACT_COST_WEIGHT if backend is not Backend.FLOAT64 else 1
    cost = len(grid) * (N + 1) * weight
    if cost > budget:
        raise BudgetError(
            f"scan cost {cost} exceeds budget {budget}: use a coarser step, a smaller N, or the float backend"
        )
    jobs = [(x, N, backend, unproven_regime, tol) for x in grid]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_scan_one, jobs))
    else:
        rows = [_scan_one(j) for j in jobs]
    return ScanReport(backend, N, rows)


# -- limit-periodicity ----------------------------------------------------------


@dataclass(frozen=True)
class Sample:
    k: int
    index: int
    value: Scalar
    deviation: Scalar

    def to_dict(self) -> dict:
        return {"k": self.k, "index": self.index, "value": _json_scalar(self.value), "deviation": _json_scalar(self.deviation)}


@dataclass
class ConvergenceReport:
    """Samples R_{p 2^k + s} against the limit R_s, in increasing k.

    ``estimated_rate`` is the least-squares slope of log(deviation) against k
    over the final half of the samples; it is descriptive metadata only.
    """

    p: int
    s: int
    k_max: int
    limit: Scalar
    samples: list[Sample]
    monotone_tail: bool
    estimated_rate: float | None

    @property
    def deviations(self) -> np.ndarray:
        return np.array([to_float(x.deviation) for x in self.samples])

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "s": self.s,
            "k_max": self.k_max,
            "limit": _json_scalar(self.limit),
            "samples": [x.to_dict() for x in self.samples],
            "monotone_tail": self.monotone_tail,
            "estimated_rate": self.estimated_rate,
        }


def _abs(x):
    return abs(x)


def _strictly_decreasing(values: Sequence[Scalar]) -> bool:
    return all(compare(b, a) is Ordering.LT for a, b in zip(values, values[1:]))


def _log_slope(ks: Sequence[int], devs: Sequence[float]) -> float | None:
    pts = [(k, math.log(d)) for k, d in zip(ks, devs) if d > 0 and math.isfinite(d)]
    if len(pts) < 2:
        return None
    x, y = np.array(pts).T
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def _convergence(seq: RSequence, p: int, s: int, k_max: int) -> ConvergenceReport:
    if k_max < 0:
        raise UsageError("k_max must be non-negative")
    if p < 1 or s < 0:
        raise UsageError("need p >= 1 and s >= 0")
    seq.require(p * (1 << k_max) + s)
    limit = seq[s]
    samples = []
    for k in range(k_max + 1):
        idx = p * (1 << k) + s
        v = seq[idx]
        samples.append(Sample(k, idx, v, _abs(v - limit)))
    tail = samples[len(samples) // 2 :]
    devs = [x.deviation for x in tail]
    rate = _log_slope([x.k for x in tail], [to_float(d) for d in devs])
    return ConvergenceReport(p, s, k_max, limit, samples, _strictly_decreasing(devs), rate)


def proposition_decay(seq: RSequence, p: int, k_max: int) -> ConvergenceReport:
    """Samples R_{p 2^k}, k = 0..k_max, for odd p; the limit is 0."""
    if p < 1 or p % 2 == 0:
        raise UsageError(f"decay base index p must be a positive odd integer, got {p}")
    return _convergence(seq, p, 0, k_max)


def proposition_limit(seq: RSequence, p: int, s: int, k_max: int) -> ConvergenceReport:
    """Samples |R_{p 2^k + s} - R_s|, k = 0..k_max."""
    return _convergence(seq, p, s, k_max)


@dataclass(frozen=True)
class UniformityRow:
    k: int
    max_deviation: float
    worst: tuple[int, int]


def uniformity_table(seq: RSequence, ps: Iterable[int], ss: Iterable[int], k_max: int) -> list[UniformityRow]:
    """Largest deviation |R_{p 2^k + s} - R_s| over a batch of (p, s), per k."""
    pairs = [(p, s) for p in ps for s in ss]
    if not pairs:
        return []
    devs = {pair: proposition_limit(seq, pair[0], pair[1], k_max).deviations for pair in pairs}
    rows = []
    for k in range(k_max + 1):
        worst = max(pairs, key=lambda pr: (devs[pr][k], -pr[0], -pr[1]))
        rows.append(UniformityRow(k, float(devs[worst][k]), worst))
    return rows
