"""The coefficient sequence R_n and the identities it satisfies.

R_0 = 0, R_{2n} + R_{2n+1} = lambda, R_{2n} R_{2n-1} = R_n.
Values are filled in increasing index order, so every R_{2n} only needs the
already computed R_n and R_{2n-1}.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import CapError, DegenerateRecursionError, DomainError, RangeError, RegimeError, UsageError
from .numerics import (
    DEFAULT_INTERVAL_PRECISION,
    Backend,
    Interval,
    Ordering,
    Scalar,
    coerce,
    compare,
    format_scalar,
    to_float,
)

__all__ = [
    "LambdaParam",
    "RSequence",
    "FamilyResidual",
    "RecurrenceReport",
    "closed_form",
    "exact_cap",
    "generate",
    "perturbed",
    "verify_recurrences",
    "CAP_ENV_VAR",
    "DEFAULT_EXACT_CAP",
]

CAP_ENV_VAR = "BELLISSARD_EXACT_CAP"
DEFAULT_EXACT_CAP = 8192


def exact_cap() -> int:
    """Largest N accepted in exact mode; overridable through ``BELLISSARD_EXACT_CAP``."""
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None or raw == "":
        return DEFAULT_EXACT_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None
    if cap < 0:
        raise UsageError(f"{CAP_ENV_VAR} must be non-negative")
    return cap


@dataclass(frozen=True)
class LambdaParam:
    """The coupling lambda in a chosen backend.

    Construction requires lambda > 0. Values in (0, 2] are only accepted with
    ``unproven_regime=True``; reports built on them carry a regime warning.
    """

    value: Scalar
    backend: Backend
    unproven_regime: bool = False
    text: str | None = field(default=None, compare=False)

    def __post_init__(self):
        zero = coerce(0, self.backend)
        if compare(self.value, zero) is not Ordering.GT:
            raise DomainError(f"lambda must be positive, got {format_scalar(self.value)}")
        if not self.regime_ok and not self.unproven_regime:
            raise RegimeError(
                f"lambda = {format_scalar(self.value)} is not certified > 2; "
                "pass unproven_regime=True to explore it anyway"
            )

    @classmethod
    def of(
        cls,
        value,
        backend: Backend | str = Backend.BIG_RATIONAL,
        *,
        unproven_regime: bool = False,
        precision: int | None = DEFAULT_INTERVAL_PRECISION,
    ) -> "LambdaParam":
        backend = Backend.parse(backend)
        text = value if isinstance(value, str) else None
        return cls(coerce(value, backend, precision), backend, unproven_regime, text)

    @property
    def regime_ok(self) -> bool:
        return compare(self.value, coerce(2, self.backend)) is Ordering.GT

    @property
    def decimal(self) -> str:
        return self.text if self.text is not None else repr(to_float(self.value))


@dataclass(frozen=True)
class RSequence:
    """R_0..R_N for one lambda.

    ``values`` is a float64 array in float mode and a tuple of Fractions or
    Intervals otherwise.
    """

    lam: LambdaParam
    values: Sequence[Scalar]

    @property
    def backend(self) -> Backend:
        return self.lam.backend

    @property
    def N(self) -> int:
        return len(self.values) - 1

    @property
    def regime_warning(self) -> bool:
        return not self.lam.regime_ok

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n: int) -> Scalar:
        if n < 0 or n > self.N:
            raise RangeError(f"R_{n} requested but the sequence stops at R_{self.N}")
        v = self.values[n]
        return float(v) if self.backend is Backend.FLOAT64 else v

    def require(self, n: int) -> None:
        if n > self.N:
            raise RangeError(f"need R_0..R_{n}, sequence stops at R_{self.N}")

    def as_floats(self) -> np.ndarray:
        if self.backend is Backend.FLOAT64:
            return np.asarray(self.values, dtype=float)
        return np.array([to_float(v) for v in self.values], dtype=float)


def _as_lambda(lam, backend, unproven_regime, precision) -> LambdaParam:
    if isinstance(lam, LambdaParam):
        return lam
    return LambdaParam.of(
        lam, backend or Backend.BIG_RATIONAL, unproven_regime=unproven_regime, precision=precision
    )


def generate(
    lam: LambdaParam | str | Fraction | float,
    N: int,
    backend: Backend | str | None = None,
    *,
    unproven_regime: bool = False,
    precision: int | None = DEFAULT_INTERVAL_PRECISION,
    cap: int | None = None,
) -> RSequence:
    """Compute R_0..R_N.

    ``lam`` is either a :class:`LambdaParam` or a raw value that is turned
    into one with ``backend`` (default exact). Exact mode refuses N above
    ``cap`` (default :func:`exact_cap`).

    Raises DegenerateRecursionError when some R_{2n-1} is zero (or, for
    intervals, encloses zero); that can only happen for lambda <= 2.
    """
    lam = _as_lambda(lam, backend, unproven_regime, precision)
    if N < 0:
        raise UsageError("N must be non-negative")
    if lam.backend is Backend.BIG_RATIONAL:
        limit = exact_cap() if cap is None else cap
        if N > limit:
            raise CapError(f"N = {N} exceeds the exact-mode cap {limit} (set {CAP_ENV_VAR} to raise it)")

    fl = lam.backend is Backend.FLOAT64
    lv = float(lam.value) if fl else lam.value
    zero = 0.0 if fl else coerce(0, lam.backend, precision)
    R = [zero] * (N + 1)
    if N >= 1:
        R[1] = lv
    for n in range(1, N // 2 + 1):
        m = 2 * n
        try:
            R[m] = R[n] / R[m - 1]
        except ZeroDivisionError:
            raise DegenerateRecursionError(m - 1) from None
        if m + 1 <= N:
            R[m + 1] = lv - R[m]
    values = np.array(R, dtype=float) if fl else tuple(R)
    return RSequence(lam, values)


def closed_form(k: int, lam: LambdaParam | str | Fraction | float, backend=None) -> Scalar:
    """Closed form of R_k for 0 <= k <= 7, evaluated in lambda's backend."""
    lam = _as_lambda(lam, backend, False, DEFAULT_INTERVAL_PRECISION)
    if not 0 <= k <= 7:
        raise UsageError(f"closed forms exist for 0 <= k <= 7, got k = {k}")
    x = lam.value
    one = coerce(1, lam.backend)
    q = x * x - x - one
    forms = {
        0: lambda: coerce(0, lam.backend),
        1: lambda: x,
        2: lambda: one,
        3: lambda: x - one,
        4: lambda: one / (x - one),
        5: lambda: x - one / (x - one),
        6: lambda: (x - one) * (x - one) / q,
        7: lambda: (x * x * x - 2 * x * x + x - one) / q,
    }
    return forms[k]()


@dataclass
class FamilyResidual:
    family: str
    checked: int = 0
    max_residual: Scalar | float = 0
    first_failing_index: int | None = None


@dataclass
class RecurrenceReport:
    backend: Backend
    tol: float
    families: dict[str, FamilyResidual]

    @property
    def first_failing_index(self) -> int | None:
        found = [f.first_failing_index for f in self.families.values() if f.first_failing_index is not None]
        return min(found) if found else None

    @property
    def ok(self) -> bool:
        return self.first_failing_index is None


FAMILIES = ("r2", "r3", "additive", "multiplicative", "combined", "transformed")


def _identities(R: Sequence, lam, one, N: int) -> Iterator[tuple[str, int, object, object]]:
    """Yield (family, highest index touched, lhs, rhs) for every identity within range."""
    for n in range(0, N // 2 + 1):
        if 2 * n + 1 <= N:
            yield "r2", 2 * n + 1, R[2 * n] + R[2 * n + 1], lam
        if n >= 1 and 2 * n <= N:
            yield "r3", 2 * n, R[2 * n] * R[2 * n - 1], R[n]
    for n in range(0, N // 4 + 1):
        if 4 * n + 1 <= N:
            yield "additive", 4 * n + 1, R[4 * n] + R[4 * n + 1], lam
        if 4 * n + 3 <= N:
            yield "additive", 4 * n + 3, R[4 * n + 2] + R[4 * n + 3], lam
    for n in range(0, N // 8 + 1):
        a = 8 * n
        if n >= 1 and a <= N:
            yield "multiplicative", a, R[a] * R[a - 1], R[4 * n]
            yield "combined", a, R[a] * (lam - R[a - 2]), R[4 * n]
            yield "transformed", a, R[a], R[4 * n] / (lam - R[a - 2])
        if a + 2 <= N:
            yield "multiplicative", a + 2, R[a + 2] * R[a + 1], R[4 * n + 1]
            yield "combined", a + 2, R[a + 2] * (lam - R[a]), lam - R[4 * n]
            if n >= 1:
                u, w = R[4 * n], R[a - 2]
                yield "transformed", a + 2, one - R[a + 2], u * (lam - one - w) / (lam * (lam - w) - u)
        if a + 4 <= N:
            yield "multiplicative", a + 4, R[a + 4] * R[a + 3], R[4 * n + 2]
            yield "combined", a + 4, R[a + 4] * (lam - R[a + 2]), R[4 * n + 2]
            yield "transformed", a + 4, R[a + 4], R[4 * n + 2] / (lam - R[a + 2])
        if a + 6 <= N:
            u, w = R[4 * n + 2], R[a + 2]
            yield "multiplicative", a + 6, R[a + 6] * R[a + 5], R[4 * n + 3]
            yield "combined", a + 6, R[a + 6] * (lam - R[a + 4]), lam - R[4 * n + 2]
            yield "transformed", a + 6, one - R[a + 6], u * (lam - one - w) / (lam * (lam - w) - u)


def verify_recurrences(seq: RSequence, tol: float = 1e-10) -> RecurrenceReport:
    """Check the defining recurrences and the identities derived from them.

    Residuals are exact ``|lhs - rhs|`` in rational mode (any nonzero residual
    fails), ``|lhs - rhs| / max(|lhs|, |rhs|)`` in float mode (fails above
    ``tol``), and the largest endpoint magnitude of ``lhs - rhs`` in interval
    mode (fails when that difference excludes zero).
    """
    backend = seq.backend
    if backend is Backend.FLOAT64:
        R = [float(v) for v in seq.values]
        lam = float(seq.lam.value)
    else:
        R = list(seq.values)
        lam = seq.lam.value
    fams = {name: FamilyResidual(name) for name in FAMILIES}

    one = 1.0 if backend is Backend.FLOAT64 else coerce(1, backend)
    for family, idx, lhs, rhs in _identities(R, lam, one, seq.N):
        rec = fams[family]
        rec.checked += 1
        if backend is Backend.FLOAT64:
            scale = max(abs(lhs), abs(rhs))
            res = abs(lhs - rhs) / scale if scale > 0 else 0.0
            failed = not res <= tol
        elif backend is Backend.BIG_RATIONAL:
            res = abs(lhs - rhs)
            failed = res != 0
        else:
            diff = lhs - rhs
            res = max(abs(diff.lo), abs(diff.hi))
            failed = not diff.contains(0)
        if res > rec.max_residual:
            rec.max_residual = res
        if failed and (rec.first_failing_index is None or idx < rec.first_failing_index):
            rec.first_failing_index = idx
    return RecurrenceReport(backend, tol, fams)


def perturbed(seq: RSequence, index: int, delta) -> RSequence:
    """Copy of ``seq`` with R_index shifted by ``delta`` (for fault-injection checks)."""
    seq.require(index)
    if seq.backend is Backend.FLOAT64:
        vals = np.array(seq.values, dtype=float)
        vals[index] += delta
        return RSequence(seq.lam, vals)
    vals = list(seq.values)
    vals[index] = vals[index] + delta
    return RSequence(seq.lam, tuple(vals))
