"""Finite Jacobi (symmetric tridiagonal) truncations and their spectra.

Builders cover Bellissard's H (zero diagonal, off-diagonal sqrt(R_{j+1})),
the generic operators T1/T2 built from a lambda_j sequence, the Dyson
mass-spring chain, and the almost Mathieu operator. Spectra come from a
Sturm-sequence bisection written here; all spectral work is float64.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DomainError, RangeError, UsageError
from .numerics import Interval, coerce
from .sequence import RSequence

__all__ = [
    "Provenance",
    "Boundary",
    "JacobiMatrix",
    "ChainSpec",
    "Mode",
    "SpectrumReport",
    "bellissard_determinant",
    "build_bellissard",
    "build_chain",
    "build_from_lambda_seq",
    "build_almost_mathieu",
    "dyson_map",
    "eigenvalues",
    "sturm_count",
    "integrated_density",
    "spectrum_report",
    "mode_frequencies",
    "GOLDEN_MEAN",
]

GOLDEN_MEAN = (math.sqrt(5.0) - 1.0) / 2.0


class Provenance(str, enum.Enum):
    BELLISSARD = "bellissard"
    T1 = "lambda_seq_T1"
    T2 = "lambda_seq_T2"
    DYSON = "dyson"
    ALMOST_MATHIEU = "almost_mathieu"


class Boundary(str, enum.Enum):
    FREE = "free"
    FIXED = "fixed"


@dataclass(frozen=True)
class JacobiMatrix:
    """Symmetric tridiagonal matrix: ``diagonal`` a_1..a_N, ``off_diagonal`` b_1..b_{N-1}.

    b_j couples sites j and j+1. ``meta`` records truncation conventions.
    """

    diagonal: np.ndarray
    off_diagonal: np.ndarray
    provenance: Provenance
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        a = np.asarray(self.diagonal, dtype=float)
        b = np.asarray(self.off_diagonal, dtype=float)
        if a.ndim != 1 or b.ndim != 1 or a.size < 1 or b.size != a.size - 1:
            raise UsageError(f"need N >= 1 diagonal and N-1 off-diagonal entries, got {a.size} and {b.size}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise DomainError("matrix entries must be finite")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "diagonal", a)
        object.__setattr__(self, "off_diagonal", b)
        object.__setattr__(self, "provenance", Provenance(self.provenance))

    @property
    def N(self) -> int:
        return self.diagonal.size

    def gershgorin(self) -> tuple[float, float]:
        a, b = self.diagonal, np.abs(self.off_diagonal)
        radius = np.zeros_like(a)
        radius[:-1] += b
        radius[1:] += b
        return float(np.min(a - radius)), float(np.max(a + radius))

    def truncate(self, n: int) -> "JacobiMatrix":
        """Leading n x n block (Dirichlet cutoff after site n)."""
        if not 1 <= n <= self.N:
            raise UsageError(f"truncation size must lie in [1, {self.N}]")
        return JacobiMatrix(self.diagonal[:n], self.off_diagonal[: n - 1], self.provenance, dict(self.meta))

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diagonal) + np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)


def _sqrt_float(x) -> float:
    """Square root of a non-negative scalar as a float.

    Rationals are rooted exactly to 64 extra bits with integer arithmetic and
    rounded once, so the result is the double nearest sqrt(x) up to at most
    one ulp; intervals use their midpoint.
    """
    if isinstance(x, Interval):
        x = x.midpoint
    if isinstance(x, Fraction):
        if x < 0:
            raise DomainError(f"sqrt of negative value {x}")
        if x == 0:
            return 0.0
        shift = max(0, 128 + x.denominator.bit_length() - x.numerator.bit_length())
        shift += shift % 2
        root = isqrt((x.numerator << shift) // x.denominator)
        return float(Fraction(root, 1 << (shift // 2)))
    x = float(x)
    if x < 0:
        raise DomainError(f"sqrt of negative value {x}")
    return math.sqrt(x)


def build_bellissard(seq: RSequence, N: int) -> JacobiMatrix:
    """N x N truncation of (Hu)(j) = sqrt(R_{j+1}) u(j+1) + sqrt(R_j) u(j-1), j = 1..N.

    Dirichlet cutoff u(0) = u(N+1) = 0, so the coefficient sqrt(R_1) drops out
    and b_j = sqrt(R_{j+1}) for j = 1..N-1.
    """
    if N < 1:
        raise UsageError("matrix size must be at least 1")
    seq.require(N)
    b = [_sqrt_float(seq.values[j + 1]) for j in range(1, N)]
    return JacobiMatrix(np.zeros(N), np.array(b, dtype=float), Provenance.BELLISSARD, {"boundary": "dirichlet"})


def bellissard_determinant(seq: RSequence, N: int):
    """Exact det of the N x N truncated H, in the sequence's own backend.

    With a zero diagonal and b_{k-1}^2 = R_k the three-term recurrence reads
    D_k = -R_k D_{k-2}, so D_N = 0 for odd N and (-1)^{N/2} R_2 R_4 ... R_N
    for even N. No square roots are taken.
    """
    if N < 1:
        raise UsageError("matrix size must be at least 1")
    seq.require(N)
    prev, cur = coerce(1, seq.backend), coerce(0, seq.backend)
    for k in range(2, N + 1):
        prev, cur = cur, -seq[k] * prev
    return cur


@dataclass(frozen=True)
class ChainSpec:
    """Masses m_1..m_M joined by springs K_1..K_{M-1}."""

    masses: tuple
    springs: tuple
    boundary: Boundary = Boundary.FREE

    def __post_init__(self):
        object.__setattr__(self, "masses", tuple(self.masses))
        object.__setattr__(self, "springs", tuple(self.springs))
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        if len(self.masses) < 1 or len(self.springs) != len(self.masses) - 1:
            raise UsageError("a chain of M masses needs exactly M-1 springs")
        if any(not x > 0 for x in self.masses + self.springs):
            raise DomainError("masses and spring constants must be strictly positive")

    @property
    def M(self) -> int:
        return len(self.masses)


def dyson_map(chain: ChainSpec) -> list:
    """lambda_{2j-1} = K_j / m_j and lambda_{2j} = K_j / m_{j+1}, j = 1..M-1.

    Returned as a list whose position 0 holds lambda_1.
    """
    lams = []
    for j, K in enumerate(chain.springs):
        lams.append(K / chain.masses[j])
        lams.append(K / chain.masses[j + 1])
    return lams


LambdaSource = Union[Sequence, Callable[[int], float]]


def _lambda_lookup(lams: LambdaSource, kind: Provenance) -> Callable[[int], float]:
    if callable(lams):
        return lambda i: float(lams(i))

    def get(i: int) -> float:
        if i == 0 and kind is Provenance.T2:
            return 0.0  # free end of the half line
        if not 1 <= i <= len(lams):
            raise RangeError(f"lambda_{i} is needed but only lambda_1..lambda_{len(lams)} were given")
        return float(lams[i - 1])

    return get


def build_from_lambda_seq(lams: LambdaSource, N: int, kind: Provenance | str = Provenance.T2) -> JacobiMatrix:
    """Truncate T1 (whole line) or T2 (half line) to N sites.

    Row j has a_j = -(lambda_{2j-1} + lambda_{2j-2}) and b_j =
    sqrt(lambda_{2j-1} lambda_{2j}). ``lams`` is a sequence holding lambda_1
    at position 0, or a callable i -> lambda_i (needed for T1, whose window
    j = -(N//2) .. N-1-N//2 reaches negative indices). T2 uses sites 1..N
    with lambda_0 = 0; both kinds cut off with Dirichlet conditions at the
    window edges.
    """
    kind = Provenance(kind)
    if kind not in (Provenance.T1, Provenance.T2):
        raise UsageError("kind must be T1 or T2")
    if N < 1:
        raise UsageError("matrix size must be at least 1")
    lam = _lambda_lookup(lams, kind)
    first = 1 if kind is Provenance.T2 else -(N // 2)
    sites = range(first, first + N)
    a = [-(lam(2 * j - 1) + lam(2 * j - 2)) for j in sites]
    b = []
    for j in sites[:-1]:
        l1, l2 = lam(2 * j - 1), lam(2 * j)
        if l1 <= 0 or l2 <= 0:
            raise DomainError(f"lambda values must be positive (row {j})")
        b.append(math.sqrt(l1 * l2))
    meta = {"first_site": first, "boundary": "lambda_0=0 at j=1, dirichlet at j=N" if kind is Provenance.T2 else "dirichlet"}
    return JacobiMatrix(np.array(a), np.array(b), kind, meta)


def build_chain(chain: ChainSpec) -> JacobiMatrix:
    """Jacobi matrix of the mass-weighted chain equations y'' = J y.

    Free ends keep all M masses (missing springs count as zero). Fixed ends pin
    masses 1 and M, leaving the M-2 interior sites j = 2..M-1.
    """
    lams = [float(x) for x in dyson_map(chain)]
    M = chain.M

    def lam(i: int) -> float:
        return lams[i - 1] if 1 <= i <= len(lams) else 0.0

    sites = range(1, M + 1) if chain.boundary is Boundary.FREE else range(2, M)
    if len(sites) < 1:
        raise UsageError("a fixed-end chain needs at least 3 masses")
    a = [-(lam(2 * j - 1) + lam(2 * j - 2)) for j in sites]
    b = [math.sqrt(lam(2 * j - 1) * lam(2 * j)) for j in sites[:-1]]
    return JacobiMatrix(np.array(a), np.array(b), Provenance.DYSON, {"boundary": chain.boundary.value, "first_site": sites[0]})


def build_almost_mathieu(coupling: float, alpha: float, theta: float, N: int) -> JacobiMatrix:
    """b_j = 1 and a_j = coupling * cos 2 pi (theta - alpha j), j = 1..N."""
    if N < 1:
        raise UsageError("matrix size must be at least 1")
    j = np.arange(1, N + 1)
    a = float(coupling) * np.cos(2.0 * np.pi * (float(theta) - float(alpha) * j))
    meta = {"coupling": float(coupling), "alpha": float(alpha), "theta": float(theta), "boundary": "dirichlet"}
    return JacobiMatrix(a, np.ones(N - 1), Provenance.ALMOST_MATHIEU, meta)


# -- Sturm bisection ------------------------------------------------------------


def _pivmin(M: JacobiMatrix) -> float:
    b2 = M.off_diagonal**2
    return np.finfo(float).tiny * max(1.0, float(b2.max()) if b2.size else 1.0)


def _count_below(a: np.ndarray, b2: np.ndarray, x: np.ndarray, pivmin: float) -> np.ndarray:
    """Number of eigenvalues < x for each shift in x (negative LDL^T pivots)."""
    q = a[0] - x
    tiny = np.abs(q) < pivmin
    q[tiny] = -pivmin
    count = (q < 0).astype(np.int64)
    tmp = np.empty_like(q)
    for j in range(1, a.size):
        np.divide(b2[j - 1], q, out=tmp)
        np.subtract(a[j], x, out=q)
        q -= tmp
        np.less(np.abs(q, out=tmp), pivmin, out=tiny)
        q[tiny] = -pivmin
        count += q < 0
    return count


def sturm_count(M: JacobiMatrix, x) -> np.ndarray | int:
    """How many eigenvalues of M lie strictly below each energy in ``x``."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    counts = _count_below(M.diagonal, M.off_diagonal**2, xs, _pivmin(M))
    return int(counts[0]) if np.ndim(x) == 0 else counts


def eigenvalues(M: JacobiMatrix, tol: float = 1e-12) -> np.ndarray:
    """All N eigenvalues, ascending, each to within ``tol``.

    Every eigenvalue index is bracketed inside the Gershgorin interval and
    bisected with Sturm counts; all brackets advance together, one vectorized
    count per sweep.
    """
    if not tol > 0:
        raise UsageError("tolerance must be positive")
    n = M.N
    if n == 1:
        return M.diagonal.copy()
    lo, hi = M.gershgorin()
    pad = tol + 2 * np.finfo(float).eps * max(abs(lo), abs(hi), 1.0)
    a, b2, piv = M.diagonal, M.off_diagonal**2, _pivmin(M)
    target = np.arange(n)
    # one shared sweep over a uniform grid brackets every index at once
    grid = np.linspace(lo - pad, hi + pad, n + 2)
    counts = _count_below(a, b2, grid.copy(), piv)
    counts[0], counts[-1] = 0, n
    counts = np.maximum.accumulate(counts)
    upper = np.searchsorted(counts, target, side="right")
    left, right = grid[upper - 1], grid[upper]
    active = np.arange(n)
    while active.size:
        mid = 0.5 * (left[active] + right[active])
        stuck = (mid <= left[active]) | (mid >= right[active])
        c = _count_below(a, b2, mid, piv)
        above = c > target[active]
        right[active[above]] = mid[above]
        left[active[~above]] = mid[~above]
        width = right[active] - left[active]
        active = active[(width > tol) & ~stuck]
    return 0.5 * (left + right)


def integrated_density(M: JacobiMatrix, energies) -> np.ndarray:
    """Fraction of eigenvalues <= E for each energy, from Sturm counts."""
    e = np.asarray(energies, dtype=float)
    # count(< E') for the next float above E equals count(<= E)
    counts = sturm_count(M, np.nextafter(np.atleast_1d(e), np.inf))
    return np.asarray(counts, dtype=float) / M.N


@dataclass(frozen=True)
class Mode:
    mu: float
    frequency: float | None
    stable: bool


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    gaps: list[tuple[float, float]]
    ids_samples: list[tuple[float, float]]
    mode_frequencies: list[Mode] | None = None
    provenance: str | None = None
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "provenance": self.provenance,
            "N": int(self.eigenvalues.size),
            "eigenvalues": [float(x) for x in self.eigenvalues],
            "gaps": [[float(l), float(r)] for l, r in self.gaps],
            "ids": [[float(e), float(f)] for e, f in self.ids_samples],
            "meta": dict(self.meta),
        }
        if self.mode_frequencies is not None:
            d["modes"] = [{"mu": m.mu, "E": m.frequency, "stable": m.stable} for m in self.mode_frequencies]
        return d


def spectrum_report(
    eigs,
    gap_threshold: float = 0.0,
    ids_resolution: int = 64,
    *,
    modes: list[Mode] | None = None,
    matrix: JacobiMatrix | None = None,
) -> SpectrumReport:
    """Gaps wider than ``gap_threshold`` and the empirical IDS on a uniform grid
    of ``ids_resolution`` energies spanning the spectrum."""
    e = np.asarray(eigs, dtype=float)
    if e.ndim != 1 or e.size == 0:
        raise UsageError("need a non-empty 1-D eigenvalue list")
    if np.any(np.diff(e) < 0):
        raise UsageError("eigenvalues must be sorted ascending")
    if ids_resolution < 1:
        raise UsageError("ids_resolution must be positive")
    gaps = [(float(l), float(r)) for l, r in zip(e[:-1], e[1:]) if r - l > gap_threshold]
    grid = np.linspace(e[0], e[-1], ids_resolution) if ids_resolution > 1 else e[-1:]
    frac = np.searchsorted(e, grid, side="right") / e.size
    ids = list(zip(grid.tolist(), frac.tolist()))
    prov = meta = None
    if matrix is not None:
        prov, meta = matrix.provenance.value, dict(matrix.meta)
    return SpectrumReport(e, gaps, ids, modes, prov, meta or {})


def mode_frequencies(M: JacobiMatrix, tol: float = 1e-12) -> list[Mode]:
    """Oscillation frequencies E = sqrt(-mu) of the chain modes.

    A mode with mu > tol cannot oscillate; it is returned with
    ``stable=False`` and no frequency.
    """
    if M.provenance not in (Provenance.DYSON, Provenance.T1, Provenance.T2):
        raise UsageError(f"mode frequencies need a chain or lambda-sequence matrix, not {M.provenance.value}")
    modes = []
    for mu in eigenvalues(M, tol=tol):
        mu = float(mu)
        if mu > tol:
            modes.append(Mode(mu, None, False))
        elif mu >= -tol:
            modes.append(Mode(mu, 0.0, True))  # rigid translation of a free chain
        else:
            modes.append(Mode(mu, math.sqrt(-mu), True))
    return modes
