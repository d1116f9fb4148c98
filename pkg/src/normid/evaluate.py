"""Evaluate identities on concrete vectors.

Two regimes: exact rational evaluation under the Euclidean squared norm
(the oracle everything else is checked against), and floating evaluation
under an arbitrary l_p or l_inf norm, which supports the counterexample
search: an identity that is valid in inner-product spaces must fail
somewhere under any norm that is not induced by an inner product.

Floating thresholds are relative to the magnitude scale
sum(|c| * ||term||^2): residuals below 1e-9 of scale count as zero,
residuals above 1e-6 of scale count as violations.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .core import IdentityError, PlainIdentity
from .signed import SignedIdentity

Identity = Union[PlainIdentity, SignedIdentity]

ZERO_RTOL = 1e-9
VIOLATION_RTOL = 1e-6

MIN_P = 1.0
MAX_P = 64.0


@dataclass(frozen=True)
class VectorAssignment:
    """One vector per index, all of the same dimension.  Components are
    Fractions/ints for exact evaluation or floats for numeric work."""

    n: int
    dim: int
    vectors: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.vectors) != self.n:
            raise IdentityError(
                f"expected {self.n} vectors, got {len(self.vectors)}"
            )
        if any(len(v) != self.dim for v in self.vectors):
            raise IdentityError("all vectors must have the declared dimension")

    @classmethod
    def of(cls, vectors: Sequence[Sequence]) -> "VectorAssignment":
        vecs = tuple(tuple(v) for v in vectors)
        if not vecs:
            raise IdentityError("assignment needs at least one vector")
        return cls(len(vecs), len(vecs[0]), vecs)


@dataclass(frozen=True)
class NormSpec:
    """Which norm to evaluate under: exact Euclidean, l_p, or l_inf."""

    kind: str  # "euclidean_exact" | "lp" | "linf"
    p: float | None = None

    def __post_init__(self):
        if self.kind == "lp":
            if self.p is None or not (MIN_P <= self.p <= MAX_P):
                raise IdentityError(
                    f"l_p exponent must lie in [{MIN_P}, {MAX_P}], got {self.p!r}"
                )
        elif self.kind in ("euclidean_exact", "linf"):
            if self.p is not None:
                raise IdentityError(f"{self.kind} norm takes no exponent")
        else:
            raise IdentityError(f"unknown norm kind {self.kind!r}")

    @classmethod
    def euclidean_exact(cls) -> "NormSpec":
        return cls("euclidean_exact")

    @classmethod
    def lp(cls, p: float) -> "NormSpec":
        return cls("lp", float(p))

    @classmethod
    def linf(cls) -> "NormSpec":
        return cls("linf")

    def label(self) -> str:
        if self.kind == "lp":
            p = self.p
            return f"lp:{int(p)}" if p == int(p) else f"lp:{p}"
        return "linf" if self.kind == "linf" else "euclidean"

    def norm_sq(self, vector: Sequence[float]) -> float:
        """Squared norm of a float vector."""
        if self.kind == "linf":
            m = max(abs(c) for c in vector)
            return m * m
        p = 2.0 if self.kind == "euclidean_exact" else self.p
        if p == 2.0:
            return math.fsum(c * c for c in vector)
        if p == 1.0:
            s = math.fsum(abs(c) for c in vector)
            return s * s
        return math.fsum(abs(c) ** p for c in vector) ** (2.0 / p)


def parse_norm(text: str) -> NormSpec:
    """Parse CLI-style norm labels: "lp:2", "lp:1.5", "linf", "euclidean"."""
    if text == "linf":
        return NormSpec.linf()
    if text in ("euclidean", "l2"):
        return NormSpec.lp(2.0)
    if text.startswith("lp:"):
        try:
            return NormSpec.lp(float(text[3:]))
        except ValueError as exc:
            raise IdentityError(f"bad l_p exponent in {text!r}") from exc
    raise IdentityError(f"unknown norm {text!r} (expected lp:P or linf)")


# ---------------------------------------------------------------------------
# Exact evaluation


def _check_ambient(ident: Identity, va: VectorAssignment) -> None:
    if va.n != ident.n:
        raise IdentityError(
            f"assignment has {va.n} vectors but the identity needs {ident.n}"
        )


def _sum_for_mask(mask: int, va: VectorAssignment, memo: dict) -> tuple:
    """Vector x_mask = sum of the vectors whose index bit is set, memoized
    so sweeps over many overlapping subsets stay near-linear."""
    cached = memo.get(mask)
    if cached is not None:
        return cached
    low = mask & -mask
    rest = mask & ~low
    base = va.vectors[low.bit_length() - 1]
    if rest:
        prev = _sum_for_mask(rest, va, memo)
        base = tuple(a + b for a, b in zip(prev, base))
    memo[mask] = base
    return base


def _sq_euclid(vector: tuple) -> Fraction:
    total = Fraction(0)
    for c in vector:
        total += Fraction(c) * Fraction(c)
    return total


def eval_exact(ident: Identity, va: VectorAssignment) -> Fraction:
    """Exact value of the identity's left-hand side at `va` under the
    Euclidean squared norm (components must be Fractions or ints)."""
    _check_ambient(ident, va)
    if any(isinstance(c, float) for v in va.vectors for c in v):
        raise IdentityError("exact evaluation needs rational components")
    memo: dict[int, tuple] = {0: (Fraction(0),) * va.dim}
    total = Fraction(0)
    if isinstance(ident, PlainIdentity):
        for mask, coeff in ident.terms.items():
            total += coeff * _sq_euclid(_sum_for_mask(mask, va, memo))
    else:
        for t in ident.terms:
            plus = _sum_for_mask(t.plus, va, memo) if t.plus else memo[0]
            minus = _sum_for_mask(t.minus, va, memo) if t.minus else memo[0]
            diff = tuple(a - b for a, b in zip(plus, minus))
            total += t.coeff * _sq_euclid(diff)
    return total


# ---------------------------------------------------------------------------
# Floating evaluation


def _eval_float_parts(
    ident: Identity, va: VectorAssignment, norm: NormSpec
) -> tuple[float, float]:
    """(residual, magnitude scale) where scale = sum |c| * ||term||^2."""
    _check_ambient(ident, va)
    vectors = [tuple(float(c) for c in v) for v in va.vectors]
    memo: dict[int, tuple] = {0: (0.0,) * va.dim}

    def vec_sum(mask: int) -> tuple:
        cached = memo.get(mask)
        if cached is not None:
            return cached
        low = mask & -mask
        rest = mask & ~low
        base = vectors[low.bit_length() - 1]
        if rest:
            prev = vec_sum(rest)
            base = tuple(a + b for a, b in zip(prev, base))
        memo[mask] = base
        return base

    residual = 0.0
    scale = 0.0
    if isinstance(ident, PlainIdentity):
        for mask, coeff in ident.terms.items():
            term = norm.norm_sq(vec_sum(mask))
            c = float(coeff)
            residual += c * term
            scale += abs(c) * term
    else:
        for t in ident.terms:
            plus = vec_sum(t.plus)
            minus = vec_sum(t.minus)
            term = norm.norm_sq(tuple(a - b for a, b in zip(plus, minus)))
            c = float(t.coeff)
            residual += c * term
            scale += abs(c) * term
    return residual, scale


def eval_float(ident: Identity, va: VectorAssignment, norm: NormSpec) -> float:
    """Floating residual of the identity at `va` under `norm`.  Signed
    terms evaluate ||x_J - x_K|| directly; no inner product is assumed."""
    return _eval_float_parts(ident, va, norm)[0]


def magnitude(ident: Identity, va: VectorAssignment, norm: NormSpec) -> float:
    """The scale residuals are compared against: sum |c| * ||term||^2."""
    return _eval_float_parts(ident, va, norm)[1]


# ---------------------------------------------------------------------------
# Counterexample search


@dataclass(frozen=True)
class Counterexample:
    assignment: VectorAssignment
    residual: float
    scale: float
    trial: int
    kind: str  # "grid" | "random"


#: Deterministic first wave of trial vectors (dimension 2).
GRID_POOL: tuple[tuple[float, float], ...] = (
    (1.0, 0.0),
    (0.0, 1.0),
    (1.0, 1.0),
    (1.0, -1.0),
    (-1.0, 0.0),
    (0.0, -1.0),
    (-1.0, 1.0),
    (-1.0, -1.0),
)

_GRID_CAP = 4096


def find_counterexample(
    ident: Identity,
    norm: NormSpec,
    budget: int = 10000,
    seed: int = 0,
) -> Optional[Counterexample]:
    """Search for vectors where the identity visibly fails under `norm`.

    Deterministic: a fixed grid of +/-unit and +/-(1,1)-type assignments is
    tried first (skipped when it would exceed its cap), then `budget`
    seeded random assignments over dimensions 2..4 with components in
    [-2, 2].  Returns the first trial whose |residual| exceeds the
    violation threshold relative to the trial's magnitude scale, or None —
    exhaustion is a legitimate outcome, not proof of validity.
    """
    if budget < 1:
        raise IdentityError("search budget must be at least 1")
    n = ident.n
    trial = 0
    if len(GRID_POOL) ** n <= _GRID_CAP:
        for combo in itertools.product(GRID_POOL, repeat=n):
            va = VectorAssignment(n, 2, combo)
            residual, scale = _eval_float_parts(ident, va, norm)
            if scale > 0.0 and abs(residual) > VIOLATION_RTOL * scale:
                return Counterexample(va, residual, scale, trial, "grid")
            trial += 1
    rng = random.Random(seed)
    for r in range(budget):
        dim = 2 + r % 3
        vecs = tuple(
            tuple(rng.uniform(-2.0, 2.0) for _ in range(dim)) for _ in range(n)
        )
        va = VectorAssignment(n, dim, vecs)
        residual, scale = _eval_float_parts(ident, va, norm)
        if scale > 0.0 and abs(residual) > VIOLATION_RTOL * scale:
            return Counterexample(va, residual, scale, trial, "random")
        trial += 1
    return None


# ---------------------------------------------------------------------------
# Finite differences


def finite_difference(
    g: Callable[[float], float], r: float, s: float, order: int
) -> float:
    """Order-n forward difference sum(C(n,k) * (-1)^(n-k) * g(r + k*s))."""
    if order < 1:
        raise IdentityError("difference order must be >= 1")
    if s == 0:
        raise IdentityError("step must be nonzero")
    total = 0.0
    sign = -1 if order % 2 else 1
    for k in range(order + 1):
        total += sign * math.comb(order, k) * g(r + k * s)
        sign = -sign
    return total


#: (r, s) pairs chosen to straddle the kinks of piecewise-smooth norms.
DEFAULT_PROBE_GRID: tuple[tuple[float, float], ...] = tuple(
    (r, s) for r in (-2.0, -1.0, 0.0, 1.0) for s in (0.25, 0.5, 1.0)
)

PROBE_RTOL = 1e-8


@dataclass(frozen=True)
class DegreeProbeReport:
    max_abs_third_difference: float
    is_quadratic_on_grid: bool
    samples: tuple[tuple[float, float, float], ...]  # (r, s, third difference)


def degree_probe(
    x: Sequence[float],
    y: Sequence[float],
    norm: NormSpec,
    grid: Sequence[tuple[float, float]] | None = None,
) -> DegreeProbeReport:
    """Probe whether g(t) = ||x + t*y||^2 behaves like a polynomial of
    degree <= 2 by taking third differences over the grid.  In a norm
    induced by an inner product g is exactly quadratic, so every third
    difference vanishes; a kink-straddling grid point exposes other norms.
    """
    if not any(c != 0 for c in y):
        raise IdentityError("direction vector y must be nonzero")
    if len(x) != len(y):
        raise IdentityError("x and y must have the same dimension")
    grid = DEFAULT_PROBE_GRID if grid is None else tuple(grid)

    def g(t: float) -> float:
        return norm.norm_sq(tuple(a + t * b for a, b in zip(x, y)))

    samples = []
    g_scale = 1.0
    for r, s in grid:
        samples.append((r, s, finite_difference(g, r, s, 3)))
        g_scale = max(g_scale, *(abs(g(r + k * s)) for k in range(4)))
    worst = max(abs(d) for _, _, d in samples)
    return DegreeProbeReport(
        max_abs_third_difference=worst,
        is_quadratic_on_grid=worst <= PROBE_RTOL * g_scale,
        samples=tuple(samples),
    )
