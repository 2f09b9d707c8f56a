"""Delay densities with closed-form evaluation, integration, moments and quantiles.

Three families are supported: uniform on an interval with natural-number
endpoints, piecewise constant with rational breakpoints inside such an
interval, and an exponential tail shifted to a natural-number offset.  Each
family is bounded away from zero on every closed subinterval of its support
interior and admits an exact CDF, mean and inverse CDF, so sampling and
kernel integration never need numerical quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[int, float, Fraction]

#: tolerance for the unit-mass invariant
MASS_TOL = 1e-12


def _frac(x) -> Fraction:
    """Exact conversion to Fraction; accepts int, Fraction, str ("1/2") and float."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    return Fraction(x)  # exact binary expansion of the float


class DelayDensity:
    """Base interface shared by all delay-density kinds."""

    kind: str

    @property
    def support(self) -> tuple[float, float]:
        """(lo, hi) with hi == math.inf for unbounded support."""
        raise NotImplementedError

    def pdf(self, t: Scalar) -> float:
        """Density value at t; zero outside the support."""
        raise NotImplementedError

    def cdf(self, t: Scalar) -> float:
        raise NotImplementedError

    def integrate(self, a: Scalar, b: Scalar) -> float:
        """Exact mass on [a, b].  Raises ValueError when a > b."""
        if a > b:
            raise ValueError(f"reversed integration interval [{a}, {b}]")
        return self.cdf(b) - self.cdf(a)

    def mean(self) -> float:
        raise NotImplementedError

    def quantile(self, p: Scalar) -> float:
        """Smallest t with CDF(t) >= p.  Raises ValueError for p outside [0, 1]."""
        raise NotImplementedError

    def validate(self) -> list[str]:
        """List of invariant violations; empty means well formed."""
        raise NotImplementedError

    def min_positive_on(self, a: Scalar, b: Scalar) -> float | None:
        """Smallest positive density value on [a, b]; None when f == 0 there."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def _check_p(self, p) -> float:
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"quantile level {p} outside [0, 1]")
        return p


@dataclass(frozen=True)
class UniformDensity(DelayDensity):
    """Uniform density on [lo, hi] with natural-number endpoints."""

    lo: int
    hi: int

    kind = "uniform"

    @property
    def support(self):
        return (float(self.lo), float(self.hi))

    def pdf(self, t):
        if self.lo <= t <= self.hi:
            return 1.0 / (self.hi - self.lo)
        return 0.0

    def cdf(self, t):
        if t <= self.lo:
            return 0.0
        if t >= self.hi:
            return 1.0
        return (float(t) - self.lo) / (self.hi - self.lo)

    def mean(self):
        return (self.lo + self.hi) / 2.0

    def quantile(self, p):
        p = self._check_p(p)
        return self.lo + p * (self.hi - self.lo)

    def validate(self):
        out = []
        if not (isinstance(self.lo, int) and isinstance(self.hi, int)):
            out.append(f"uniform support endpoints must be naturals, got [{self.lo}, {self.hi}]")
        if self.lo < 0:
            out.append(f"uniform support starts below zero: {self.lo}")
        if not self.lo < self.hi:
            out.append(f"uniform support must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        return out

    def min_positive_on(self, a, b):
        if max(a, self.lo) <= min(b, self.hi):
            return 1.0 / (self.hi - self.lo)
        return None

    def to_json(self):
        return {"kind": "uniform", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class PiecewiseConstantDensity(DelayDensity):
    """Piecewise-constant density on [lo, hi].

    ``pieces`` is a tuple of (lo, hi, value) triples with exact rational
    endpoints that tile the support contiguously; every value is positive, so
    the density never vanishes inside the support.
    """

    pieces: tuple[tuple[Fraction, Fraction, Fraction], ...]

    kind = "piecewise-constant"

    @staticmethod
    def from_raw(pieces) -> "PiecewiseConstantDensity":
        """Build from (lo, hi, value) triples given as int/float/str/Fraction."""
        return PiecewiseConstantDensity(
            tuple((_frac(a), _frac(b), _frac(v)) for a, b, v in pieces)
        )

    @property
    def support(self):
        return (float(self.pieces[0][0]), float(self.pieces[-1][1]))

    def pdf(self, t):
        if t < self.pieces[0][0] or t > self.pieces[-1][1]:
            return 0.0
        for a, b, v in self.pieces:
            if a <= t < b:
                return float(v)
        if t == self.pieces[-1][1]:  # right support endpoint belongs to the last piece
            return float(self.pieces[-1][2])
        return 0.0

    def cdf(self, t):
        if t <= self.pieces[0][0]:
            return 0.0
        acc = Fraction(0)
        for a, b, v in self.pieces:
            if t >= b:
                acc += v * (b - a)
            else:
                acc += v * (_frac(t) - a) if t > a else 0
                break
        return float(min(acc, Fraction(1)))

    def mean(self):
        return float(sum(v * (b * b - a * a) / 2 for a, b, v in self.pieces))

    def quantile(self, p):
        p = self._check_p(p)
        target = Fraction(p) if p not in (0.0, 1.0) else Fraction(int(p))
        acc = Fraction(0)
        for a, b, v in self.pieces:
            mass = v * (b - a)
            if acc + mass >= target:
                return float(a + (target - acc) / v)
            acc += mass
        return float(self.pieces[-1][1])

    def validate(self):
        out = []
        lo, hi = self.pieces[0][0], self.pieces[-1][1]
        if lo.denominator != 1 or hi.denominator != 1:
            out.append(f"piecewise support endpoints must be naturals, got [{lo}, {hi}]")
        if lo < 0 or not lo < hi:
            out.append(f"piecewise support malformed: [{lo}, {hi}]")
        prev = lo
        for a, b, v in self.pieces:
            if a != prev:
                out.append(f"piecewise pieces not contiguous at {prev} vs {a}")
            if not b > a:
                out.append(f"piecewise piece with empty interval [{a}, {b}]")
            if not v > 0:
                out.append(f"piecewise piece value must be positive, got {v} on [{a}, {b}]")
            prev = b
        total = sum(v * (b - a) for a, b, v in self.pieces)
        if abs(float(total) - 1.0) > MASS_TOL:
            out.append(f"piecewise total mass {float(total)} != 1")
        return out

    def min_positive_on(self, a, b):
        vals = [float(v) for lo, hi, v in self.pieces if lo <= b and hi >= a]
        return min(vals) if vals else None

    def to_json(self):
        lo, hi = self.pieces[0][0], self.pieces[-1][1]
        return {
            "kind": "piecewise-constant",
            "lo": int(lo),
            "hi": int(hi),
            "pieces": [
                {"lo": str(a), "hi": str(b), "value": str(v)} for a, b, v in self.pieces
            ],
        }


@dataclass(frozen=True)
class ShiftedExponentialTail(DelayDensity):
    """Exponential density with rate ``rate`` shifted to start at ``lo``.

    f(t) = rate * exp(-rate * (t - lo)) for t >= lo, zero below; the support
    [lo, inf) is handled in closed form, never by truncation.
    """

    lo: int
    rate: float

    kind = "shifted-tail"

    @property
    def support(self):
        return (float(self.lo), math.inf)

    def pdf(self, t):
        if t < self.lo:
            return 0.0
        return self.rate * math.exp(-self.rate * (float(t) - self.lo))

    def cdf(self, t):
        if t <= self.lo:
            return 0.0
        if t == math.inf:
            return 1.0
        return 1.0 - math.exp(-self.rate * (float(t) - self.lo))

    def mean(self):
        return self.lo + 1.0 / self.rate

    def quantile(self, p):
        p = self._check_p(p)
        if p == 1.0:
            return math.inf
        return self.lo - math.log1p(-p) / self.rate

    def validate(self):
        out = []
        if not isinstance(self.lo, int) or self.lo < 0:
            out.append(f"tail support offset must be a natural number, got {self.lo}")
        if not self.rate > 0:
            out.append(f"tail rate must be positive, got {self.rate}")
        return out

    def min_positive_on(self, a, b):
        if self.lo > b or b == math.inf:
            return None  # unbounded window has no positive floor
        return self.pdf(float(b))

    def to_json(self):
        return {"kind": "shifted-tail", "lo": self.lo, "hi": None, "rate": self.rate}


def density_from_json(obj: dict) -> DelayDensity:
    """Inverse of ``to_json`` for all three kinds; raises ValueError on bad input."""
    kind = obj.get("kind")
    if kind == "uniform":
        return UniformDensity(int(obj["lo"]), int(obj["hi"]))
    if kind == "piecewise-constant":
        pieces = [(p["lo"], p["hi"], p["value"]) for p in obj["pieces"]]
        return PiecewiseConstantDensity.from_raw(pieces)
    if kind == "shifted-tail":
        return ShiftedExponentialTail(int(obj["lo"]), float(obj["rate"]))
    raise ValueError(f"unknown delay density kind: {kind!r}")
