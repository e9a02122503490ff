"""Symbolic hbar-series, structured prefactors, and asymptotic series.

Correction series are polynomials in hbar with exact coefficients; the
coefficients may be Scalars or any ring elements supporting +, *, scale().
Prefactors keep powers of (2*pi*hbar), pi, hbar, eighth-roots-of-unity
phases, and a 1/sqrt(|det|) factor in structured exact form; they become
floats only on evaluation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import Scalar, ONE, ZERO


class HbarSeries:
    """Finite Laurent-style polynomial in hbar with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        for k, v in (coeffs or {}).items():
            if isinstance(v, (int, Fraction)):
                v = Scalar.of(v)
            if not _is_zero(v):
                self.coeffs[int(k)] = v

    @staticmethod
    def of(v, power=0) -> "HbarSeries":
        return HbarSeries({power: v})

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = out.get(k)
            s = v if s is None else s + v
            if _is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
        return HbarSeries(out)

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def __mul__(self, other):
        if isinstance(other, HbarSeries):
            out = {}
            for k1, v1 in self.coeffs.items():
                for k2, v2 in other.coeffs.items():
                    k = k1 + k2
                    p = v1 * v2
                    s = out.get(k)
                    s = p if s is None else s + p
                    out[k] = s
            return HbarSeries(out)
        return HbarSeries({k: v * other for k, v in self.coeffs.items()})

    def scale(self, fr) -> "HbarSeries":
        return HbarSeries({k: v.scale(fr) for k, v in self.coeffs.items()})

    def truncate(self, order: int) -> "HbarSeries":
        return HbarSeries({k: v for k, v in self.coeffs.items() if k <= order})

    def coeff(self, k: int):
        return self.coeffs.get(k)

    def min_power(self):
        return min(self.coeffs) if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, HbarSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def exp(self, order: int) -> "HbarSeries":
        """exp of a series with strictly positive minimum power, truncated."""
        if self.coeffs and self.min_power() < 1:
            raise ValueError("exp requires the series to start at hbar^1 or higher")
        x = self.truncate(order)
        out = HbarSeries({0: ONE})
        term = HbarSeries({0: ONE})
        k = 1
        while True:
            term = (term * x).truncate(order)
            if term.is_zero():
                break
            out = out + term.scale(Fraction(1, math.factorial(k)) / Fraction(1))
            k += 1
            if k > order + 1:
                break
        return out

    def log1(self, order: int) -> "HbarSeries":
        """log of a series with constant term 1, truncated at `order`."""
        c0 = self.coeffs.get(0)
        if c0 != ONE:
            raise ValueError("log1 requires constant term exactly 1")
        g = self.truncate(order) - HbarSeries({0: ONE})
        out = HbarSeries()
        term = HbarSeries({0: ONE})
        for k in range(1, order + 1):
            term = (term * g).truncate(order)
            if term.is_zero():
                break
            sign = Fraction((-1) ** (k + 1), k)
            out = out + term.scale(sign)
        return out

    def evaluate(self, hbar: float):
        total = 0j
        for k, v in self.coeffs.items():
            total += _to_complex(v) * hbar**k
        return total

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({v!r})*h^{k}" for k, v in sorted(self.coeffs.items()))


def _is_zero(v) -> bool:
    return v.is_zero() if hasattr(v, "is_zero") else not v


def _to_complex(v):
    return v.to_complex() if hasattr(v, "to_complex") else complex(v)


@dataclass(frozen=True)
class Prefactor:
    """coeff * (2*pi*hbar)^a * (2*pi)^b * pi^c * hbar^d * e^{i*pi*s/4} / sqrt(r).

    coeff is an exact Scalar, a..d exact Fractions, s an integer mod 8, and
    r a positive rational sitting under the square root.
    """

    coeff: Scalar = ONE
    two_pi_hbar_pow: Fraction = Fraction(0)
    two_pi_pow: Fraction = Fraction(0)
    pi_pow: Fraction = Fraction(0)
    hbar_pow: Fraction = Fraction(0)
    phase_eighth: int = 0
    inv_sqrt_abs: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "phase_eighth", self.phase_eighth % 8)
        if self.inv_sqrt_abs <= 0:
            raise ValueError("the square-root factor must be positive")

    def evaluate(self, hbar: float) -> complex:
        v = self.coeff.to_complex()
        v *= (2 * math.pi * hbar) ** float(self.two_pi_hbar_pow)
        v *= (2 * math.pi) ** float(self.two_pi_pow)
        v *= math.pi ** float(self.pi_pow)
        v *= hbar ** float(self.hbar_pow)
        v *= cmath.exp(1j * math.pi * self.phase_eighth / 4)
        v /= math.sqrt(float(self.inv_sqrt_abs))
        return v

    def structure(self):
        """Everything except the rational coefficient, for exact comparison."""
        return (
            self.two_pi_hbar_pow,
            self.two_pi_pow,
            self.pi_pow,
            self.hbar_pow,
            self.phase_eighth,
            self.inv_sqrt_abs,
        )

    def scaled(self, c: Scalar) -> "Prefactor":
        return Prefactor(
            self.coeff * c,
            self.two_pi_hbar_pow,
            self.two_pi_pow,
            self.pi_pow,
            self.hbar_pow,
            self.phase_eighth,
            self.inv_sqrt_abs,
        )


@dataclass
class PointSeries:
    """Stationary contribution of a single critical point.

    phase_value is S(x0): the factor e^{(i/hbar) S(x0)} stays symbolic.
    corrections is 1 + c_1 hbar + ... with exact Scalar coefficients.
    """

    point: tuple
    phase_value: Scalar
    prefactor: Prefactor
    corrections: HbarSeries
    labels: dict = field(default_factory=dict)

    def evaluate(self, hbar: float, order: int | None = None) -> complex:
        corr = self.corrections if order is None else self.corrections.truncate(order)
        phase = cmath.exp(1j * self.phase_value.to_complex() / hbar)
        return phase * self.prefactor.evaluate(hbar) * corr.evaluate(hbar)


@dataclass
class AsymptoticSeries:
    """Sum of per-critical-point series, truncated at `order` in hbar."""

    points: list
    order: int

    def evaluate(self, hbar: float, order: int | None = None) -> complex:
        return sum(p.evaluate(hbar, order) for p in self.points)

    def leading_scale(self, hbar: float) -> float:
        """Magnitude of the coherent sum of leading prefactors; used to
        normalize remainders in slope fits."""
        groups = {}
        for p in self.points:
            groups.setdefault(p.phase_value, 0j)
            groups[p.phase_value] += p.prefactor.evaluate(hbar)
        return max(abs(v) for v in groups.values()) if groups else 1.0

    def total_by_phase(self):
        """Group points by exact phase value; within each group the prefactor
        structures must agree, and coefficients/corrections are summed.

        Returns {phase_value: (structure, Scalar total coeff, HbarSeries)} for
        exact cross-mode comparisons.
        """
        out = {}
        for p in self.points:
            key = p.phase_value
            struct = p.prefactor.structure()
            weighted = HbarSeries(
                {k: v * p.prefactor.coeff for k, v in p.corrections.coeffs.items()}
            )
            if key in out:
                s0, tot, series = out[key]
                if s0 != struct:
                    raise ValueError(
                        "cannot combine points with different prefactor structure"
                    )
                out[key] = (s0, tot + p.prefactor.coeff, series + weighted)
            else:
                out[key] = (struct, p.prefactor.coeff, weighted)
        return out


def series_totals_equal(a: AsymptoticSeries, b: AsymptoticSeries) -> bool:
    """Exact equality of two series after summing points with equal phase."""
    ta, tb = a.total_by_phase(), b.total_by_phase()
    if set(ta) != set(tb):
        return False
    for key in ta:
        sa, ca, wa = ta[key]
        sb, cb, wb = tb[key]
        if sa != sb or ca != cb or wa != wb:
            return False
    return True
