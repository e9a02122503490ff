"""Exact multivariate polynomials over complex rationals.

A ``PolyFunction`` in dimension n maps exponent tuples of length n to
nonzero ``Scalar`` coefficients.  Shifting the argument (Taylor recentering)
is exact.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import comb

from .scalars import Scalar, ZERO, ONE


class PolyFunction:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        clean = {}
        for exps, coeff in (terms or {}).items():
            coeff = Scalar.of(coeff)
            if len(exps) != n:
                raise ValueError(f"exponent tuple {exps} has wrong length for dim {n}")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponents are not allowed")
            if not coeff.is_zero():
                clean[tuple(exps)] = coeff
        self.terms = clean

    # -- constructors --------------------------------------------------------

    @staticmethod
    def constant(n: int, c) -> "PolyFunction":
        c = Scalar.of(c)
        return PolyFunction(n, {(0,) * n: c})

    @staticmethod
    def variable(n: int, i: int) -> "PolyFunction":
        e = [0] * n
        e[i] = 1
        return PolyFunction(n, {tuple(e): ONE})

    @staticmethod
    def monomial(n: int, exps, coeff) -> "PolyFunction":
        return PolyFunction(n, {tuple(exps): Scalar.of(coeff)})

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, ZERO) + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return PolyFunction(self.n, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return PolyFunction(self.n, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, ZERO) + c1 * c2
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return PolyFunction(self.n, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = PolyFunction.constant(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "PolyFunction":
        c = Scalar.of(c)
        if c.is_zero():
            return PolyFunction(self.n)
        return PolyFunction(self.n, {e: cc * c for e, cc in self.terms.items()})

    def _coerce(self, other) -> "PolyFunction":
        if isinstance(other, PolyFunction):
            if other.n != self.n:
                raise ValueError("dimension mismatch")
            return other
        return PolyFunction.constant(self.n, other)

    def __eq__(self, other):
        if not isinstance(other, PolyFunction):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    # -- calculus ------------------------------------------------------------

    def partial(self, i: int) -> "PolyFunction":
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c.scale(e[i])
        return PolyFunction(self.n, out)

    def eval(self, point) -> Scalar:
        """Exact evaluation at a point of Scalars/Fractions."""
        pt = [Scalar.of(x) for x in point]
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                for _ in range(k):
                    v = v * x
            total = total + v
        return total

    def gradient(self, point):
        return tuple(self.partial(i).eval(point) for i in range(self.n))

    def shift(self, x0) -> "PolyFunction":
        """Return the polynomial y -> self(x0 + y), computed exactly."""
        x0 = [Scalar.of(x) for x in x0]
        out = PolyFunction(self.n)
        for e, c in self.terms.items():
            # expand prod_i (x0_i + y_i)^{e_i} by binomials
            ranges = [range(k + 1) for k in e]
            terms = {}
            for js in product(*ranges):
                coeff = c
                for i, (k, j) in enumerate(zip(e, js)):
                    coeff = coeff.scale(comb(k, j))
                    for _ in range(k - j):
                        coeff = coeff * x0[i]
                if not coeff.is_zero():
                    terms[js] = terms.get(js, ZERO) + coeff
            out = out + PolyFunction(self.n, terms)
        return out

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.n, ZERO)

    # -- display -------------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t)):
            c = self.terms[e]
            mono = "*".join(
                f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k
            )
            parts.append(f"({c!r}){'*' + mono if mono else ''}")
        return " + ".join(parts)
