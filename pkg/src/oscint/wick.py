"""Closed-form Fresnel integrals and exact Gaussian/Fresnel moments.

``wick_moment`` sums over perfect matchings of the index tuple; the
generating-function ``moment_oracle`` recomputes the same quantity by
iterated symbolic differentiation of exp((h/2i) K^{ij} J_i J_j) and exists
solely as an independent cross-check.  Both carry the formal (h/i)^m
normalization; the expansion engines track their own propagator convention.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import DegenerateForm
from .exact import QuadraticForm, mat_of, quad_analyze
from .scalars import Scalar, I, ONE, ZERO
from .series import HbarSeries, Prefactor

HALF_I_INV = -I  # 1/i


def fresnel_value(q: QuadraticForm, hbar_normalization: bool = False) -> Prefactor:
    """Closed form of the n-dimensional Fresnel integral.

    Lemma normalization (exponent i*Q(x,x)):      pi^{n/2} e^{i pi sign/4} / |det Q|^{1/2}
    hbar normalization (exponent (i/2h)Q_{ij}x^i x^j):
                                      (2 pi h)^{n/2} e^{i pi sign/4} / |det Q|^{1/2}
    """
    _, det, sig = quad_analyze(q)  # raises DegenerateForm when singular
    if not det.is_real():
        raise ValueError("fresnel_value requires a real symmetric form")
    abs_det = abs(det.re)
    if hbar_normalization:
        return Prefactor(
            coeff=ONE,
            two_pi_hbar_pow=Fraction(q.n, 2),
            phase_eighth=sig,
            inv_sqrt_abs=abs_det,
        )
    return Prefactor(
        coeff=ONE,
        pi_pow=Fraction(q.n, 2),
        phase_eighth=sig,
        inv_sqrt_abs=abs_det,
    )


def perfect_matchings(items):
    """All partitions of `items` (a list) into unordered pairs, built by
    pairing the first unmatched element."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i, partner in enumerate(rest):
        for sub in perfect_matchings(rest[:i] + rest[i + 1 :]):
            yield [(first, partner)] + sub


def wick_moment(k_matrix, indices) -> HbarSeries:
    """Moment of the Fresnel weight as (h/i)^m * sum over perfect matchings
    of products of inverse-form entries.  Zero for odd tuples."""
    n = len(indices)
    if n % 2:
        return HbarSeries()
    m = n // 2
    k = mat_of(k_matrix)
    total = ZERO
    for matching in perfect_matchings(list(range(n))):
        prod = ONE
        for a, b in matching:
            prod = prod * k[indices[a]][indices[b]]
            if prod.is_zero():
                break
        total = total + prod
    if total.is_zero():
        return HbarSeries()
    return HbarSeries({m: total * HALF_I_INV**m})


def moment_oracle(k_matrix, indices, bound: int = 10) -> HbarSeries:
    """Same moment via the generating function: expand
    exp((h/2i) K^{ij} J_i J_j) to the needed order, differentiate with
    respect to each listed J index, and evaluate at J = 0."""
    n = len(indices)
    if n > bound:
        raise ValueError(f"tuple length {n} exceeds the oracle bound {bound}")
    k = mat_of(k_matrix)
    dim = len(k)
    if n % 2:
        return HbarSeries()
    m = n // 2
    # polynomial in J with HbarSeries coefficients, as a dict exps -> series
    quad = {}
    for i in range(dim):
        for j in range(dim):
            if k[i][j].is_zero():
                continue
            e = [0] * dim
            e[i] += 1
            e[j] += 1
            e = tuple(e)
            cur = quad.get(e, ZERO) + k[i][j]
            quad[e] = cur
    # exp truncated at total degree n: sum_t (h/2i)^t quad^t / t!
    expo = {(0,) * dim: HbarSeries({0: ONE})}
    power = {(0,) * dim: ONE}  # plain Scalar coefficients of quad^t
    for t in range(1, m + 1):
        nxt = {}
        for e1, c1 in power.items():
            for e2, c2 in quad.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if sum(e) > n:
                    continue
                nxt[e] = nxt.get(e, ZERO) + c1 * c2
        power = nxt
        factor = (HALF_I_INV * Scalar(Fraction(1, 2))) ** t
        scale = Fraction(1, factorial(t))
        for e, c in power.items():
            term = HbarSeries({t: (c * factor).scale(scale)})
            expo[e] = expo.get(e, HbarSeries()) + term
    # differentiate by each index, then evaluate at J = 0
    poly = expo
    for idx in indices:
        nxt = {}
        for e, series in poly.items():
            if e[idx] == 0:
                continue
            ne = list(e)
            ne[idx] -= 1
            ne = tuple(ne)
            contrib = series.scale(Fraction(e[idx]))
            nxt[ne] = nxt.get(ne, HbarSeries()) + contrib
        poly = nxt
    return poly.get((0,) * dim, HbarSeries())
