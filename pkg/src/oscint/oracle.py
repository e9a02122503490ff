"""Independent floating-point oracles: regularized oscillatory quadrature
and remainder-slope fitting.

These never touch the exact pipeline; they exist so every symbolic series
can be checked against an honest numeric integral.  Quadrature uses fixed
tensor-product trapezoid grids (deterministic) with a Gaussian regularizer
e^{-eps Q0(x,x)} and polynomial (Neville) extrapolation of the epsilon
schedule to zero.  Windowed integrands use a smooth plateau bump that is
exactly 1 near the critical region.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientSamples, NonConvergent
from .poly import PolyFunction
from .series import AsymptoticSeries


def _poly_on_grid(poly: PolyFunction, axes):
    """Evaluate a real polynomial on a meshgrid given per-axis 1D arrays."""
    grids = np.meshgrid(*axes, indexing="ij") if len(axes) > 1 else [axes[0]]
    total = np.zeros_like(grids[0], dtype=float)
    for e, c in poly.terms.items():
        term = float(c.re) * np.ones_like(grids[0])
        for g, k in zip(grids, e):
            if k:
                term = term * g**k
        total += term
    return total


def plateau_window(axes, inner: float, outer: float, center=None):
    """Product of per-axis C-infinity plateau bumps: exactly 1 on
    |x - c| <= inner, exactly 0 on |x - c| >= outer."""
    if center is None:
        center = [0.0] * len(axes)

    def ramp(t):
        # smooth partition function: 1 for t>=1, 0 for t<=0
        out = np.zeros_like(t)
        inside = (t > 0) & (t < 1)
        g = np.zeros_like(t)
        g[inside] = np.exp(-1.0 / t[inside])
        h = np.zeros_like(t)
        h[inside] = np.exp(-1.0 / (1.0 - t[inside]))
        out[inside] = g[inside] / (g[inside] + h[inside])
        out[t >= 1] = 1.0
        return out

    grids = np.meshgrid(*axes, indexing="ij") if len(axes) > 1 else [axes[0]]
    w = np.ones_like(grids[0], dtype=float)
    for g, c in zip(grids, center):
        t = (outer - np.abs(g - c)) / (outer - inner)
        w = w * ramp(t)
    return w


@dataclass
class QuadratureSpec:
    phase: PolyFunction
    hbar: float = 1.0
    epsilons: tuple = (0.2, 0.1, 0.05, 0.025, 0.0125)
    points_per_dim: int = 0  # 0 = automatic from the Nyquist estimate
    window: str = "none"  # none | plateau
    window_inner: float = 1.0
    window_outer: float = 3.0
    window_center: tuple = ()
    amplitude: PolyFunction | None = None
    amplitude_abs: bool = False
    density: float = 1.0
    euclidean: bool = False
    residual_threshold: float = 1e-2
    oversample: float = 3.0

    def __post_init__(self):
        if self.phase.n > 3:
            raise ValueError("quadrature supports dimension <= 3")
        eps = tuple(self.epsilons)
        if not eps or any(e <= 0 for e in eps) or any(
            a <= b for a, b in zip(eps[1:], eps)
        ):
            raise ValueError("epsilon schedule must be positive and strictly decreasing")


@dataclass
class QuadratureResult:
    value: complex
    error: float
    per_epsilon: list = field(default_factory=list)


def _box_halfwidth(spec: QuadratureSpec) -> float:
    if spec.window == "plateau":
        return spec.window_outer
    # Gaussian envelope e^{-eps x^2} below 1e-9 outside the box
    return float(np.sqrt(21.0 / min(spec.epsilons)))


def _grid_points(spec: QuadratureSpec, half: float) -> int:
    if spec.points_per_dim:
        return spec.points_per_dim
    # Nyquist from the peak phase rate on the box
    n = spec.phase.n
    rate = 0.0
    for i in range(n):
        dp = spec.phase.partial(i)
        corner = 0.0
        for e, c in dp.terms.items():
            corner += abs(float(c.re)) * half ** sum(e)
        rate = max(rate, corner)
    rate /= spec.hbar
    pts = int(spec.oversample * rate * half) + 200
    return min(pts, 4_000_000)


def oscillatory_integral(spec: QuadratureSpec) -> QuadratureResult:
    """Trapezoid quadrature of density * amplitude * window *
    e^{(i/hbar) S - eps Q0} for each epsilon, extrapolated to eps -> 0."""
    n = spec.phase.n
    half = _box_halfwidth(spec)
    pts = _grid_points(spec, half)
    axes = [np.linspace(-half, half, pts) for _ in range(n)]
    if spec.window_center:
        axes = [ax + c for ax, c in zip(axes, spec.window_center)]
    dx = float(np.prod([ax[1] - ax[0] for ax in axes]))
    weights = None
    for ax in axes:
        w = np.ones(len(ax))
        w[0] = w[-1] = 0.5
        weights = w if weights is None else np.multiply.outer(weights, w)

    phase_vals = _poly_on_grid(spec.phase, axes)
    grids = np.meshgrid(*axes, indexing="ij") if n > 1 else [axes[0]]
    r2 = np.zeros_like(grids[0], dtype=float)
    for g in grids:
        r2 += g * g

    base = np.exp((-1.0 if spec.euclidean else 1j) * phase_vals / spec.hbar)
    base = base * weights * spec.density
    if spec.amplitude is not None:
        amp = _poly_on_grid(spec.amplitude, axes)
        if spec.amplitude_abs:
            amp = np.abs(amp)
        base = base * amp
    if spec.window == "plateau":
        center = spec.window_center or (0.0,) * n
        base = base * plateau_window(axes, spec.window_inner, spec.window_outer, center)
    elif spec.window != "none":
        raise ValueError(f"unknown window {spec.window!r}")

    per_eps = []
    for eps in spec.epsilons:
        vals = base * np.exp(-eps * r2)
        per_eps.append(complex(vals.sum() * dx))

    value, err = _neville_to_zero(list(spec.epsilons), per_eps)
    if not np.isfinite(err) or (
        abs(value) > 0 and err > spec.residual_threshold * max(abs(value), 1e-30)
    ):
        raise NonConvergent(
            f"extrapolation residual {err:.3g} above threshold for value {value:.6g}"
        )
    return QuadratureResult(value=value, error=err, per_epsilon=per_eps)


def _neville_to_zero(xs, ys):
    m = len(ys)
    p = list(ys)
    if m == 1:
        return p[0], float("nan")
    prev = p[0]
    for k in range(1, m):
        for i in range(m - 1, k - 1, -1):
            p[i] = (xs[i - k] * p[i] - xs[i] * p[i - 1]) / (xs[i - k] - xs[i])
        prev = p[m - 2] if k == m - 1 else prev
    return p[m - 1], abs(p[m - 1] - prev)


@dataclass
class FitResult:
    slope: float
    stderr: float
    degenerate: bool
    remainders: list

    def band(self, width: float = 2.0):
        return (self.slope - width * self.stderr, self.slope + width * self.stderr)


def series_fit(
    samples,
    series: AsymptoticSeries,
    order: int,
    noise_floor: float = 1e-9,
) -> FitResult:
    """Least-squares slope of log |I(hbar) - truncated series| vs log hbar.

    Remainders are normalized by the leading prefactor scale so the slope
    measures powers beyond the last kept correction.  Requires at least four
    samples spanning a decade.
    """
    if len(samples) < 4:
        raise InsufficientSamples("need at least 4 (hbar, value) samples")
    hs = [h for h, _ in samples]
    if max(hs) / min(hs) < 10.0 - 1e-9:
        raise InsufficientSamples("samples must span at least one decade in hbar")
    rems = []
    for h, val in samples:
        pred = series.evaluate(h, order)
        scale = series.leading_scale(h)
        rems.append(abs(val - pred) / scale)
    if max(rems) < noise_floor:
        return FitResult(slope=float("nan"), stderr=0.0, degenerate=True, remainders=rems)
    xs = np.log(np.array(hs))
    ys = np.log(np.maximum(np.array(rems), 1e-300))
    a = np.vstack([xs, np.ones_like(xs)]).T
    coef, res, _, _ = np.linalg.lstsq(a, ys, rcond=None)
    slope = float(coef[0])
    dof = max(len(xs) - 2, 1)
    resid = ys - a @ coef
    s2 = float(resid @ resid) / dof
    sxx = float(((xs - xs.mean()) ** 2).sum())
    stderr = float(np.sqrt(s2 / sxx)) if sxx > 0 else float("inf")
    return FitResult(slope=slope, stderr=stderr, degenerate=False, remainders=rems)
