"""Stationary-phase expansion of oscillatory integrals with polynomial
phase and constant density over R^n.

The expansion of int e^{(i/hbar) S} mu around a nondegenerate critical
point x0 is

    e^{(i/hbar) S(x0)} (2 pi hbar)^{n/2} e^{i pi sign/4} / |det H|^{1/2}
        * mu * (1 + c_1 hbar + c_2 hbar^2 + ...)

with exact coefficients c_j given by sums over isomorphism classes of
graphs of excess j built from the interaction tensors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .engine import engine_coefficient, evaluate_weight, matrix_entries_nonzero
from .errors import DegenerateHessian, Disconnected, MissingTensor
from .exact import QuadraticForm, quad_analyze, taylor_data
from .graphs import Graph, GraphClass, enumerate_graphs
from .poly import PolyFunction
from .scalars import Scalar, I, ONE, ZERO
from .series import AsymptoticSeries, HbarSeries, PointSeries, Prefactor


@dataclass
class CriticalPoint:
    point: tuple
    degenerate: bool = False


@dataclass
class ActionModel:
    s: PolyFunction
    density: Scalar = ONE
    critical_points: list = field(default_factory=list)
    name: str = ""

    @property
    def dimension(self) -> int:
        return self.s.n

    def register_point(self, point, allow_degenerate=True) -> CriticalPoint:
        pt = tuple(Scalar.of(x) for x in point)
        grad = self.s.gradient(pt)
        if any(not g.is_zero() for g in grad):
            raise ValueError(f"{point} is not an exact critical point")
        _, _, hess, _ = taylor_data(self.s, pt, max_deg=2)
        cp = CriticalPoint(pt, degenerate=hess.is_degenerate())
        self.critical_points.append(cp)
        return cp


@dataclass
class CriticalSearchReport:
    found: list
    failures: list


def _rationalize(x: float):
    for bound in (1, 10, 100, 10**3, 10**4, 10**6, 10**8, 10**10, 10**12):
        yield Fraction(x).limit_denominator(bound)


def eval_float(poly: PolyFunction, x) -> float:
    total = 0.0
    for e, c in poly.terms.items():
        v = float(c.re)
        for xi, k in zip(x, e):
            v *= xi**k
        total += v
    return total


def find_critical_points(
    model: ActionModel, seeds=None, tol: float = 1e-9, max_iter: int = 60
) -> CriticalSearchReport:
    """Newton iteration on grad S from each seed; converged points are
    rationalized by continued fractions and re-verified exactly."""
    n = model.dimension
    grad_polys = [model.s.partial(i) for i in range(n)]
    hess_polys = [[g.partial(j) for j in range(n)] for g in grad_polys]
    if seeds is None:
        axis = [Fraction(k, 2) for k in range(-4, 5)]
        if n == 1:
            seeds = [(a,) for a in axis]
        elif n == 2:
            seeds = [(a, b) for a in axis for b in axis]
        else:
            seeds = [tuple(Fraction(k, 2) for _ in range(n)) for k in range(-4, 5)]

    found = []
    seen = set()
    failures = []
    for seed in seeds:
        x = np.array([float(v) for v in seed], dtype=float)
        ok = False
        for _ in range(max_iter):
            g = np.array([eval_float(p, x) for p in grad_polys])
            if np.linalg.norm(g) < tol:
                ok = True
                break
            h = np.array([[eval_float(hp, x) for hp in row] for row in hess_polys])
            try:
                step = np.linalg.solve(h, g)
            except np.linalg.LinAlgError:
                break
            x = x - step
            if not np.all(np.isfinite(x)):
                break
        if not ok:
            failures.append((tuple(seed), "no numeric convergence"))
            continue
        exact = None
        for cands in zip(*[_rationalize(v) for v in x]):
            pt = tuple(cands)
            if all(p.eval(pt).is_zero() for p in grad_polys):
                exact = pt
                break
        if exact is None:
            failures.append((tuple(seed), "converged point not rationalizable"))
            continue
        if exact in seen:
            continue
        seen.add(exact)
        _, _, hess, _ = taylor_data(model.s, exact, max_deg=2)
        found.append(CriticalPoint(tuple(Scalar.of(v) for v in exact), hess.is_degenerate()))
    return CriticalSearchReport(found=found, failures=failures)


# ---------------------------------------------------------------------------
# graph weights
# ---------------------------------------------------------------------------


def feynman_weight(g: Graph, interactions, k_matrix, leaf_values=None) -> Scalar:
    """Sum over all maps from half-edges to coordinate indices of the product
    of vertex tensors, edge entries, and leaf-vector components."""
    tensors = {t.rank: t for t in interactions}
    for block in g.vertices:
        if len(block) not in tensors:
            raise MissingTensor(f"no interaction tensor of rank {len(block)}")
    if g.leaves and leaf_values is None:
        raise MissingTensor("graph has leaves but no leaf values were given")
    entries = matrix_entries_nonzero(k_matrix)

    def edge_entries(h1, h2):
        return entries

    leaf_list = sorted(g.leaves)

    def leaf_entries(h):
        vec = leaf_values[leaf_list.index(h)]
        return [(i, Scalar.of(v)) for i, v in enumerate(vec) if not Scalar.of(v).is_zero()]

    def vertex_value(block, assignment):
        idx = tuple(assignment[h] for h in block)
        return tensors[len(block)].get(idx)

    return evaluate_weight(g, edge_entries, vertex_value, leaf_entries)


def normalized_weight(
    gc: GraphClass,
    interactions,
    k_matrix,
    mode: str = "partition_function",
    leaf_values=None,
) -> HbarSeries:
    """Graph-sum weight (-i hbar)^p / |Aut| * F with p = |E|-|V| in
    partition_function mode and p = loops in effective_action mode (which
    requires a connected graph)."""
    g = gc.representative
    if mode == "partition_function":
        power = gc.excess
    elif mode == "effective_action":
        if not g.is_connected():
            raise Disconnected("effective-action weights require connected graphs")
        power = gc.loop_count
    else:
        raise ValueError(f"unknown mode {mode!r}")
    f_val = feynman_weight(g, interactions, k_matrix, leaf_values)
    coeff = (-I) ** power * f_val
    if coeff.is_zero():
        return HbarSeries()
    return HbarSeries({power: Scalar(Fraction(1, gc.aut_order)) * coeff})


def _engine_weight(gc: GraphClass, interactions, k_matrix) -> HbarSeries:
    """Engine-convention class weight: i^(V+E) hbar^(E-V) F / |Aut|."""
    g = gc.representative
    f_val = feynman_weight(g, interactions, k_matrix)
    if f_val.is_zero():
        return HbarSeries()
    coeff = engine_coefficient(len(g.vertices), len(g.edges)) * f_val
    return HbarSeries({gc.excess: coeff.scale(Fraction(1, gc.aut_order))})


def corrections_from_graphs(interactions, k_matrix, order: int, check_exp_identity=True):
    """1 + c_1 hbar + ... + c_order hbar^order from the exhaustive sum over
    (possibly disconnected) graph classes of excess <= order.

    Also recomputes the same series as exp of the connected-class sum and
    asserts exact agreement.
    """
    degrees = {t.rank for t in interactions if not t.is_zero()}
    total = HbarSeries({0: ONE})
    connected = HbarSeries()
    if degrees:
        classes = enumerate_graphs(order, degrees=degrees, allow_tadpoles=True)
        for gc in classes:
            if gc.excess > order or gc.excess < 1:
                continue
            w = _engine_weight(gc, interactions, k_matrix)
            total = total + w
            if gc.representative.is_connected():
                connected = connected + w
    if check_exp_identity:
        assert connected.exp(order) == total.truncate(order), (
            "disconnected graph sum disagrees with exp of the connected sum"
        )
    return total.truncate(order)


def expand(model: ActionModel, order: int) -> AsymptoticSeries:
    """Full asymptotic expansion over the model's critical points."""
    points = []
    for cp in model.critical_points:
        if cp.degenerate:
            raise DegenerateHessian(
                f"critical point {cp.point} has a singular Hessian; "
                "route this model through the gauge pipeline"
            )
        value, grad, hess, interactions = taylor_data(model.s, cp.point)
        assert all(g.is_zero() for g in grad)
        k_matrix, det, sig = quad_analyze(hess)
        corrections = corrections_from_graphs(interactions, k_matrix, order)
        prefactor = Prefactor(
            coeff=model.density,
            two_pi_hbar_pow=Fraction(model.dimension, 2),
            phase_eighth=sig,
            inv_sqrt_abs=abs(det.re),
        )
        points.append(
            PointSeries(
                point=cp.point,
                phase_value=value,
                prefactor=prefactor,
                corrections=corrections,
            )
        )
    return AsymptoticSeries(points=points, order=order)
