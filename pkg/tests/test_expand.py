import random
from fractions import Fraction

import pytest

from oscint.errors import DegenerateHessian, Disconnected, MissingTensor
from oscint.exact import SymTensor, mat_of
from oscint.expand import (
    ActionModel,
    corrections_from_graphs,
    expand,
    feynman_weight,
    find_critical_points,
    normalized_weight,
)
from oscint.graphs import Graph, enumerate_graphs
from oscint.poly import PolyFunction
from oscint.scalars import Scalar, I, ONE, ZERO
from oscint.series import HbarSeries


def quartic_action(lam=Fraction(1, 2)):
    s = PolyFunction(1, {(2,): Fraction(1, 2), (4,): Fraction(lam, 4)})
    m = ActionModel(s=s)
    m.register_point((0,))
    return m


def fig8():
    return Graph(4, [(0, 1, 2, 3)], [(0, 1), (2, 3)])


def theta():
    return Graph(6, [(0, 1, 2), (3, 4, 5)], [(0, 3), (1, 4), (2, 5)])


class TestFeynmanWeight:
    def test_figure_eight_1d(self):
        lam = Scalar(Fraction(1, 2))
        p4 = SymTensor(4, 1, {(0, 0, 0, 0): lam * 6})
        w = feynman_weight(fig8(), [p4], mat_of([[1]]))
        assert w == lam * 6

    def test_theta_1d(self):
        p3 = SymTensor(3, 1, {(0, 0, 0): Fraction(5)})
        w = feynman_weight(theta(), [p3], mat_of([[1]]))
        assert w == Scalar(25)

    def test_zero_propagator(self):
        p3 = SymTensor(3, 1, {(0, 0, 0): 1})
        assert feynman_weight(theta(), [p3], mat_of([[0]])) == ZERO

    def test_missing_tensor(self):
        with pytest.raises(MissingTensor):
            feynman_weight(theta(), [], mat_of([[1]]))

    def test_leaf_values(self):
        # single trivalent vertex, one edge, one leaf: P_{abc} K^{ab} v^c
        g = Graph(3, [(0, 1, 2)], [(0, 1)], leaves=[2])
        p3 = SymTensor(3, 2, {(0, 0, 1): 1})
        k = mat_of([[1, 0], [0, 0]])
        w = feynman_weight(g, [p3], k, leaf_values=[(0, Fraction(7))])
        assert w == Scalar(7)


class TestNormalizedWeight:
    def test_theta_effective_mode(self):
        classes = enumerate_graphs(1, degrees={3}, allow_tadpoles=False)
        (gc,) = classes
        p3 = SymTensor(3, 1, {(0, 0, 0): 1})
        w = normalized_weight(gc, [p3], mat_of([[1]]), mode="effective_action")
        # (-i hbar)^2 / 12 * F with F = 1
        assert w == HbarSeries({2: Scalar(Fraction(-1, 12))})

    def test_two_leaf_effective_mode(self):
        classes = enumerate_graphs(
            0, degrees={3}, allow_leaves=True, max_leaves=2, allow_tadpoles=False
        )
        (gc,) = [c for c in classes if len(c.representative.leaves) == 2]
        p3 = SymTensor(3, 1, {(0, 0, 0): 1})
        w = normalized_weight(
            gc, [p3], mat_of([[1]]), mode="effective_action", leaf_values=[(1,), (1,)]
        )
        # (-i hbar)^1 / 4 * F
        assert w == HbarSeries({1: Scalar(0, Fraction(-1, 4))})

    def test_figure_eight_partition_mode(self):
        classes = enumerate_graphs(1, degrees={4}, allow_tadpoles=True)
        (gc,) = classes
        assert gc.aut_order == 8
        p4 = SymTensor(4, 1, {(0, 0, 0, 0): 1})
        w = normalized_weight(gc, [p4], mat_of([[1]]))
        assert w == HbarSeries({1: Scalar(0, Fraction(-1, 8))})

    def test_disconnected_rejected(self):
        classes = enumerate_graphs(2, degrees={3}, allow_tadpoles=False)
        disc = [c for c in classes if not c.representative.is_connected()]
        p3 = SymTensor(3, 1, {(0, 0, 0): 1})
        with pytest.raises(Disconnected):
            normalized_weight(disc[0], [p3], mat_of([[1]]), mode="effective_action")


class TestExpand:
    def test_quartic_order_one(self):
        lam = Fraction(1, 2)
        series = expand(quartic_action(lam), 1)
        (pt,) = series.points
        assert pt.prefactor.two_pi_hbar_pow == Fraction(1, 2)
        assert pt.prefactor.phase_eighth == 1
        assert pt.prefactor.inv_sqrt_abs == 1
        # c_1 = -(3/4) i lam
        assert pt.corrections.coeff(1) == Scalar(0, -Fraction(3, 4) * lam)

    def test_quartic_order_two(self):
        # frozen from the direct moment computation: c_2 = -(105/32) lam^2
        lam = Fraction(1, 2)
        series = expand(quartic_action(lam), 2)
        (pt,) = series.points
        assert pt.corrections.coeff(2) == Scalar(-Fraction(105, 32) * lam * lam)

    def test_purely_quadratic(self):
        s = PolyFunction(2, {(2, 0): Fraction(1, 2), (0, 2): Fraction(1, 2)})
        m = ActionModel(s=s)
        m.register_point((0, 0))
        series = expand(m, 3)
        (pt,) = series.points
        assert pt.corrections == HbarSeries({0: ONE})

    def test_two_critical_points(self):
        # S = (x^2-1)^2 / 4; critical points 0, 1, -1; the origin has S=1/4
        s = PolyFunction(
            1, {(4,): Fraction(1, 4), (2,): Fraction(-1, 2), (0,): Fraction(1, 4)}
        )
        m = ActionModel(s=s)
        m.register_point((1,))
        m.register_point((-1,))
        series = expand(m, 1)
        assert len(series.points) == 2
        for pt in series.points:
            assert pt.phase_value == ZERO
            # frozen by hand: S(1+u) = u^2 + u^3 + u^4/4 gives c_1 = (3/4) i
            assert pt.corrections.coeff(1) == Scalar(0, Fraction(3, 4))

    def test_degenerate_rejected(self):
        s = PolyFunction(1, {(4,): 1})
        m = ActionModel(s=s)
        m.register_point((0,))
        with pytest.raises(DegenerateHessian):
            expand(m, 1)

    def test_shear_invariance(self):
        # c_j invariant under unimodular linear changes of variables
        rng = random.Random(23)
        s = PolyFunction(
            2,
            {
                (2, 0): Fraction(1, 2),
                (0, 2): Fraction(1),
                (3, 0): Fraction(1, 3),
                (1, 2): Fraction(1, 2),
                (4, 0): Fraction(1, 4),
            },
        )
        base = ActionModel(s=s)
        base.register_point((0, 0))
        base_series = expand(base, 2)
        for _ in range(3):
            a = [[1, rng.randint(-2, 2)], [0, 1]]
            if rng.random() < 0.5:
                a = [[1, 0], [rng.randint(-2, 2), 1]]
            sheared = _compose_linear(s, a)
            m2 = ActionModel(s=sheared)
            m2.register_point((0, 0))
            series2 = expand(m2, 2)
            for k in (1, 2):
                assert series2.points[0].corrections.coeff(k) == base_series.points[
                    0
                ].corrections.coeff(k)

    def test_exp_connected_identity_runs(self):
        # the identity is asserted inside corrections_from_graphs
        p3 = SymTensor(3, 1, {(0, 0, 0): 2})
        p4 = SymTensor(4, 1, {(0, 0, 0, 0): 3})
        corrections_from_graphs([p3, p4], mat_of([[Fraction(1, 2)]]), 2)


def _compose_linear(poly: PolyFunction, a):
    n = poly.n
    linear_forms = []
    for i in range(n):
        form = PolyFunction(n)
        for j in range(n):
            if a[i][j]:
                form = form + PolyFunction.variable(n, j).scale(Fraction(a[i][j]))
        linear_forms.append(form)
    out = PolyFunction(n)
    for exps, coeff in poly.terms.items():
        term = PolyFunction.constant(n, coeff)
        for i, e in enumerate(exps):
            for _ in range(e):
                term = term * linear_forms[i]
        out = out + term
    return out


class TestFindCriticalPoints:
    def test_quartic_unique(self):
        m = quartic_action()
        report = find_critical_points(m)
        pts = {tuple(x.re for x in cp.point) for cp in report.found}
        assert pts == {(Fraction(0),)}

    def test_rational_recovery(self):
        s = PolyFunction(1, {(2,): 1, (1,): Fraction(-2, 3), (0,): Fraction(1, 9)})
        m = ActionModel(s=s)
        report = find_critical_points(m)
        pts = {tuple(x.re for x in cp.point) for cp in report.found}
        assert (Fraction(1, 3),) in pts

    def test_mexican_hat_degenerate_orbit(self):
        # S = (x^2+y^2-1)^2/4: rational points on the circle are flagged
        s = PolyFunction(
            2,
            {
                (4, 0): Fraction(1, 4),
                (0, 4): Fraction(1, 4),
                (2, 2): Fraction(1, 2),
                (2, 0): Fraction(-1, 2),
                (0, 2): Fraction(-1, 2),
                (0, 0): Fraction(1, 4),
            },
        )
        m = ActionModel(s=s)
        seeds = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)), (Fraction(1, 10), Fraction(1, 10))]
        report = find_critical_points(m, seeds=seeds)
        degc = [cp for cp in report.found if cp.degenerate]
        regc = [cp for cp in report.found if not cp.degenerate]
        assert degc, "circle points must be flagged as degenerate"
        assert any(all(x.is_zero() for x in cp.point) for cp in regc)
