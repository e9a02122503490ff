import cmath
import math
import random
from fractions import Fraction

import pytest

from oscint.errors import DegenerateForm
from oscint.exact import QuadraticForm
from oscint.scalars import Scalar, I, ONE
from oscint.series import HbarSeries
from oscint.wick import fresnel_value, moment_oracle, perfect_matchings, wick_moment


class TestFresnelValue:
    def test_identity_2d_lemma(self):
        # integral of e^{i(x^2+y^2)} = i*pi
        pf = fresnel_value(QuadraticForm([[1, 0], [0, 1]]))
        v = pf.evaluate(hbar=1.0)
        assert abs(v - 1j * math.pi) < 1e-12

    def test_negative_1d(self):
        pf = fresnel_value(QuadraticForm([[-1]]))
        v = pf.evaluate(hbar=1.0)
        assert abs(v - math.sqrt(math.pi) * cmath.exp(-1j * math.pi / 4)) < 1e-12

    def test_hbar_normalization(self):
        pf = fresnel_value(QuadraticForm([[1]]), hbar_normalization=True)
        for h in (1.0, 0.1):
            want = math.sqrt(2 * math.pi * h) * cmath.exp(1j * math.pi / 4)
            assert abs(pf.evaluate(h) - want) < 1e-12

    def test_degenerate(self):
        with pytest.raises(DegenerateForm):
            fresnel_value(QuadraticForm([[1, 0], [0, 0]]))


class TestWickMoment:
    def test_single_pair(self):
        got = wick_moment([[1]], (0, 0))
        assert got == HbarSeries({1: -I})  # (h/i) * 1

    def test_odd_vanishes(self):
        assert wick_moment([[1]], (0, 0, 0)).is_zero()

    def test_two_by_two(self):
        k = [[1, 0], [0, Fraction(1, 2)]]
        got = wick_moment(k, (0, 0, 1, 1))
        # (h/i)^2 * K^{00} K^{11} = -h^2 * 1/2
        assert got == HbarSeries({2: Scalar(Fraction(-1, 2))})

    def test_empty_tuple(self):
        assert moment_oracle([[1]], ()) == HbarSeries({0: ONE})

    def test_zero_matrix(self):
        assert wick_moment([[0, 0], [0, 0]], (0, 1, 0, 1)).is_zero()
        assert moment_oracle([[0, 0], [0, 0]], (0, 1, 0, 1)).is_zero()

    def test_permutation_symmetry(self):
        rng = random.Random(2)
        k = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(2)] for _ in range(2)]
        k[1][0] = k[0][1]
        base = wick_moment(k, (0, 0, 1, 1))
        assert wick_moment(k, (1, 0, 0, 1)) == base
        assert wick_moment(k, (1, 1, 0, 0)) == base

    def test_block_factorization(self):
        # block-diagonal K across disjoint index supports factorizes
        rng = random.Random(5)
        for _ in range(5):
            a = Fraction(rng.randint(1, 4), rng.randint(1, 3))
            b = Fraction(rng.randint(1, 4), rng.randint(1, 3))
            k = [[a, 0], [0, b]]
            joint = wick_moment(k, (0, 0, 1, 1, 1, 1))
            left = wick_moment([[a]], (0, 0))
            right = wick_moment([[b]], (0, 0, 0, 0))
            assert joint == left * right

    def test_matching_count_double_factorial(self):
        for m in range(1, 6):
            count = sum(1 for _ in perfect_matchings(list(range(2 * m))))
            want = 1
            for i in range(1, 2 * m, 2):
                want *= i  # (2m-1)!!
            assert count == want
            # all-ones K gives the same count as the moment coefficient
            got = wick_moment([[1]], (0,) * (2 * m))
            assert got == HbarSeries({m: (-I) ** m * Scalar(want)})


class TestMomentOracle:
    def test_agrees_with_wick(self):
        rng = random.Random(17)
        for _ in range(20):
            dim = rng.choice([1, 2, 3])
            k = [
                [Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(dim)]
                for _ in range(dim)
            ]
            for i in range(dim):
                for j in range(i + 1, dim):
                    k[j][i] = k[i][j]
            for length in (0, 2, 4, 6):
                idx = tuple(rng.randrange(dim) for _ in range(length))
                assert moment_oracle(k, idx) == wick_moment(k, idx), (k, idx)

    def test_bound(self):
        with pytest.raises(ValueError):
            moment_oracle([[1]], (0,) * 12)
