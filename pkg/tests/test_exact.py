import random
from fractions import Fraction

import pytest

from jetinv.exact import (
    Matrix,
    PolyRing,
    kernel_basis,
    parse_rat,
    rank,
    rat_str,
    solve_unique,
)


def test_rational_serialization():
    assert rat_str(Fraction(3, 4)) == "3/4"
    assert rat_str(Fraction(-5)) == "-5"
    assert rat_str(Fraction(0)) == "0"
    assert parse_rat("7/2") == Fraction(7, 2)
    assert parse_rat("-3") == Fraction(-3)


class TestPolynomials:
    def setup_method(self):
        self.ring = PolyRing(["x", "y", "z"])
        self.x = self.ring.var("x")
        self.y = self.ring.var("y")

    def test_difference_of_squares(self):
        assert (self.x + 1) * (self.x - 1) == self.x**2 - 1

    def test_additive_identity(self):
        p = 3 * self.x * self.y - self.y**2
        assert p + self.ring.zero() == p
        assert p + 0 == p

    def test_binomial_square(self):
        u1, u2 = self.x, self.y
        assert (u1 + u2) ** 2 == u1**2 + 2 * u1 * u2 + u2**2

    def test_no_zero_terms_stored(self):
        p = self.x - self.x
        assert p.is_zero() and p.terms == {}

    def test_variable_set_mismatch(self):
        other = PolyRing(["a"])
        with pytest.raises(ValueError):
            _ = self.x + other.var("a")

    def test_evaluate(self):
        p = self.x**2 - 1
        assert p.evaluate({"x": 3, "y": 0, "z": 0}) == 8
        assert self.ring.const(5).evaluate({"x": 1, "y": 2, "z": 3}) == 5
        q = self.x * self.y
        assert q.evaluate({"x": Fraction(1, 2), "y": Fraction(2, 3), "z": 9}) == Fraction(1, 3)
        with pytest.raises(KeyError):
            p.evaluate({"x": 1})

    def test_ring_axioms_random(self):
        rng = random.Random(7)

        def rand_poly():
            terms = {}
            for _ in range(rng.randint(0, 5)):
                exp = tuple(rng.randint(0, 3) for _ in range(3))
                terms[exp] = Fraction(rng.randint(-6, 6), rng.randint(1, 5))
            return self.ring.poly(terms)

        for _ in range(40):
            a, b, c = rand_poly(), rand_poly(), rand_poly()
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c
            assert (a + b) + c == a + (b + c)
            assert a * b == b * a

    def test_grlex_leading_and_str(self):
        p = self.x + self.x**2 * self.y - 2
        exp, c = p.leading_term()
        assert exp == (2, 1, 0) and c == 1
        assert str(p) == "x^2*y + x - 2"

    def test_normalized(self):
        p = 3 * self.x**2 - 6 * self.y
        q = p.normalized()
        assert q == self.x**2 - 2 * self.y

    def test_subs(self):
        target = PolyRing(["t"])
        t = target.var("t")
        p = self.x**2 + self.y
        out = p.subs({"x": t + 1, "y": -t, "z": 0})
        assert out == t**2 + t + 1


class TestLinearAlgebra:
    def test_kernel_zero_matrix(self):
        m = Matrix.zeros(2, 3)
        assert len(m.kernel_basis()) == 3

    def test_kernel_identity(self):
        assert Matrix.identity(3).kernel_basis() == []

    def test_kernel_rank_one(self):
        m = Matrix([[1, 2], [2, 4]])
        kb = m.kernel_basis()
        assert len(kb) == 1
        v = kb[0]
        assert v[0] * 1 + v[1] * 2 == 0 and any(x != 0 for x in v)

    def test_det_fixtures(self):
        assert Matrix([[1, 2], [3, 4]]).det() == -2
        assert Matrix.identity(5).det() == 1

    def test_det_polynomial_entries(self):
        ring = PolyRing(["u"])
        u = ring.var("u")
        m = Matrix([[u, u * 0 + 2], [ring.zero(), u**2]])
        assert m.det() == u**3

    def test_rank_nullity_random(self):
        rng = random.Random(3)
        for _ in range(60):
            rows = rng.randint(1, 5)
            cols = rng.randint(1, 5)
            m = Matrix(
                [
                    [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(cols)]
                    for _ in range(rows)
                ]
            )
            assert m.rank() + len(m.kernel_basis()) == cols
            for v in m.kernel_basis():
                for row in m.data:
                    assert sum(a * b for a, b in zip(row, v)) == 0

    def test_det_multiplicative_random(self):
        rng = random.Random(5)
        for _ in range(30):
            a = Matrix([[Fraction(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)])
            b = Matrix([[Fraction(rng.randint(-5, 5)) for _ in range(3)] for _ in range(3)])
            assert (a @ b).det() == a.det() * b.det()

    def test_bareiss_matches_laplace(self):
        rng = random.Random(11)
        from jetinv.exact import _det_laplace

        for _ in range(25):
            n = rng.randint(1, 4)
            data = [
                [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(n)]
                for _ in range(n)
            ]
            assert Matrix(data).det() == _det_laplace(data)

    def test_inverse(self):
        rng = random.Random(13)
        for _ in range(20):
            n = rng.randint(1, 4)
            m = Matrix([[Fraction(rng.randint(-5, 5)) for _ in range(n)] for _ in range(n)])
            if m.det() == 0:
                continue
            assert m @ m.inverse() == Matrix.identity(n)

    def test_rank_requires_rational(self):
        ring = PolyRing(["u"])
        m = Matrix([[ring.var("u")]])
        with pytest.raises(TypeError):
            m.rank()
        with pytest.raises(ValueError):
            Matrix([[1, 2]]).det()

    def test_solve_unique(self):
        assert solve_unique([[2, 0], [0, 3]], [4, 9]) == [Fraction(2), Fraction(3)]
        assert solve_unique([[1, 1], [2, 2]], [1, 3]) is None  # inconsistent
        assert solve_unique([[1, 1], [2, 2]], [1, 2]) is None  # underdetermined

    def test_kernel_function_empty(self):
        assert len(kernel_basis([], 4)) == 4
        assert rank([[0, 0], [0, 0]]) == 0
