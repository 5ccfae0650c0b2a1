import itertools
import random

import pytest

from gencontact.frames import (FrameError, PForm, VField, coordinate_model,
                               exterior_derivative, interior_product,
                               lie_bracket, lie_derivative, lie_frame_model,
                               structure_from_brackets, wedge)
from gencontact.scalar import TWO_PI, Scalar


def heisenberg():
    # [X1, X2] = -X3
    return lie_frame_model("h3", ["X1", "X2", "X3"], ["a1", "a2", "a3"],
                           {(0, 1): {2: -1}})


def r3():
    return coordinate_model("r3", ["x", "y", "z"])


def txs():
    return coordinate_model("t2xs1", ["x", "y", "t"], periodic=["x", "y", "t"])


def vf(model, **named):
    comp = [Scalar.zero()] * model.dim
    for name, c in named.items():
        comp[model.frame_names.index(name)] = c if isinstance(c, Scalar) else Scalar.const(c)
    return VField(model, tuple(comp))


class TestValidate:
    def test_heisenberg_table_valid(self):
        assert heisenberg().validate() == []

    def test_coordinate_frame_valid_and_abelian(self):
        m = r3()
        assert m.validate() == []
        for i, j in itertools.combinations(range(3), 2):
            assert lie_bracket(m.basis_vector(i), m.basis_vector(j)).is_zero()

    def test_corrupted_table_reports_jacobi_violation(self):
        # brute-force oracle: full Jacobi sum over all index triples
        struct = structure_from_brackets(
            ["e1", "e2", "e3", "e4"],
            {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}, (0, 3): {1: 1}})
        m = lie_frame_model("bad", ["e1", "e2", "e3", "e4"],
                            ["f1", "f2", "f3", "f4"], {})
        m = lie_frame_model("bad", ["e1", "e2", "e3", "e4"],
                            ["f1", "f2", "f3", "f4"],
                            {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1},
                             (0, 3): {1: 1}})

        def oracle_jacobi_ok(model):
            n = model.dim
            for i, j, k in itertools.combinations(range(n), 3):
                for m_ in range(n):
                    total = Scalar.zero()
                    for l in range(n):
                        total = total + model.c(i, j, l) * model.c(l, k, m_)
                        total = total + model.c(j, k, l) * model.c(l, i, m_)
                        total = total + model.c(k, i, l) * model.c(l, j, m_)
                    if not total.is_zero():
                        return False
            return True

        assert not oracle_jacobi_ok(m)
        diags = m.validate()
        assert any("Jacobi" in d for d in diags)


class TestLieBracket:
    def test_heisenberg_generators(self):
        m = heisenberg()
        got = lie_bracket(vf(m, X1=1), vf(m, X2=1))
        assert (got - vf(m, X3=-1)).is_zero()

    def test_coordinate_fields_commute(self):
        m = r3()
        assert lie_bracket(vf(m, x=1), vf(m, y=1)).is_zero()

    def test_coefficient_derivative(self):
        m = txs()
        got = lie_bracket(vf(m, t=1), vf(m, x=Scalar.cos(TWO_PI, "t")))
        expect = vf(m, x=-TWO_PI * Scalar.sin(TWO_PI, "t"))
        assert (got - expect).is_zero()


class TestExteriorDerivative:
    def test_heisenberg_dual_coframe(self):
        m = heisenberg()
        a3 = m.basis_oneform(2)
        da3 = exterior_derivative(a3)
        expect = wedge(m.basis_oneform(0), m.basis_oneform(1))
        assert (da3 - expect).is_zero()

    def test_contact_form_r3(self):
        # hand expansion: d(dz - y dx) = -dy^dx = dx^dy
        m = r3()
        alpha = PForm(m, 1, {(2,): Scalar.one(), (0,): -Scalar.coord("y")})
        got = exterior_derivative(alpha)
        expect = wedge(m.basis_oneform(0), m.basis_oneform(1))
        assert (got - expect).is_zero()

    def test_d_of_exact_coordinate_form(self):
        m = r3()
        assert exterior_derivative(m.basis_oneform(2)).is_zero()

    def test_d_squared_zero_on_functions_and_oneforms(self):
        for m in (heisenberg(), r3(), txs()):
            f = PForm.function(m, Scalar.cos(TWO_PI, "t") if "t" in m.coordinates
                               else Scalar.const(2))
            assert exterior_derivative(exterior_derivative(f)).is_zero()
            for i in range(m.dim):
                ddx = exterior_derivative(exterior_derivative(m.basis_oneform(i)))
                assert ddx.is_zero()


class TestInteriorProduct:
    def test_transverse_contraction_vanishes(self):
        m = r3()
        dxdy = wedge(m.basis_oneform(0), m.basis_oneform(1))
        assert interior_product(vf(m, z=1), dxdy).is_zero()

    def test_basic_contraction(self):
        m = r3()
        dxdy = wedge(m.basis_oneform(0), m.basis_oneform(1))
        got = interior_product(vf(m, x=1), dxdy)
        assert (got - m.basis_oneform(1)).is_zero()

    def test_reeb_contraction_on_heisenberg(self):
        # direct contraction; this is i_R d(eta) = 0 for eta = a3
        m = heisenberg()
        a1a2 = wedge(m.basis_oneform(0), m.basis_oneform(1))
        assert interior_product(vf(m, X3=1), a1a2).is_zero()

    def test_degree_zero_rejected(self):
        m = r3()
        with pytest.raises(FrameError):
            interior_product(vf(m, x=1), PForm.function(m, Scalar.one()))


class TestLieDerivative:
    def test_coefficient_flow(self):
        m = txs()
        a = PForm(m, 1, {(0,): Scalar.cos(TWO_PI, "t")})
        got = lie_derivative(vf(m, t=1), a)
        expect = PForm(m, 1, {(0,): -TWO_PI * Scalar.sin(TWO_PI, "t")})
        assert (got - expect).is_zero()

    def test_reeb_invariance_of_contact_form(self):
        # Cartan expansion; this is L_R eta = 0 for the standard contact form
        m = r3()
        alpha = PForm(m, 1, {(2,): Scalar.one(), (0,): -Scalar.coord("y")})
        assert lie_derivative(vf(m, z=1), alpha).is_zero()

    def test_heisenberg_vertical_invariance(self):
        m = heisenberg()
        assert lie_derivative(vf(m, X3=1), m.basis_oneform(2)).is_zero()


class TestWedge:
    def test_square_of_oneform_vanishes(self):
        m = r3()
        assert wedge(m.basis_oneform(0), m.basis_oneform(0)).is_zero()

    def test_anticommutativity(self):
        m = heisenberg()
        a, b = m.basis_oneform(0), m.basis_oneform(1)
        assert (wedge(a, b) + wedge(b, a)).is_zero()

    def test_contact_volume(self):
        m = r3()
        alpha = PForm(m, 1, {(2,): Scalar.one(), (0,): -Scalar.coord("y")})
        dxdy = wedge(m.basis_oneform(0), m.basis_oneform(1))
        got = wedge(alpha, dxdy)
        expect = PForm(m, 3, {(0, 1, 2): Scalar.one()})
        assert (got - expect).is_zero()

    def test_degree_overflow(self):
        m = r3()
        vol = PForm(m, 3, {(0, 1, 2): Scalar.one()})
        with pytest.raises(FrameError):
            wedge(vol, m.basis_oneform(0))


def _random_vf(rng, m):
    comp = []
    for _ in range(m.dim):
        c = Scalar.const(rng.randint(-2, 2))
        if m.coordinates and rng.random() < 0.5:
            name = rng.choice(m.coordinates)
            c = c + rng.randint(-2, 2) * Scalar.cos(TWO_PI, name) \
                if name in m.periodic else c + rng.randint(-2, 2) * Scalar.coord(name)
        comp.append(c)
    return VField(m, tuple(comp))


class TestProperties:
    def test_lie_bracket_jacobi_random(self):
        rng = random.Random(3)
        for m in (heisenberg(), txs()):
            for _ in range(50):
                x, y, z = (_random_vf(rng, m) for _ in range(3))
                jac = lie_bracket(lie_bracket(x, y), z) \
                    + lie_bracket(lie_bracket(y, z), x) \
                    + lie_bracket(lie_bracket(z, x), y)
                assert jac.is_zero()

    def test_lie_derivative_leibniz_over_wedge(self):
        rng = random.Random(5)
        m = txs()
        for _ in range(25):
            x = _random_vf(rng, m)
            a = PForm(m, 1, {(rng.randrange(3),): Scalar.cos(TWO_PI, "t")})
            b = PForm(m, 1, {(rng.randrange(3),): Scalar.const(rng.randint(-2, 2))})
            lhs = lie_derivative(x, wedge(a, b))
            rhs = wedge(lie_derivative(x, a), b) + wedge(a, lie_derivative(x, b))
            assert (lhs - rhs).is_zero()

    def test_double_contraction_vanishes(self):
        rng = random.Random(9)
        m = r3()
        for _ in range(25):
            x = _random_vf(rng, m)
            a = wedge(m.basis_oneform(rng.randrange(3)), m.basis_oneform(rng.randrange(3)))
            assert interior_product(x, interior_product(x, a + wedge(
                m.basis_oneform(0), m.basis_oneform(1)))).is_zero()
