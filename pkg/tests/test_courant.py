import random

import pytest

from gencontact.courant import (CourantError, GEndo, GSection,
                                b_transform, beta_transform,
                                bivector_of_wedge, bracket_axiom_residuals,
                                courant_bracket, pairing)
from gencontact.frames import (PForm, VField, coordinate_model,
                               exterior_derivative, lie_frame_model, wedge)
from gencontact.scalar import SQRT2, TWO_PI, Scalar


def r3():
    return coordinate_model("r3", ["x", "y", "z"])


def t3():
    return coordinate_model("t3", ["x", "y", "z"], periodic=["x", "y", "z"])


def heisenberg():
    return lie_frame_model("h3", ["X1", "X2", "X3"], ["a1", "a2", "a3"],
                           {(0, 1): {2: -1}})


def txs():
    return coordinate_model("t2xs1", ["x", "y", "t"], periodic=["x", "y", "t"])


def sec(model, vec=None, form=None):
    """Build a section from {name: coeff} maps for vector/form parts."""
    n = model.dim
    comp = [Scalar.zero()] * (2 * n)
    for named, offset in ((vec, 0), (form, n)):
        for name, c in (named or {}).items():
            comp[offset + model.frame_names.index(name)] = \
                c if isinstance(c, Scalar) else Scalar.const(c)
    return GSection.from_components(model, comp)


class TestPairing:
    def test_cross_pairing_is_half(self):
        m = r3()
        ep = sec(m, vec={"z": 1}, form={"x": 1})
        em = sec(m, vec={"x": 0.5}, form={"z": 0.5})
        assert (pairing(ep, em) - Scalar.const(0.5)).is_zero()

    def test_self_pairing_formula(self):
        m = r3()
        s = sec(m, vec={"x": 2}, form={"x": Scalar.coord("y")})
        # <X+xi, X+xi> = xi(X)
        expect = 2 * Scalar.coord("y")
        assert (pairing(s, s) - expect).is_zero()

    def test_null_section(self):
        m = r3()
        ep = sec(m, vec={"z": 1}, form={"x": 1})
        assert pairing(ep, ep).is_zero()


class TestCourantBracket:
    def test_heisenberg_witness_bracket(self):
        m = heisenberg()
        ep = sec(m, vec={"X1": 1}, form={"X2": 1})
        u = sec(m, vec={"X2": 1, "X3": SQRT2 * 1j}, form={"X1": -1})
        got = courant_bracket(ep, u)
        expect = sec(m, vec={"X3": -1})
        assert (got - expect).is_zero()

    def test_heisenberg_second_bracket(self):
        m = heisenberg()
        em = sec(m, vec={"X2": 0.5}, form={"X1": 0.5})
        u = sec(m, vec={"X1": 1}, form={"X2": -1, "X3": -SQRT2 * 1j})
        got = courant_bracket(em, u)
        expect = sec(m, vec={"X3": 0.5}, form={"X1": 1j / SQRT2})
        assert (got - expect).is_zero()

    def test_torus_bracket_with_cosine_coefficients(self):
        # exact recomputation; the bracket closes onto a multiple of E-
        m = txs()
        cos = Scalar.cos(TWO_PI, "t")
        sin = Scalar.sin(TWO_PI, "t")
        em = sec(m, vec={"x": cos}, form={"t": 1})
        u = sec(m, vec={"t": -cos, "y": -1j}, form={"x": 1})
        got = courant_bracket(em, u)
        import math
        expect = sec(m, vec={"x": -math.pi * Scalar.sin(2 * TWO_PI, "t")},
                     form={"t": -TWO_PI * sin})
        assert (got - expect).is_zero()
        # equivalently -2 pi sin(2 pi t) E-
        assert (got - em.scale(-TWO_PI * sin)).is_zero()

    def test_twist_term_orientation(self):
        # i_X i_Y H = H(Y, X, .)
        m = r3()
        h = PForm(m, 3, {(0, 1, 2): Scalar.coord("x")})
        s, t = sec(m, vec={"x": 1}), sec(m, vec={"y": 1})
        got = courant_bracket(s, t, h)  # x dx^dy^dz is closed in dim 3
        assert (got - sec(m, form={"z": -Scalar.coord("x")})).is_zero()

    def test_non_closed_twist_rejected(self):
        m4 = coordinate_model("r4", ["x", "y", "z", "w"])
        h4 = PForm(m4, 3, {(0, 1, 2): Scalar.coord("w")})
        s4 = GSection.from_components(m4, [1, 0, 0, 0, 0, 0, 0, 0])
        t4 = GSection.from_components(m4, [0, 1, 0, 0, 0, 0, 0, 0])
        with pytest.raises(CourantError):
            courant_bracket(s4, t4, h4)


class TestTransforms:
    def test_zero_b_is_identity(self):
        m = r3()
        s = sec(m, vec={"x": 1}, form={"y": Scalar.coord("z")})
        assert (b_transform(PForm.zero(m, 2), s) - s).is_zero()

    def test_b_acts_through_vector_part(self):
        m = r3()
        s = sec(m, form={"x": 1, "z": Scalar.coord("y")})
        b = wedge(m.basis_oneform(0), m.basis_oneform(1))
        assert (b_transform(b, s) - s).is_zero()

    def test_case_two_b_candidate_strips_the_form_part(self):
        # direct contraction: B = eta- ^ eta+ applied to E- = X- + eta-
        m = r3()
        etap = m.basis_oneform(2)      # dz
        etam = m.basis_oneform(0)      # dx
        em = sec(m, vec={"z": 1}, form={"x": 1})
        b = wedge(etam, etap)
        got = b_transform(b, em)
        assert (got - sec(m, vec={"z": 1})).is_zero()

    def test_zero_beta_is_identity(self):
        m = r3()
        s = sec(m, form={"x": 1})
        pi = [[Scalar.zero()] * 3 for _ in range(3)]
        assert (beta_transform(pi, s) - s).is_zero()

    def test_beta_acts_through_form_part(self):
        m = r3()
        s = sec(m, vec={"x": 1, "y": 2})
        pi = bivector_of_wedge(VField(m, (Scalar.one(), Scalar.zero(), Scalar.zero())),
                               VField(m, (Scalar.zero(), Scalar.one(), Scalar.zero())))
        assert (beta_transform(pi, s) - s).is_zero()

    def test_beta_contraction_convention(self):
        # oracle: (X ^ Y)(xi) = xi(Y) X - xi(X) Y
        m = r3()
        pi = bivector_of_wedge(VField(m, (Scalar.one(), Scalar.zero(), Scalar.zero())),
                               VField(m, (Scalar.zero(), Scalar.one(), Scalar.zero())))
        s = sec(m, form={"y": 1})  # dy
        got = beta_transform(pi, s)
        assert (got - sec(m, vec={"x": 1}, form={"y": 1})).is_zero()


class TestAdjoint:
    def test_identity_self_adjoint(self):
        m = r3()
        e = GEndo.identity(m)
        assert (e.adjoint() - e).is_zero()

    def test_block_transposition_oracle(self):
        # oracle: P* = G^{-1} P^T G with G = [[0, I], [I, 0]] / 2
        m = r3()
        rng = random.Random(23)
        n2 = 6
        mat = [[Scalar.const(rng.randint(-3, 3)) for _ in range(n2)] for _ in range(n2)]
        p = GEndo(m, mat)
        pstar = p.adjoint()
        g = [[0.0] * n2 for _ in range(n2)]
        for i in range(3):
            g[i][3 + i] = 0.5
            g[3 + i][i] = 0.5
        ginv = [[4 * v for v in row] for row in g]
        pm = [[c.const_value().real for c in row] for row in p.mat]
        pt = [[pm[j][i] for j in range(n2)] for i in range(n2)]
        mm = [[sum(ginv[i][k] * pt[k][l] * 1 for k in range(n2)) for l in range(n2)]
              for i in range(n2)]
        expect = [[sum(mm[i][k] * g[k][j] for k in range(n2)) for j in range(n2)]
                  for i in range(n2)]
        got = [[c.const_value().real for c in row] for row in pstar.mat]
        for i in range(n2):
            for j in range(n2):
                assert abs(got[i][j] - expect[i][j]) < 1e-12

    def test_phi_block_adjoint(self):
        m = r3()
        n = 3
        mat = [[Scalar.zero()] * 6 for _ in range(6)]
        mat[0][1] = Scalar.const(2)  # phi with phi[0][1] = 2
        p = GEndo(m, mat)
        ps = p.adjoint()
        assert (ps.mat[n + 1][n + 0] - Scalar.const(2)).is_zero()
        for i in range(6):
            for j in range(6):
                if (i, j) != (n + 1, n + 0):
                    assert ps.mat[i][j].is_zero()

    def test_adjoint_reverses_pairing(self):
        m = t3()
        rng = random.Random(29)
        mat = [[Scalar.const(rng.randint(-2, 2)) for _ in range(6)] for _ in range(6)]
        mat[0][1] = Scalar.cos(TWO_PI, "x")
        p = GEndo(m, mat)
        s = sec(m, vec={"x": 1, "z": Scalar.cos(TWO_PI, "y")}, form={"y": 2})
        t = sec(m, vec={"y": 1}, form={"x": Scalar.sin(TWO_PI, "x"), "z": 3})
        lhs = pairing(p.apply(s), t)
        rhs = pairing(s, p.adjoint().apply(t))
        assert (lhs - rhs).is_zero()


def _random_section(rng, m):
    n = m.dim
    comp = []
    for _ in range(2 * n):
        c = Scalar.const(complex(rng.randint(-2, 2), rng.randint(-1, 1)))
        if rng.random() < 0.4:
            name = rng.choice(m.frame_names)
            if name in m.periodic:
                c = c + rng.randint(-2, 2) * Scalar.cos(TWO_PI, name)
            elif name in m.coordinates:
                c = c + rng.randint(-2, 2) * Scalar.coord(name)
        comp.append(c)
    return GSection.from_components(m, comp)


def _random_two_form(rng, m):
    out = PForm.zero(m, 2)
    for i in range(m.dim):
        for j in range(i + 1, m.dim):
            c = Scalar.const(rng.randint(-2, 2))
            name = rng.choice(m.frame_names)
            if name in m.periodic and rng.random() < 0.5:
                c = c + Scalar.cos(TWO_PI, name)
            elif name in m.coordinates and rng.random() < 0.5:
                c = c + Scalar.coord(name)
            out = out + PForm(m, 2, {(i, j): c})
    return out


class TestAxioms:
    def test_residuals_on_constant_coordinate_sections(self):
        m = r3()
        s1, s2, s3 = (sec(m, vec={"x": 1}), sec(m, vec={"y": 1}, form={"z": 1}),
                      sec(m, form={"x": 2}))
        r1, r2 = bracket_axiom_residuals(s1, s2, s3)
        assert r1.is_zero() and r2.is_zero()

    def test_residuals_on_heisenberg_triple(self):
        m = heisenberg()
        ep = sec(m, vec={"X1": 1}, form={"X2": 1})
        em = sec(m, vec={"X2": 0.5}, form={"X1": 0.5})
        u = sec(m, vec={"X3": 1}, form={"X2": 1})
        r1, r2 = bracket_axiom_residuals(ep, em, u)
        assert r1.is_zero() and r2.is_zero()

    def test_residuals_on_random_trig_triples(self):
        rng = random.Random(31)
        m = t3()
        for _ in range(100):
            s1, s2, s3 = (_random_section(rng, m) for _ in range(3))
            r1, r2 = bracket_axiom_residuals(s1, s2, s3)
            assert r1.is_zero()
            assert r2.is_zero()

    def test_residuals_with_closed_twist(self):
        rng = random.Random(37)
        m = t3()
        h = PForm(m, 3, {(0, 1, 2): 2 + Scalar.cos(TWO_PI, "x")})
        for _ in range(20):
            s1, s2, s3 = (_random_section(rng, m) for _ in range(3))
            r1, r2 = bracket_axiom_residuals(s1, s2, s3, h)
            assert r1.is_zero()
            assert r2.is_zero()

    def test_bracket_antisymmetry(self):
        rng = random.Random(41)
        m = txs()
        h = PForm(m, 3, {(0, 1, 2): Scalar.cos(TWO_PI, "t")})
        for _ in range(50):
            s, t = _random_section(rng, m), _random_section(rng, m)
            lhs = courant_bracket(s, t, h)
            rhs = courant_bracket(t, s, h)
            assert (lhs + rhs).is_zero()

    def test_b_field_twist_identity_universal(self):
        # [e^B s, e^B t]_0 = e^B([s, t]_{-dB}) for arbitrary (not nec. closed) B
        rng = random.Random(43)
        m = r3()
        for _ in range(50):
            s, t = _random_section(rng, m), _random_section(rng, m)
            b = _random_two_form(rng, m)
            mdb = -exterior_derivative(b)
            lhs = courant_bracket(b_transform(b, s), b_transform(b, t))
            rhs = b_transform(b, courant_bracket(s, t, mdb, validate_twist=False))
            assert (lhs - rhs).is_zero()

    def test_pairing_invariance_under_b(self):
        rng = random.Random(47)
        m = t3()
        for _ in range(50):
            s, t = _random_section(rng, m), _random_section(rng, m)
            b = _random_two_form(rng, m)
            assert (pairing(b_transform(b, s), b_transform(b, t)) - pairing(s, t)).is_zero()
