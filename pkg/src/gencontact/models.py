"""Builders for the standard structures the engine ships and tests against:
flat and torus models with a complex structure on the orthogonal complement,
the Heisenberg frame, contact / cosymplectic / almost-contact inductions and
symplectic products.
"""

from __future__ import annotations

from .courant import GEndo, GSection, pairing
from .frames import (FrameModel, PForm, VField, coordinate_model,
                     exterior_derivative, lie_frame_model)
from .linalg import in_span_symbolic
from .scalar import SQRT2, TWO_PI, Scalar
from .structures import (GacData, build_gac, construct_from_gcs,
                         projection_to_complement)


def sec(model: FrameModel, vec=None, form=None) -> GSection:
    n = model.dim
    comp = [Scalar.zero()] * (2 * n)
    for named, offset in ((vec, 0), (form, n)):
        for name, c in (named or {}).items():
            comp[offset + model.frame_names.index(name)] = \
                c if isinstance(c, Scalar) else Scalar.const(c)
    return GSection.from_components(model, comp)


# ---------------------------------------------------------------------------
# New structures on R^3 / T^3: E+ = d/dz + dx, E- = (dz + d/dx)/2, with
# J = sqrt(2) (pr o phi_omega) on the orthogonal complement.
# ---------------------------------------------------------------------------

def symplectic_block_endo(model: FrameModel, pairs: list[tuple[int, int]]) -> GEndo:
    """The endomorphism [[0, -omega^{-1}], [omega, 0]] for omega = sum dx_a ^ dx_b.

    phi(e_a) = e^b, phi(e_b) = -e^a, phi(e^a) = -e_b, phi(e^b) = e_a for each
    (a, b) pair; identity-squared is -1 on the listed block.
    """
    n = model.dim
    m = GEndo.zero(model)
    mat = [list(r) for r in m.mat]
    one = Scalar.one()
    for a, b in pairs:
        mat[n + b][a] = one        # phi(e_a) = e^b
        mat[n + a][b] = -one       # phi(e_b) = -e^a
        mat[b][n + a] = one        # phi(e^a) = e_b
        mat[a][n + b] = -one       # phi(e^b) = -e_a
    return GEndo(model, mat)


def pr_phi_action(model, e_plus, e_minus, phi: GEndo, frame) -> list[tuple[GSection, GSection]]:
    """(u, pr(phi(u))) for u in a frame of the orthogonal complement."""
    return [(u, projection_to_complement(e_plus, e_minus, phi.apply(u)))
            for u in frame]


def r3_new(periodic: bool = False) -> GacData:
    name = "t3-new" if periodic else "r3-new"
    model = coordinate_model(name, ["x", "y", "z"],
                             periodic=["x", "y", "z"] if periodic else [])
    e_plus = sec(model, vec={"z": 1}, form={"x": 1})
    e_minus = sec(model, vec={"x": 0.5}, form={"z": 0.5})
    phi = symplectic_block_endo(model, [(0, 1)])  # omega = dx ^ dy block
    frame = [sec(model, vec={"x": 1}, form={"z": -1}),
             sec(model, vec={"y": 1}),
             sec(model, vec={"z": 1}, form={"x": -1}),
             sec(model, form={"y": 1})]
    action = [(u, v.scale(Scalar.const(SQRT2)))
              for u, v in pr_phi_action(model, e_plus, e_minus, phi, frame)]
    return construct_from_gcs(model, e_plus, e_minus, action)


def heisenberg_model() -> FrameModel:
    return lie_frame_model("heisenberg", ["X1", "X2", "X3"], ["a1", "a2", "a3"],
                           {(0, 1): {2: -1}})


def heisenberg_new() -> GacData:
    model = heisenberg_model()
    e_plus = sec(model, vec={"X1": 1}, form={"X2": 1})
    e_minus = sec(model, vec={"X2": 0.5}, form={"X1": 0.5})
    u1 = sec(model, vec={"X1": 1}, form={"X2": -1})    # X1 - a2
    u2 = sec(model, vec={"X3": 1})                      # X3
    u3 = sec(model, vec={"X2": 1}, form={"X1": -1})    # X2 - a1
    u4 = sec(model, form={"X3": 1})                     # a3
    action = [(u1, u4.scale(Scalar.const(SQRT2))),
              (u2, u3.scale(Scalar.const(1 / SQRT2))),
              (u3, u2.scale(Scalar.const(-SQRT2))),
              (u4, u1.scale(Scalar.const(-1 / SQRT2)))]
    return construct_from_gcs(model, e_plus, e_minus, action)


def r2n1_new(n: int = 2, periodic: bool = False) -> GacData:
    """The dim 2n+1 flat family: Heisenberg-style block plus a complex block."""
    if n < 1:
        raise ValueError("need n >= 1")
    dim = 2 * n + 1
    coords = [f"x{k}" for k in range(1, dim + 1)]
    model = coordinate_model(f"r{dim}-new" if not periodic else f"t{dim}-new",
                             coords, periodic=coords if periodic else [])
    e_plus = sec(model, vec={coords[0]: 1}, form={coords[1]: 1})
    e_minus = sec(model, vec={coords[1]: 0.5}, form={coords[0]: 0.5})
    u1 = sec(model, vec={coords[0]: 1}, form={coords[1]: -1})
    u2 = sec(model, vec={coords[2]: 1})
    u3 = sec(model, vec={coords[1]: 1}, form={coords[0]: -1})
    u4 = sec(model, form={coords[2]: 1})
    action = [(u1, u4.scale(Scalar.const(SQRT2))),
              (u2, u3.scale(Scalar.const(1 / SQRT2))),
              (u3, u2.scale(Scalar.const(-SQRT2))),
              (u4, u1.scale(Scalar.const(-1 / SQRT2)))]
    # complex-structure block diag(phi, -phi*) on the remaining directions
    for k in range(3, dim, 2):
        a, b = coords[k], coords[k + 1]
        va, vb = sec(model, vec={a: 1}), sec(model, vec={b: 1})
        fa, fb = sec(model, form={a: 1}), sec(model, form={b: 1})
        action += [(va, vb), (vb, -va), (fa, fb), (fb, -fa)]
    return construct_from_gcs(model, e_plus, e_minus, action)


def t2xs1() -> GacData:
    """The torus-times-circle structure with E+ = d/dt, E- = cos(2 pi t) d/dx + dt."""
    model = coordinate_model("t2xs1", ["x", "y", "t"], periodic=["x", "y", "t"])
    cos = Scalar.cos(TWO_PI, "t")
    e_plus = sec(model, vec={"t": 1})
    e_minus = sec(model, vec={"x": cos}, form={"t": 1})
    u1 = sec(model, vec={"x": 1})
    u2 = sec(model, vec={"y": 1})
    u3 = sec(model, vec={"t": -cos}, form={"x": 1})   # dx - cos d/dt
    u4 = sec(model, form={"y": 1})
    action = [(u1, u4), (u2, -u3), (u3, u2), (u4, -u1)]
    return construct_from_gcs(model, e_plus, e_minus, action)


# ---------------------------------------------------------------------------
# Poon-Wade inductions: contact, cosymplectic, almost contact, products
# ---------------------------------------------------------------------------

def _solve_vector(model, matrix_cols, target):
    ok, coeffs = in_span_symbolic(matrix_cols, target, [])
    if not ok:
        raise ValueError("induction data is degenerate")
    out = []
    for f in coeffs:
        s = f.as_scalar()
        if s is None:
            raise ValueError("induction data needs non-constant division")
        out.append(s)
    return out


def _pw_endo_from_theta(model: FrameModel, alpha: PForm, theta: PForm,
                        xi: VField) -> GEndo:
    """Phi = [[0, pi], [theta, 0]] with pi built from the inverse of
    delta(X) = i_X theta - alpha(X) alpha."""
    n = model.dim
    delta_cols = []
    for j in range(n):
        ej = model.basis_vector(j)
        aj = Scalar.zero()
        for i in range(n):
            aj = aj + alpha.get(i) * ej.comp[i]
        col = [theta.get(j, i) - aj * alpha.get(i) for i in range(n)]
        delta_cols.append(col)
    # delta^{-1}(e^j): solve delta v = e^j
    dinv = []
    for j in range(n):
        target = [Scalar.one() if i == j else Scalar.zero() for i in range(n)]
        dinv.append(_solve_vector(model, delta_cols, target))

    def theta_eval(v, w):  # theta(v, w) for component vectors
        out = Scalar.zero()
        for a in range(n):
            for b in range(n):
                t = theta.get(a, b)
                if not t.is_zero():
                    out = out + t * v[a] * w[b]
        return out

    mat = [[Scalar.zero()] * (2 * n) for _ in range(2 * n)]
    for j in range(n):
        for i in range(n):
            mat[n + i][j] = theta.get(j, i)                 # Phi(e_j) = i_{e_j} theta
        for k in range(n):
            mat[j][n + k] = theta_eval(dinv[k], dinv[j])    # pi(e^k, e^j)
    return GEndo(model, mat)


def contact_structure(model: FrameModel, alpha: PForm) -> GacData:
    """The structure induced by a cooriented contact form."""
    theta = exterior_derivative(alpha)
    xi = reeb_vector(model, alpha, theta)
    phi = _pw_endo_from_theta(model, alpha, theta, xi)
    e_plus = GSection.of(model, oneform=alpha)
    e_minus = GSection.of(model, vector=xi)
    return build_gac(model, phi, e_plus, e_minus)


def cosymplectic_structure(model: FrameModel, alpha: PForm, theta: PForm) -> GacData:
    xi = reeb_vector(model, alpha, theta)
    phi = _pw_endo_from_theta(model, alpha, theta, xi)
    e_plus = GSection.of(model, oneform=alpha)
    e_minus = GSection.of(model, vector=xi)
    return build_gac(model, phi, e_plus, e_minus)


def reeb_vector(model: FrameModel, alpha: PForm, theta: PForm) -> VField:
    """The unique xi with alpha(xi) = 1 and i_xi theta = 0."""
    n = model.dim
    cols = []
    for j in range(n):
        col = [alpha.get(j)] + [theta.get(j, i) for i in range(n)]
        cols.append(col)
    target = [Scalar.one()] + [Scalar.zero()] * n
    return VField(model, tuple(_solve_vector(model, cols, target)))


def almost_contact_structure(model: FrameModel, phi_tm: list[list],
                             xi: VField, alpha: PForm) -> GacData:
    """Phi = diag(phi, -phi*) for a (1,1)-tensor phi with phi^2 = -1 + alpha (x) xi."""
    n = model.dim
    mat = [[Scalar.zero()] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            p = phi_tm[i][j]
            p = p if isinstance(p, Scalar) else Scalar.const(p)
            mat[i][j] = p
            mat[n + j][n + i] = -p
    phi = GEndo(model, mat)
    return build_gac(model, phi, GSection.of(model, oneform=alpha),
                     GSection.of(model, vector=xi))


def product_with_symplectic(coords: list[str], pairs: list[tuple[int, int]],
                            fiber: str, periodic=()) -> GacData:
    """(J_N, dt, d/dt) on N x S^1 with N symplectic, acting componentwise."""
    model = coordinate_model("product-gc", coords + [fiber],
                             periodic=list(periodic))
    phi = symplectic_block_endo(model, pairs)
    e_plus = sec(model, form={fiber: 1})
    e_minus = sec(model, vec={fiber: 1})
    return build_gac(model, phi, e_plus, e_minus)


def contact_r3(periodic: bool = False) -> GacData:
    """alpha = dz - y dx on R^3 (or on the unit-cube chart when periodic)."""
    model = coordinate_model("contact-r3" if not periodic else "heisenberg-chart",
                             ["x", "y", "z"],
                             periodic=["x", "y", "z"] if periodic else [])
    alpha = PForm(model, 1, {(2,): Scalar.one(), (0,): -Scalar.coord("y")})
    return contact_structure(model, alpha)


def cosymplectic_t3() -> GacData:
    model = coordinate_model("cosymplectic-t3", ["x", "y", "t"],
                             periodic=["x", "y", "t"])
    alpha = model.basis_oneform(2)
    theta = PForm(model, 2, {(0, 1): Scalar.one()})
    return cosymplectic_structure(model, alpha, theta)


def heisenberg_bundle() -> GacData:
    """The contact structure with connection form a3 on the Heisenberg frame."""
    model = heisenberg_model()
    return contact_structure(model, model.basis_oneform(2))


def heisenberg_bundle_chart() -> GacData:
    """Coordinate realization of the frame bundle on the unit cube: the same
    contact induction for dz - y dx with all coordinates periodic."""
    return contact_r3(periodic=True)


def normal_almost_contact_t3() -> GacData:
    """A flat normal almost contact structure on the 3-torus."""
    model = coordinate_model("nact-t3", ["x", "y", "z"], periodic=["x", "y", "z"])
    phi = [[0, -1, 0], [1, 0, 0], [0, 0, 0]]
    xi = VField(model, (Scalar.zero(), Scalar.zero(), Scalar.one()))
    return almost_contact_structure(model, phi, xi, model.basis_oneform(2))


def case2_structure() -> GacData:
    """A shape with X+ = 0 and mixed E-; its stated B-transform is Poon-Wade."""
    model = coordinate_model("case2", ["x", "y", "z"])
    e_plus = sec(model, form={"z": 1})
    e_minus = sec(model, vec={"z": 1}, form={"x": 1})
    u1 = sec(model, vec={"x": 1}, form={"z": -1})
    u2 = sec(model, form={"y": 1})
    u3 = sec(model, vec={"y": 1})
    u4 = sec(model, form={"x": 1})
    action = [(u1, u2), (u2, -u1), (u3, -u4), (u4, u3)]
    return construct_from_gcs(model, e_plus, e_minus, action)
