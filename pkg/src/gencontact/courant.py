"""The generalized tangent bundle TM + T*M: pairing, Courant bracket,
B/beta transforms and pairing adjoints.

Conventions, fixed once and verified by the property suite:

* pairing  <X+xi, Y+beta> = (xi(Y) + beta(X)) / 2;
* skew (Courant) bracket
      [X+xi, Y+beta]_H = [X,Y] + L_X beta - L_Y xi - d(i_X beta - i_Y xi)/2
                          + i_X i_Y H,
  where the twist term i_X i_Y H is the 1-form H(Y, X, .).  With this
  orientation e^B intertwines the twists as [e^B s, e^B t]_{H-dB} =
  e^B([s,t]_H); in particular the untwisted bracket of transformed sections
  equals e^B of the (-dB)-twisted bracket.
* bivector contraction (X ^ Y)(xi) = xi(Y) X - xi(X) Y, so a bivector with
  components pi^{jk} acts on a 1-form as (pi(xi))^j = sum_k pi^{jk} xi_k.

Sections may have complex Scalar components; everything extends bilinearly,
never sesquilinearly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .frames import (FrameModel, PForm, VField, d_of_threeform_components,
                     exterior_derivative, interior_product, lie_bracket,
                     lie_derivative)
from .scalar import Scalar


class CourantError(Exception):
    pass


@dataclass(frozen=True)
class GSection:
    """A section X + xi of (TM + T*M) tensor C."""

    vector: VField
    oneform: PForm

    def __post_init__(self):
        if self.oneform.degree != 1:
            raise CourantError("form part must have degree 1")
        if self.vector.model != self.oneform.model:
            raise CourantError("vector and form parts live on different models")

    @property
    def model(self) -> FrameModel:
        return self.vector.model

    @staticmethod
    def zero(model: FrameModel) -> "GSection":
        return GSection(VField(model, tuple(Scalar.zero() for _ in range(model.dim))),
                        PForm.zero(model, 1))

    @staticmethod
    def of(model: FrameModel, vector=None, oneform=None) -> "GSection":
        z = GSection.zero(model)
        return GSection(vector if vector is not None else z.vector,
                        oneform if oneform is not None else z.oneform)

    @staticmethod
    def from_components(model: FrameModel, comp) -> "GSection":
        n = model.dim
        if len(comp) != 2 * n:
            raise CourantError("need 2n components")
        comp = [c if isinstance(c, Scalar) else Scalar.const(c) for c in comp]
        return GSection(VField(model, tuple(comp[:n])),
                        PForm(model, 1, {(i,): comp[n + i] for i in range(n)}))

    def components(self) -> list[Scalar]:
        n = self.model.dim
        return [self.vector.comp[i] for i in range(n)] + \
               [self.oneform.get(i) for i in range(n)]

    def __add__(self, other: "GSection") -> "GSection":
        return GSection(self.vector + other.vector, self.oneform + other.oneform)

    def __sub__(self, other: "GSection") -> "GSection":
        return GSection(self.vector - other.vector, self.oneform - other.oneform)

    def __neg__(self) -> "GSection":
        return GSection(-self.vector, -self.oneform)

    def scale(self, f) -> "GSection":
        return GSection(self.vector.scale(f), self.oneform.scale(f))

    def conj(self) -> "GSection":
        return GSection(self.vector.conj(), self.oneform.conj())

    def is_zero(self) -> bool:
        return self.vector.is_zero() and self.oneform.is_zero()

    def eval_at(self, point) -> list[complex]:
        return [c.eval(point) for c in self.components()]

    def render(self) -> str:
        v, f = self.vector.render(), self.oneform.render()
        if v == "0":
            return f
        if f == "0":
            return v
        return f"{v} - {f[1:]}" if f.startswith("-") else f"{v} + {f}"

    def __repr__(self):
        return f"GSection({self.render()})"


def pairing(s: GSection, t: GSection) -> Scalar:
    """<X+xi, Y+beta> = (xi(Y) + beta(X)) / 2."""
    _same(s, t)
    out = Scalar.zero()
    for i in range(s.model.dim):
        out = out + s.oneform.get(i) * t.vector.comp[i] \
                  + t.oneform.get(i) * s.vector.comp[i]
    return 0.5 * out


def check_twist(h: PForm | None) -> None:
    if h is None:
        return
    if h.degree != 3:
        raise CourantError("twist must be a 3-form")
    bad = d_of_threeform_components(h)
    if bad is not None:
        idx, val = bad
        raise CourantError(f"twist is not closed: dH component {idx} = {val.render()}")


def courant_bracket(s: GSection, t: GSection, twist: PForm | None = None,
                    *, validate_twist: bool = True) -> GSection:
    """The skew bracket, optionally twisted by a closed 3-form."""
    _same(s, t)
    if twist is not None and validate_twist:
        check_twist(twist)
    x, xi = s.vector, s.oneform
    y, beta = t.vector, t.oneform
    vec = lie_bracket(x, y)
    form = lie_derivative(x, beta) - lie_derivative(y, xi)
    corr = interior_product(x, beta) - interior_product(y, xi)
    form = form - exterior_derivative(corr).scale(Scalar.const(0.5))
    if twist is not None and not twist.is_zero():
        form = form + interior_product(x, interior_product(y, twist))
    return GSection(vec, form)


def b_transform(b: PForm, s: GSection) -> GSection:
    """e^B: X + xi -> X + xi + i_X B (lower-triangular in the splitting)."""
    if b.degree != 2:
        raise CourantError("B-field must be a 2-form")
    return GSection(s.vector, s.oneform + interior_product(s.vector, b))


def beta_transform(pi, s: GSection) -> GSection:
    """e^pi: X + xi -> X + pi(xi) + xi for an antisymmetric bivector.

    ``pi`` is an n x n antisymmetric Scalar matrix, pi[j][k] = pi^{jk}.
    """
    model = s.model
    n = model.dim
    comp = list(s.vector.comp)
    for j in range(n):
        acc = Scalar.zero()
        for k in range(n):
            p = pi[j][k]
            if not (isinstance(p, Scalar) and p.is_zero()) and p != 0:
                psc = p if isinstance(p, Scalar) else Scalar.const(p)
                acc = acc + psc * s.oneform.get(k)
        comp[j] = comp[j] + acc
    return GSection(VField(model, tuple(comp)), s.oneform)


def bivector_of_wedge(x: VField, y: VField):
    """Matrix of X ^ Y under (X ^ Y)(xi) = xi(Y) X - xi(X) Y."""
    n = x.model.dim
    return [[x.comp[j] * y.comp[k] - x.comp[k] * y.comp[j] for k in range(n)]
            for j in range(n)]


class GEndo:
    """Endomorphism of TM + T*M as a 2n x 2n Scalar matrix.

    Basis order (e_1..e_n, e^1..e^n); block view
        [[phi, pi], [theta, lower]]
    with phi: TM->TM, pi: T*M->TM, theta: TM->T*M, lower: T*M->T*M.
    """

    __slots__ = ("model", "mat")

    def __init__(self, model: FrameModel, mat):
        n2 = 2 * model.dim
        if len(mat) != n2 or any(len(r) != n2 for r in mat):
            raise CourantError("matrix must be 2n x 2n")
        self.model = model
        self.mat = tuple(tuple(c if isinstance(c, Scalar) else Scalar.const(c)
                               for c in row) for row in mat)

    @staticmethod
    def zero(model: FrameModel) -> "GEndo":
        n2 = 2 * model.dim
        return GEndo(model, [[Scalar.zero()] * n2 for _ in range(n2)])

    @staticmethod
    def identity(model: FrameModel) -> "GEndo":
        n2 = 2 * model.dim
        return GEndo(model, [[Scalar.one() if i == j else Scalar.zero()
                              for j in range(n2)] for i in range(n2)])

    @staticmethod
    def from_action(model: FrameModel, images: list[GSection]) -> "GEndo":
        """Endomorphism sending the k-th standard basis section to images[k]."""
        n2 = 2 * model.dim
        if len(images) != n2:
            raise CourantError("need an image for each of the 2n basis sections")
        cols = [im.components() for im in images]
        return GEndo(model, [[cols[j][i] for j in range(n2)] for i in range(n2)])

    def column(self, j: int) -> GSection:
        return GSection.from_components(self.model, [self.mat[i][j]
                                                     for i in range(2 * self.model.dim)])

    def apply(self, s: GSection) -> GSection:
        comp = s.components()
        n2 = 2 * self.model.dim
        out = []
        for i in range(n2):
            acc = Scalar.zero()
            for j in range(n2):
                m = self.mat[i][j]
                if not m.is_zero() and not comp[j].is_zero():
                    acc = acc + m * comp[j]
            out.append(acc)
        return GSection.from_components(self.model, out)

    def compose(self, other: "GEndo") -> "GEndo":
        n2 = 2 * self.model.dim
        out = [[Scalar.zero()] * n2 for _ in range(n2)]
        for i in range(n2):
            for k in range(n2):
                a = self.mat[i][k]
                if a.is_zero():
                    continue
                for j in range(n2):
                    b = other.mat[k][j]
                    if not b.is_zero():
                        out[i][j] = out[i][j] + a * b
        return GEndo(self.model, out)

    def __add__(self, other: "GEndo") -> "GEndo":
        return GEndo(self.model, [[a + b for a, b in zip(r1, r2)]
                                  for r1, r2 in zip(self.mat, other.mat)])

    def __neg__(self) -> "GEndo":
        return GEndo(self.model, [[-a for a in r] for r in self.mat])

    def __sub__(self, other: "GEndo") -> "GEndo":
        return self + (-other)

    def scale(self, f) -> "GEndo":
        return GEndo(self.model, [[f * a for a in r] for r in self.mat])

    def block(self, which: str):
        n = self.model.dim
        r0, c0 = {"phi": (0, 0), "pi": (0, n), "theta": (n, 0), "lower": (n, n)}[which]
        return [[self.mat[r0 + i][c0 + j] for j in range(n)] for i in range(n)]

    def adjoint(self) -> "GEndo":
        """Adjoint with respect to the pairing: G^{-1} P^T G, G = [[0,I],[I,0]]/2.

        Blockwise: [[A,B],[C,D]]* = [[D^T, B^T], [C^T, A^T]].
        """
        n = self.model.dim
        a, b = self.block("phi"), self.block("pi")
        c, d = self.block("theta"), self.block("lower")
        out = [[Scalar.zero()] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            for j in range(n):
                out[i][j] = d[j][i]
                out[i][n + j] = b[j][i]
                out[n + i][j] = c[j][i]
                out[n + i][n + j] = a[j][i]
        return GEndo(self.model, out)

    def is_zero(self) -> bool:
        return all(c.is_zero() for row in self.mat for c in row)

    def eval_at(self, point):
        return [[c.eval(point) for c in row] for row in self.mat]

    def conjugate_by_b(self, b: PForm) -> "GEndo":
        """e^B . P . e^{-B} as an explicit matrix conjugation."""
        n = self.model.dim
        bmat = [[b.get(i, j) for j in range(n)] for i in range(n)]
        eb = GEndo.identity(self.model)
        mat = [list(r) for r in eb.mat]
        for i in range(n):
            for j in range(n):
                mat[n + i][j] = bmat[j][i]  # (i_{e_j} B)_i = B(e_j, e_i)
        eb = GEndo(self.model, mat)
        ebinv = GEndo.identity(self.model)
        mat = [list(r) for r in ebinv.mat]
        for i in range(n):
            for j in range(n):
                mat[n + i][j] = -bmat[j][i]
        ebinv = GEndo(self.model, mat)
        return eb.compose(self).compose(ebinv)

    def conjugate_by_beta(self, pi) -> "GEndo":
        """e^pi . P . e^{-pi} for an antisymmetric bivector matrix."""
        n = self.model.dim
        e = GEndo.identity(self.model)
        mat = [list(r) for r in e.mat]
        for i in range(n):
            for j in range(n):
                p = pi[i][j]
                mat[i][n + j] = p if isinstance(p, Scalar) else Scalar.const(p)
        e = GEndo(self.model, mat)
        einv = GEndo.identity(self.model)
        mat = [list(r) for r in einv.mat]
        for i in range(n):
            for j in range(n):
                p = pi[i][j]
                psc = p if isinstance(p, Scalar) else Scalar.const(p)
                mat[i][n + j] = -psc
        einv = GEndo(self.model, mat)
        return e.compose(self).compose(einv)


def endo_b_exp(model: FrameModel, b: PForm) -> GEndo:
    """The matrix of e^B itself."""
    n = model.dim
    e = GEndo.identity(model)
    mat = [list(r) for r in e.mat]
    for i in range(n):
        for j in range(n):
            mat[n + i][j] = b.get(j, i)
    return GEndo(model, mat)


def bracket_axiom_residuals(s1: GSection, s2: GSection, s3: GSection,
                            twist: PForm | None = None):
    """Residuals of the pairing/bracket compatibility relations.

    For the skew bracket both relations carry exact-term corrections:

        X1<s2,s3> - X3<s1,s2>/2 - X2<s1,s3>/2
            = <[s1,s2], s3> + <s2, [s1,s3]>                        (scalar)
        [[s1,s2],s3] + [s2,[s1,s3]] - [s1,[s2,s3]]
            = d(<[s1,s2],s3> + <s1,[s2,s3]> - <s2,[s1,s3]>) / 3    (section)

    Returns (scalar residual, section residual); both vanish identically for
    any sections whenever the twist is closed.
    """
    br = lambda a, b: courant_bracket(a, b, twist, validate_twist=False)
    model = s1.model
    r1 = model.vf_apply(s1.vector, pairing(s2, s3)) \
        - 0.5 * model.vf_apply(s3.vector, pairing(s1, s2)) \
        - 0.5 * model.vf_apply(s2.vector, pairing(s1, s3)) \
        - pairing(br(s1, s2), s3) - pairing(s2, br(s1, s3))

    jac = br(br(s1, s2), s3) + br(s2, br(s1, s3)) - br(s1, br(s2, s3))
    nij = pairing(br(s1, s2), s3) + pairing(s1, br(s2, s3)) - pairing(s2, br(s1, s3))
    dnij = exterior_derivative(PForm.function(model, nij)).scale(Scalar.const(1.0 / 3.0))
    r2 = jac - GSection.of(model, oneform=dnij)
    return r1, r2


def _same(s: GSection, t: GSection):
    if s.model != t.model:
        raise CourantError("sections live on different models")
