"""Generalized almost contact triples (Phi, E+, E-): axiomatic validation,
derived Reeb-type data, orthogonal-complement and eigenbundle frames,
structure-level transforms, and assembly from a complex structure on the
pairing-orthogonal complement of span{E+, E-}.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .courant import (CourantError, GEndo, GSection, b_transform,
                      beta_transform, check_twist, pairing)
from .frames import FrameModel, PForm, VField, exterior_derivative
from .linalg import RANK_TOL
from .sampling import DEFAULT_SAMPLES, sample_points
from .scalar import Scalar


class GacValidationError(Exception):
    """A violated structure axiom, with the first nonzero residual."""

    def __init__(self, axiom: str, residual: str):
        self.axiom = axiom
        self.residual = residual
        super().__init__(f"axiom violated: {axiom}; residual {residual}")


@dataclass
class SubbundleFrame:
    """A spanning set of sections with a pointwise rank certificate."""

    label: str
    sections: list[GSection]
    claimed_rank: int
    samples: list[dict]
    sampled: bool = False            # True when only pointwise data is trusted
    point_ranks: list[int] = field(default_factory=list)

    def matrix_at(self, point) -> np.ndarray:
        return linalg.eval_matrix([s.components() for s in self.sections], point)

    def certify(self) -> bool:
        self.point_ranks = [linalg.numeric_rank(self.matrix_at(p))
                            for p in self.samples]
        return all(r == self.claimed_rank for r in self.point_ranks)

    def render(self) -> list[str]:
        return [s.render() for s in self.sections]


def _leading_normalize(s: GSection) -> GSection:
    for c in s.components():
        if not c.is_zero():
            if c.is_constant():
                v = c.const_value()
                if abs(v - 1.0) > 1e-12:
                    return s.scale(Scalar.const(1.0 / v))
            return s
    return s


def projection_to_complement(e_plus: GSection, e_minus: GSection,
                             s: GSection) -> GSection:
    """Projection onto the pairing-orthogonal complement of span{E+, E-}."""
    a_plus = 2 * pairing(e_minus, s)
    a_minus = 2 * pairing(e_plus, s)
    return s - e_plus.scale(a_plus) - e_minus.scale(a_minus)


def orthogonal_complement(model: FrameModel, e_plus: GSection, e_minus: GSection,
                          samples) -> SubbundleFrame:
    """Frame of {s : <s, E+> = <s, E-> = 0} by exact elimination."""
    n2 = 2 * model.dim
    rows = []
    for e in (e_plus, e_minus):
        comp = e.components()
        # <s, e> = (1/2) sum_i (form_e_i * vec_s_i + vec_e_i * form_s_i)
        row = [comp[model.dim + i] for i in range(model.dim)] + \
              [comp[i] for i in range(model.dim)]
        rows.append(row)
    basis = linalg.kernel_basis(rows, samples)
    if basis is None:
        raise GacValidationError("orthogonal-complement elimination",
                                 "no denominator-safe frame")
    sections = [_leading_normalize(GSection.from_components(model, vec))
                for vec in basis]
    frame = SubbundleFrame("Vperp", sections, n2 - 2, samples)
    if not frame.certify():
        frame.sampled = True
    return frame


@dataclass
class GacData:
    """A validated triple with its cached derived data."""

    model: FrameModel
    phi: GEndo
    e_plus: GSection
    e_minus: GSection
    twist: PForm | None = None
    sample_count: int = DEFAULT_SAMPLES

    # caches, filled by build_gac
    samples: list = field(default_factory=list)
    r: VField = None
    eta: PForm = None
    r_prime: VField = None
    eta_prime: PForm = None
    v_perp: SubbundleFrame = None
    kernel_frame: SubbundleFrame = None
    e10: SubbundleFrame = None
    e01: SubbundleFrame = None
    l_plus: SubbundleFrame = None
    l_minus: SubbundleFrame = None

    @property
    def n(self) -> int:
        """The n of a (2n+1)-dimensional model."""
        return (self.model.dim - 1) // 2

    def r_section(self) -> GSection:
        return GSection.of(self.model, vector=self.r)

    def eta_section(self) -> GSection:
        return GSection.of(self.model, oneform=self.eta)

    def l_frame(self, side: str) -> SubbundleFrame:
        return self.l_plus if side == "+" else self.l_minus

    def e_section(self, side: str) -> GSection:
        return self.e_plus if side == "+" else self.e_minus


def gac_violations(model: FrameModel, phi: GEndo, e_plus: GSection,
                   e_minus: GSection, twist: PForm | None = None,
                   first_only: bool = False) -> list[tuple[str, str]]:
    """All violated axioms of a candidate triple, as (axiom, residual) pairs."""
    out = []

    def record(axiom, residual_render):
        out.append((axiom, residual_render))

    p = pairing(e_plus, e_plus)
    if not p.is_zero():
        record("<E+,E+> = 0", p.render())
        if first_only:
            return out
    p = pairing(e_minus, e_minus)
    if not p.is_zero():
        record("<E-,E-> = 0", p.render())
        if first_only:
            return out
    p = pairing(e_plus, e_minus) - Scalar.const(0.5)
    if not p.is_zero():
        record("<E+,E-> = 1/2", (p + Scalar.const(0.5)).render())
        if first_only:
            return out

    skew = phi + phi.adjoint()
    if not skew.is_zero():
        bad = next(c for row in skew.mat for c in row if not c.is_zero())
        record("Phi + Phi* = 0", bad.render())
        if first_only:
            return out

    if twist is not None:
        try:
            check_twist(twist)
        except CourantError as exc:
            record("closed twist", str(exc))
            if first_only:
                return out

    n2 = 2 * model.dim
    for j in range(n2):
        u = GSection.from_components(model, [Scalar.one() if i == j else Scalar.zero()
                                             for i in range(n2)])
        lhs = phi.apply(phi.apply(u))
        rhs = -u + e_plus.scale(2 * pairing(e_minus, u)) \
                 + e_minus.scale(2 * pairing(e_plus, u))
        diff = lhs - rhs
        if not diff.is_zero():
            record("Phi^2 = -1 + E+ (x) E- + E- (x) E+", diff.render())
            if first_only:
                return out
            break

    r, eta, rp, etap = derived_pair_raw(model, e_plus, e_minus)
    for label, one_form, vec in (("eta(R) = 1", eta, r), ("eta'(R') = 1", etap, rp)):
        val = Scalar.zero()
        for i in range(model.dim):
            val = val + one_form.get(i) * vec.comp[i]
        if not (val - 1).is_zero():
            record(label, val.render())
            if first_only:
                return out
    return out


def derived_pair_raw(model, e_plus, e_minus):
    r = e_plus.vector + e_minus.vector
    eta = e_plus.oneform + e_minus.oneform
    r_prime = e_minus.vector - e_plus.vector
    eta_prime = e_plus.oneform - e_minus.oneform
    return r, eta, r_prime, eta_prime


def build_gac(model: FrameModel, phi: GEndo, e_plus: GSection, e_minus: GSection,
              twist: PForm | None = None,
              sample_count: int = DEFAULT_SAMPLES) -> GacData:
    """Validate the axioms symbolically and cache all derived frames.

    Raises GacValidationError naming the first violated axiom.
    """
    bad = gac_violations(model, phi, e_plus, e_minus, twist, first_only=True)
    if bad:
        raise GacValidationError(*bad[0])

    g = GacData(model, phi, e_plus, e_minus, twist, sample_count)
    g.samples = sample_points(model, sample_count)
    g.r, g.eta, g.r_prime, g.eta_prime = derived_pair_raw(model, e_plus, e_minus)
    g.v_perp = orthogonal_complement(model, e_plus, e_minus, g.samples)
    g.kernel_frame = SubbundleFrame("ker Phi", [e_plus, e_minus], 2, g.samples)
    g.kernel_frame.certify()
    _eigen_frames(g)
    return g


def derived_pair(g: GacData):
    """(R, eta, R', eta') with R = X+ + X-, eta = eta+ + eta-, etc."""
    return g.r, g.eta, g.r_prime, g.eta_prime


def _eigen_frames(g: GacData) -> None:
    """E^(1,0) from {b - i Phi b : b in the complement frame}, then L+-."""
    model = g.model
    target_rank = model.dim - 1
    candidates = [_leading_normalize(b - g.phi.apply(b).scale(1j))
                  for b in g.v_perp.sections]
    probe = g.samples[: min(3, len(g.samples))] or [{}]
    chosen: list[GSection] = []

    def stacked(sections):
        if not sections:
            return np.zeros((0, 0))
        mats = [linalg.eval_matrix([s.components() for s in sections], p)
                for p in probe]
        return np.hstack(mats)

    rank = 0
    for c in candidates:
        trial = chosen + [c]
        r = linalg.numeric_rank(stacked(trial))
        if r > rank:
            chosen.append(c)
            rank = r
        if rank == target_rank:
            break
    g.e10 = SubbundleFrame("E10", chosen, target_rank, g.samples)
    if not g.e10.certify():
        raise GacValidationError("rank certificate for E10",
                                 f"pointwise ranks {set(g.e10.point_ranks)} != {target_rank}")
    g.e01 = SubbundleFrame("E01", [s.conj() for s in chosen], target_rank, g.samples)
    g.e01.certify()
    g.l_plus = SubbundleFrame("L+", [g.e_plus] + chosen, model.dim, g.samples)
    g.l_minus = SubbundleFrame("L-", [g.e_minus] + chosen, model.dim, g.samples)
    for f in (g.l_plus, g.l_minus):
        if not f.certify():
            raise GacValidationError(f"rank certificate for {f.label}",
                                     f"pointwise ranks {set(f.point_ranks)} != {f.claimed_rank}")


def isotropy_violations(frame: SubbundleFrame) -> list[tuple[int, int, str]]:
    out = []
    secs = frame.sections
    for i in range(len(secs)):
        for j in range(i, len(secs)):
            p = pairing(secs[i], secs[j])
            if not p.is_zero():
                out.append((i, j, p.render()))
    return out


# ---------------------------------------------------------------------------
# Shape analysis for the Poon-Wade classification (the involutivity flags are
# combined in gencontact.involutivity).
# ---------------------------------------------------------------------------

def _part_kind(components: list[Scalar], samples) -> str:
    """'zero' | 'nowhere-zero' | 'vanishes-somewhere' for a component vector."""
    if all(c.is_zero() for c in components):
        return "zero"
    pts = samples or [{}]
    for p in pts:
        if all(abs(c.eval(p)) <= RANK_TOL for c in components):
            return "vanishes-somewhere"
    return "nowhere-zero"


def poon_wade_shape(g: GacData) -> dict:
    """Vector/form shape of E+- and the transform candidate, if any.

    Returns a dict with keys 'shape' in {'PW(+)', 'PW(-)', None},
    'case' and 'candidate' describing the stated B- or beta-transform that
    produces a Poon-Wade shape when the relevant parts are nowhere vanishing.
    """
    n = g.model.dim
    xp = _part_kind(list(g.e_plus.vector.comp), g.samples)
    ep = _part_kind([g.e_plus.oneform.get(i) for i in range(n)], g.samples)
    xm = _part_kind(list(g.e_minus.vector.comp), g.samples)
    em = _part_kind([g.e_minus.oneform.get(i) for i in range(n)], g.samples)
    out = {"x_plus": xp, "eta_plus": ep, "x_minus": xm, "eta_minus": em,
           "shape": None, "case": None, "candidate": None, "candidate_kind": None}

    if ep == "zero" and xm == "zero" and xp != "zero" and em != "zero":
        out["shape"] = "PW(+)"       # E+ a vector field, E- a 1-form
        return out
    if xp == "zero" and em == "zero" and ep != "zero" and xm != "zero":
        out["shape"] = "PW(-)"       # E+ a 1-form, E- a vector field
        return out

    from .frames import wedge
    if xp == "zero" and xm == "nowhere-zero":
        # B = eta- ^ eta+ strips eta- from E- (B may vanish when eta- does)
        b = wedge(g.e_minus.oneform, g.e_plus.oneform)
        out["case"] = "X+ = 0"
        out["candidate_kind"] = "B-field"
        out["candidate"] = b
        return out
    if xm == "zero" and xp == "nowhere-zero":
        b = wedge(g.e_plus.oneform, g.e_minus.oneform)
        out["case"] = "X- = 0"
        out["candidate_kind"] = "B-field"
        out["candidate"] = b
        return out
    if xp == "nowhere-zero" and xm == "nowhere-zero" and \
            (ep == "zero") != (em == "zero"):
        from .courant import bivector_of_wedge
        out["case"] = "eta+ = 0" if ep == "zero" else "eta- = 0"
        out["candidate_kind"] = "beta-field"
        out["candidate"] = bivector_of_wedge(g.e_plus.vector, g.e_minus.vector)
        return out
    return out


# ---------------------------------------------------------------------------
# Structure-level transforms
# ---------------------------------------------------------------------------

def transform_gac(g: GacData, kind: str, datum) -> GacData:
    """B-field or beta-field transform of the whole structure, re-validated.

    A non-closed B updates the twist to (old twist) - dB, which is exactly
    the twist for which the transformed bundles are again involutive.
    """
    if kind == "B-field":
        b: PForm = datum
        phi2 = g.phi.conjugate_by_b(b)
        ep2 = b_transform(b, g.e_plus)
        em2 = b_transform(b, g.e_minus)
        db = exterior_derivative(b)
        twist = g.twist
        if not db.is_zero():
            twist = (twist - db) if twist is not None else -db
        return build_gac(g.model, phi2, ep2, em2, twist, g.sample_count)
    if kind == "beta-field":
        pi = datum
        phi2 = g.phi.conjugate_by_beta(pi)
        ep2 = beta_transform(pi, g.e_plus)
        em2 = beta_transform(pi, g.e_minus)
        return build_gac(g.model, phi2, ep2, em2, g.twist, g.sample_count)
    raise ValueError(f"unknown transform kind: {kind}")


# ---------------------------------------------------------------------------
# Assembly from a complex structure on the orthogonal complement
# ---------------------------------------------------------------------------

def construct_from_gcs(model: FrameModel, e_plus: GSection, e_minus: GSection,
                       j_action: list[tuple[GSection, GSection]],
                       twist: PForm | None = None,
                       sample_count: int = DEFAULT_SAMPLES) -> GacData:
    """Extend a complex structure J on the orthogonal complement by zero.

    ``j_action`` lists (u, J u) pairs whose domain must span the complement;
    J must preserve it, square to -1 there and be skew for the pairing.  The
    assembled endomorphism is validated like any other triple.
    """
    for e, label in ((e_plus, "<E+,E+> = 0"), (e_minus, "<E-,E-> = 0")):
        p = pairing(e, e)
        if not p.is_zero():
            raise GacValidationError(label, p.render())
    p = pairing(e_plus, e_minus) - Scalar.const(0.5)
    if not p.is_zero():
        raise GacValidationError("<E+,E-> = 1/2", (p + Scalar.const(0.5)).render())

    samples = sample_points(model, sample_count)
    domain = [u for u, _ in j_action]
    images = dict(enumerate(img for _, img in j_action))

    # J must preserve the complement: every image orthogonal to E+-
    for k, (_, img) in enumerate(j_action):
        for e, nm in ((e_plus, "E+"), (e_minus, "E-")):
            p = pairing(img, e)
            if not p.is_zero():
                raise GacValidationError("J preserves the complement",
                                         f"<J u_{k}, {nm}> = {p.render()}")

    def apply_j(s: GSection) -> GSection:
        ok, coeffs = linalg.in_span_symbolic([u.components() for u in domain],
                                             s.components(), samples)
        if not ok:
            raise GacValidationError("J domain spans the complement",
                                     f"cannot express {s.render()}")
        out = GSection.zero(model)
        for k, f in enumerate(coeffs):
            sc = f.as_scalar()
            if sc is None:
                raise GacValidationError("J coefficient denominators",
                                         "non-constant denominator")
            if not sc.is_zero():
                out = out + images[k].scale(sc)
        return out

    # J^2 = -1 and skewness on the domain
    for k, (u, img) in enumerate(j_action):
        sq = apply_j(img) + u
        if not sq.is_zero():
            raise GacValidationError("J^2 = -1 on the complement",
                                     f"(J^2 + 1) u_{k} = {sq.render()}")
    for a, (u, ju) in enumerate(j_action):
        for b, (v, jv) in enumerate(j_action):
            p = pairing(ju, v) + pairing(u, jv)
            if not p.is_zero():
                raise GacValidationError("J skew for the pairing",
                                         f"pair ({a},{b}): {p.render()}")

    n2 = 2 * model.dim
    columns = []
    for jdx in range(n2):
        u = GSection.from_components(model, [Scalar.one() if i == jdx else Scalar.zero()
                                             for i in range(n2)])
        b = projection_to_complement(e_plus, e_minus, u)
        columns.append(apply_j(b) if not b.is_zero() else GSection.zero(model))
    phi = GEndo.from_action(model, columns)
    return build_gac(model, phi, e_plus, e_minus, twist, sample_count)
