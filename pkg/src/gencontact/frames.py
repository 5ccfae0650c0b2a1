"""Exterior calculus on parallelizable models.

A model is a global frame e_1..e_n with structure constants
[e_i, e_j] = sum_k c[i][j][k] e_k and an optional coordinate block: frame
elements named after a coordinate act on Scalars as the corresponding partial
derivative, all other frame elements act trivially.  Mixed models (Lie frame
times a coordinate torus) compose blockwise, with vanishing cross structure
constants.

Vector fields and p-forms (p <= 3) carry Scalar components over the frame and
coframe.  Forms are stored on strictly increasing index tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .scalar import Scalar

MAX_FORM_DEGREE = 3


class FrameError(Exception):
    pass


def _perm_sign_and_sorted(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``idx``; 0 on repeated indices."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, tuple(sorted(idx))
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign, tuple(sorted(idx))


@dataclass(frozen=True)
class FrameModel:
    """A parallelizable model: frame, coframe, structure constants, coordinates."""

    name: str
    frame_names: tuple[str, ...]
    coframe_names: tuple[str, ...]
    coordinates: tuple[str, ...] = ()       # subset of frame_names
    periodic: frozenset = frozenset()        # subset of coordinates, period 1
    # sparse structure constants: (i, j) with i < j -> {k: Scalar}
    structure: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if len(self.frame_names) != len(self.coframe_names):
            raise FrameError("frame and coframe must have the same length")
        for c in self.coordinates:
            if c not in self.frame_names:
                raise FrameError(f"coordinate {c} is not a frame name")
        for c in self.periodic:
            if c not in self.coordinates:
                raise FrameError(f"periodic flag on non-coordinate {c}")
        for (i, j) in self.structure:
            if not (0 <= i < j < self.dim):
                raise FrameError(f"bad structure index pair {(i, j)}")

    @property
    def dim(self) -> int:
        return len(self.frame_names)

    def index(self, frame_name: str) -> int:
        return self.frame_names.index(frame_name)

    def c(self, i: int, j: int, k: int) -> Scalar:
        """Structure constant c[i][j][k], antisymmetrized from storage."""
        if i == j:
            return Scalar.zero()
        if i < j:
            return self.structure.get((i, j), {}).get(k, Scalar.zero())
        return -self.structure.get((j, i), {}).get(k, Scalar.zero())

    def frame_apply(self, i: int, f: Scalar) -> Scalar:
        """Action of frame element e_i on a Scalar (partial derivative or 0)."""
        name = self.frame_names[i]
        if name in self.coordinates:
            return f.diff(name)
        return Scalar.zero()

    def vf_apply(self, x: "VField", f: Scalar) -> Scalar:
        out = Scalar.zero()
        for i, xi in enumerate(x.comp):
            if not xi.is_zero():
                out = out + xi * self.frame_apply(i, f)
        return out

    def frame_label(self, i: int) -> str:
        n = self.frame_names[i]
        return f"d/d{n}" if n in self.coordinates else n

    def coframe_label(self, i: int) -> str:
        n = self.frame_names[i]
        return f"d{n}" if n in self.coordinates else self.coframe_names[i]

    def basis_vector(self, i: int) -> "VField":
        comp = [Scalar.zero()] * self.dim
        comp[i] = Scalar.one()
        return VField(self, tuple(comp))

    def basis_oneform(self, i: int) -> "PForm":
        return PForm(self, 1, {(i,): Scalar.one()})

    def validate(self) -> list[str]:
        """Diagnostics for antisymmetry/Jacobi violations; empty when valid."""
        out = []
        n = self.dim
        for (i, j), row in self.structure.items():
            for k, v in row.items():
                if not (0 <= k < n):
                    out.append(f"structure constant c[{i}][{j}][{k}] out of range")
                    continue
                if not v.is_zero() and self.frame_names[i] in self.coordinates \
                        and self.frame_names[j] in self.coordinates:
                    out.append(
                        f"coordinate frame elements must commute: c[{i}][{j}][{k}] != 0")
        for i, j, k in itertools.combinations(range(n), 3):
            jac = lie_bracket(lie_bracket(self.basis_vector(i), self.basis_vector(j)),
                              self.basis_vector(k))
            jac = jac + lie_bracket(
                lie_bracket(self.basis_vector(j), self.basis_vector(k)), self.basis_vector(i))
            jac = jac + lie_bracket(
                lie_bracket(self.basis_vector(k), self.basis_vector(i)), self.basis_vector(j))
            for m, comp in enumerate(jac.comp):
                if not comp.is_zero():
                    out.append(
                        f"Jacobi identity fails on triple ({self.frame_names[i]}, "
                        f"{self.frame_names[j]}, {self.frame_names[k]}): "
                        f"component {self.frame_names[m]} = {comp.render()}")
                    break
        return out


def structure_from_brackets(names: Sequence[str],
                            brackets: Mapping) -> dict:
    """Build the sparse structure table from {(i, j): {k: coeff}} with i < j."""
    out = {}
    for (i, j), row in brackets.items():
        entry = {}
        for k, v in row.items():
            sc = v if isinstance(v, Scalar) else Scalar.const(v)
            if not sc.is_zero():
                entry[k] = sc
        if entry:
            out[(i, j)] = entry
    return out


@dataclass(frozen=True)
class VField:
    model: FrameModel
    comp: tuple  # n Scalars

    def __post_init__(self):
        if len(self.comp) != self.model.dim:
            raise FrameError("component count does not match model dimension")

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comp)

    def __add__(self, other: "VField") -> "VField":
        _same_model(self, other)
        return VField(self.model, tuple(a + b for a, b in zip(self.comp, other.comp)))

    def __sub__(self, other: "VField") -> "VField":
        return self + (-other)

    def __neg__(self) -> "VField":
        return VField(self.model, tuple(-a for a in self.comp))

    def scale(self, f) -> "VField":
        return VField(self.model, tuple(f * a for a in self.comp))

    def conj(self) -> "VField":
        return VField(self.model, tuple(a.conj() for a in self.comp))

    def render(self) -> str:
        return _render_components(
            [(self.model.frame_label(i), c) for i, c in enumerate(self.comp)])

    def __repr__(self):
        return f"VField({self.render()})"


class PForm:
    """Alternating form of degree 0..3 with Scalar components."""

    __slots__ = ("model", "degree", "comp")

    def __init__(self, model: FrameModel, degree: int, comp: Mapping | None = None):
        if not (0 <= degree <= MAX_FORM_DEGREE):
            raise FrameError(f"form degree {degree} outside storage range")
        self.model = model
        self.degree = degree
        canon: dict[tuple, Scalar] = {}
        for idx, val in (comp or {}).items():
            if len(idx) != degree:
                raise FrameError("index tuple does not match degree")
            sign, sidx = _perm_sign_and_sorted(idx)
            if sign == 0:
                continue
            sc = val if sign == 1 else -val
            canon[sidx] = canon.get(sidx, Scalar.zero()) + sc
        self.comp = {k: v for k, v in canon.items() if not v.is_zero()}

    @staticmethod
    def zero(model: FrameModel, degree: int) -> "PForm":
        return PForm(model, degree, {})

    @staticmethod
    def function(model: FrameModel, f: Scalar) -> "PForm":
        return PForm(model, 0, {(): f})

    def get(self, *idx: int) -> Scalar:
        sign, sidx = _perm_sign_and_sorted(idx)
        if sign == 0:
            return Scalar.zero()
        v = self.comp.get(sidx, Scalar.zero())
        return v if sign == 1 else -v

    def is_zero(self) -> bool:
        return not self.comp

    def __add__(self, other: "PForm") -> "PForm":
        _same_model(self, other)
        if self.degree != other.degree:
            raise FrameError("cannot add forms of different degree")
        out = dict(self.comp)
        for k, v in other.comp.items():
            out[k] = out.get(k, Scalar.zero()) + v
        return PForm(self.model, self.degree, out)

    def __sub__(self, other: "PForm") -> "PForm":
        return self + (-other)

    def __neg__(self) -> "PForm":
        return PForm(self.model, self.degree, {k: -v for k, v in self.comp.items()})

    def scale(self, f) -> "PForm":
        return PForm(self.model, self.degree, {k: f * v for k, v in self.comp.items()})

    def conj(self) -> "PForm":
        return PForm(self.model, self.degree, {k: v.conj() for k, v in self.comp.items()})

    def __call__(self, *vectors: VField) -> Scalar:
        if len(vectors) != self.degree:
            raise FrameError("wrong number of vector arguments")
        out = Scalar.zero()
        for idx, val in self.comp.items():
            for perm in itertools.permutations(range(self.degree)):
                sign, _ = _perm_sign_and_sorted(perm)
                prod = val if sign == 1 else -val
                for slot, p in enumerate(perm):
                    prod = prod * vectors[slot].comp[idx[p]]
                out = out + prod
        return out

    def render(self) -> str:
        if self.degree == 0:
            return self.comp.get((), Scalar.zero()).render()
        labels = []
        for idx in sorted(self.comp):
            labels.append(("^".join(self.model.coframe_label(i) for i in idx),
                           self.comp[idx]))
        return _render_components(labels)

    def __repr__(self):
        return f"PForm({self.degree}; {self.render()})"


def _same_model(a, b):
    if a.model is not b.model and a.model != b.model:
        raise FrameError("objects live on different models")


def _render_components(labeled: list[tuple[str, Scalar]]) -> str:
    parts = []
    for label, c in labeled:
        if c.is_zero():
            continue
        if c == Scalar.one():
            parts.append((False, label))
            continue
        if c == Scalar.const(-1):
            parts.append((True, label))
            continue
        s = c.render()
        neg = s.startswith("-") and " " not in s[1:].strip("()")
        if neg:
            s = s[1:]
        if (" + " in s) or (" - " in s):
            s = f"({s})"
        parts.append((neg, f"{s}*{label}"))
    if not parts:
        return "0"
    out = ""
    for k, (neg, body) in enumerate(parts):
        if k == 0:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


# ---------------------------------------------------------------------------
# Calculus
# ---------------------------------------------------------------------------

def lie_bracket(x: VField, y: VField) -> VField:
    """[X, Y]^k = X(Y^k) - Y(X^k) + sum_ij X^i Y^j c[i][j][k]."""
    _same_model(x, y)
    model = x.model
    n = model.dim
    comp = [model.vf_apply(x, y.comp[k]) - model.vf_apply(y, x.comp[k])
            for k in range(n)]
    for (i, j), row in model.structure.items():
        coeff = x.comp[i] * y.comp[j] - x.comp[j] * y.comp[i]
        if coeff.is_zero():
            continue
        for k, c in row.items():
            comp[k] = comp[k] + coeff * c
    return VField(model, tuple(comp))


def exterior_derivative(a: PForm) -> PForm:
    """Koszul formula with structure-constant terms; d of a 3-form overflows."""
    model = a.model
    if a.degree >= MAX_FORM_DEGREE:
        raise FrameError("exterior derivative would exceed the degree-3 ceiling")
    n = model.dim
    out: dict[tuple, Scalar] = {}
    for idx in itertools.combinations(range(n), a.degree + 1):
        val = Scalar.zero()
        for pos in range(len(idx)):
            rest = idx[:pos] + idx[pos + 1:]
            term = model.frame_apply(idx[pos], a.get(*rest))
            val = val + (term if pos % 2 == 0 else -term)
        for p in range(len(idx)):
            for q in range(p + 1, len(idx)):
                rest = tuple(idx[r] for r in range(len(idx)) if r not in (p, q))
                bracket_term = Scalar.zero()
                for k in range(n):
                    c = model.c(idx[p], idx[q], k)
                    if not c.is_zero():
                        bracket_term = bracket_term + c * a.get(k, *rest)
                if not bracket_term.is_zero():
                    sign = -1 if (p + q) % 2 else 1
                    val = val + sign * bracket_term
        if not val.is_zero():
            out[idx] = val
    return PForm(model, a.degree + 1, out)


def interior_product(x: VField, a: PForm) -> PForm:
    """Contraction in the first slot; degree drops by one."""
    _same_model(x, a)
    if a.degree == 0:
        raise FrameError("interior product of a 0-form")
    model = a.model
    out: dict[tuple, Scalar] = {}
    for idx, val in a.comp.items():
        for pos in range(len(idx)):
            xi = x.comp[idx[pos]]
            if xi.is_zero():
                continue
            rest = idx[:pos] + idx[pos + 1:]
            term = xi * val
            if pos % 2:
                term = -term
            out[rest] = out.get(rest, Scalar.zero()) + term
    return PForm(model, a.degree - 1, out)


def lie_derivative(x: VField, a: PForm) -> PForm:
    """Cartan formula L_X = i_X d + d i_X."""
    _same_model(x, a)
    if a.degree == 0:
        return PForm.function(a.model, a.model.vf_apply(x, a.comp.get((), Scalar.zero())))
    return interior_product(x, exterior_derivative(a)) \
        + exterior_derivative(interior_product(x, a))


def wedge(a: PForm, b: PForm) -> PForm:
    _same_model(a, b)
    deg = a.degree + b.degree
    if deg > MAX_FORM_DEGREE:
        raise FrameError("wedge product exceeds the degree-3 storage ceiling")
    if a.degree == 0:
        return b.scale(a.comp.get((), Scalar.zero()))
    if b.degree == 0:
        return a.scale(b.comp.get((), Scalar.zero()))
    out: dict[tuple, Scalar] = {}
    for ia, va in a.comp.items():
        for ib, vb in b.comp.items():
            sign, sidx = _perm_sign_and_sorted(ia + ib)
            if sign == 0:
                continue
            term = va * vb
            if sign < 0:
                term = -term
            out[sidx] = out.get(sidx, Scalar.zero()) + term
    return PForm(a.model, deg, out)


def d_of_threeform_components(h: PForm):
    """First nonzero component of dH for a stored 3-form, or None.

    Degree-4 forms are never materialized; this exists so that closedness of a
    Courant twist can be checked on models of dimension > 3.
    """
    model = h.model
    if h.degree != 3:
        raise FrameError("expected a 3-form")
    n = model.dim
    for idx in itertools.combinations(range(n), 4):
        val = Scalar.zero()
        for pos in range(4):
            rest = idx[:pos] + idx[pos + 1:]
            term = model.frame_apply(idx[pos], h.get(*rest))
            val = val + (term if pos % 2 == 0 else -term)
        for p in range(4):
            for q in range(p + 1, 4):
                rest = tuple(idx[r] for r in range(4) if r not in (p, q))
                acc = Scalar.zero()
                for k in range(n):
                    c = model.c(idx[p], idx[q], k)
                    if not c.is_zero():
                        acc = acc + c * h.get(k, *rest)
                if not acc.is_zero():
                    sign = -1 if (p + q) % 2 else 1
                    val = val + sign * acc
        if not val.is_zero():
            return idx, val
    return None


# -- convenient model builders ---------------------------------------------

def coordinate_model(name: str, coords: Sequence[str],
                     periodic: Iterable[str] = ()) -> FrameModel:
    coords = tuple(coords)
    return FrameModel(name=name, frame_names=coords,
                      coframe_names=tuple(f"d{c}" for c in coords),
                      coordinates=coords, periodic=frozenset(periodic))


def lie_frame_model(name: str, frame: Sequence[str], coframe: Sequence[str],
                    brackets: Mapping) -> FrameModel:
    return FrameModel(name=name, frame_names=tuple(frame),
                      coframe_names=tuple(coframe),
                      structure=structure_from_brackets(frame, brackets))
