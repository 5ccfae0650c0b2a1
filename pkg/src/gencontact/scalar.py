"""Exact closed coefficient algebra for symbolic geometry on tori and frames.

A :class:`Scalar` is a finite sum of terms

    c * (monomial in named coordinates) * exp(i * <k, x>)

with complex machine-float coefficient ``c``, nonnegative integer exponents and
real frequency vector ``k``.  The class is closed under +, -, *, partial
differentiation, complex conjugation, pointwise evaluation and exact
integration over a unit period, which is everything the rest of the engine
needs.  Trigonometric functions live here through their exponential form, so
identities like cos^2 + sin^2 = 1 reduce to cancellation in the canonical form.

Canonical form: terms are sorted by (frequency vector, exponent vector) and
merged; coefficients of magnitude <= ZERO_TOL are pruned.  Two canonical
Scalars represent the same function iff their difference canonicalizes to the
empty sum.  Values are immutable and safe to share between threads.
"""

from __future__ import annotations

import cmath
import math
from typing import Iterable, Mapping

TWO_PI = 2.0 * math.pi
SQRT2 = math.sqrt(2.0)

# Pruning threshold for canonical coefficients.  Irrational constants (pi,
# sqrt(2), ...) are machine floats, so every downstream identity check is an
# "is zero within 1e-9" test; see Scalar.is_zero.
ZERO_TOL = 1e-9

# Frequencies are merged when they agree within this absolute tolerance.
FREQ_TOL = 1e-12

# Polynomial degree guard: runaway expression growth is an error, never a
# silent truncation.
EXPONENT_CAP = 16


class ScalarError(Exception):
    pass


class ExponentCapExceeded(ScalarError):
    pass


# A term is (coeff, exps, freqs) with exps a sorted tuple of (name, power>0)
# and freqs a sorted tuple of (name, value != 0).
_Term = tuple[complex, tuple, tuple]


def _freqs_close(f1, f2) -> bool:
    if len(f1) != len(f2):
        return False
    for (n1, v1), (n2, v2) in zip(f1, f2):
        if n1 != n2 or abs(v1 - v2) > FREQ_TOL:
            return False
    return True


def _canonicalize(terms: Iterable[_Term]) -> tuple[_Term, ...]:
    cleaned = []
    for c, e, f in terms:
        if c == 0:
            continue
        e = tuple(sorted((n, int(p)) for n, p in e if p != 0))
        f = tuple(sorted((n, float(v)) for n, v in f if abs(v) > FREQ_TOL))
        cleaned.append((f, e, complex(c)))
    cleaned.sort(key=lambda t: (t[0], t[1]))
    merged: list[list] = []
    for f, e, c in cleaned:
        if merged and merged[-1][1] == e and _freqs_close(merged[-1][0], f):
            merged[-1][2] += c
        else:
            merged.append([f, e, c])
    out = []
    for f, e, c in merged:
        if abs(c) > ZERO_TOL:
            out.append((c, e, f))
    return tuple(out)


class Scalar:
    """An element of the coefficient algebra, kept in canonical form."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[_Term] = (), *, _canonical: bool = False):
        if _canonical:
            self._terms = tuple(terms)
        else:
            self._terms = _canonicalize(terms)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Scalar":
        return _ZERO

    @staticmethod
    def one() -> "Scalar":
        return _ONE

    @staticmethod
    def const(c: complex) -> "Scalar":
        c = complex(c)
        if abs(c) <= ZERO_TOL:
            return _ZERO
        return Scalar(((c, (), ()),), _canonical=True)

    @staticmethod
    def coord(name: str, power: int = 1) -> "Scalar":
        if power < 0:
            raise ScalarError("negative exponents are outside the algebra")
        if power == 0:
            return _ONE
        if power > EXPONENT_CAP:
            raise ExponentCapExceeded(f"exponent {power} exceeds cap {EXPONENT_CAP}")
        return Scalar(((1.0 + 0.0j, ((name, power),), ()),), _canonical=True)

    @staticmethod
    def expi(freqs: Mapping[str, float], coeff: complex = 1.0) -> "Scalar":
        """coeff * exp(i * sum(freqs[x] * x))."""
        return Scalar(((complex(coeff), (), tuple(sorted(freqs.items()))),))

    @staticmethod
    def cos(freq: float, name: str) -> "Scalar":
        return Scalar.expi({name: freq}, 0.5) + Scalar.expi({name: -freq}, 0.5)

    @staticmethod
    def sin(freq: float, name: str) -> "Scalar":
        return Scalar.expi({name: freq}, -0.5j) + Scalar.expi({name: -freq}, 0.5j)

    # -- views -------------------------------------------------------------

    @property
    def terms(self) -> tuple[_Term, ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1
                                   and not self._terms[0][1] and not self._terms[0][2])

    def const_value(self) -> complex:
        if self.is_zero():
            return 0.0 + 0.0j
        if not self.is_constant():
            raise ScalarError(f"not a constant: {self}")
        return self._terms[0][0]

    def is_real(self) -> bool:
        return (self - self.conj()).is_zero()

    def names(self) -> set[str]:
        out: set[str] = set()
        for _, e, f in self._terms:
            out.update(n for n, _ in e)
            out.update(n for n, _ in f)
        return out

    def depends_on(self, name: str) -> bool:
        return name in self.names()

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "Scalar":
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        return Scalar(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(tuple((-c, e, f) for c, e, f in self._terms), _canonical=True)

    def __sub__(self, other) -> "Scalar":
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Scalar":
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return _ZERO
        out = []
        for c1, e1, f1 in self._terms:
            for c2, e2, f2 in other._terms:
                out.append((c1 * c2, _merge_exps(e1, e2), _merge_freqs(f1, f2)))
        return Scalar(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        # Division only by (numeric) constants; the algebra has no general
        # inverses.  Function-field quotients live in linalg.Frac.
        if isinstance(other, Scalar):
            other = other.const_value()
        c = complex(other)
        if c == 0:
            raise ZeroDivisionError("division of a Scalar by zero")
        return self * Scalar.const(1.0 / c)

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            raise ScalarError("negative powers are outside the algebra")
        acc = _ONE
        for _ in range(int(n)):
            acc = acc * self
        return acc

    def __eq__(self, other) -> bool:
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # tolerance-based equality is incompatible with hashing

    # -- calculus ----------------------------------------------------------

    def diff(self, name: str) -> "Scalar":
        """Exact partial derivative with respect to a coordinate."""
        out = []
        for c, e, f in self._terms:
            for i, (n, p) in enumerate(e):
                if n == name:
                    ne = e[:i] + (((n, p - 1),) if p > 1 else ()) + e[i + 1:]
                    out.append((c * p, ne, f))
                    break
            for n, k in f:
                if n == name:
                    out.append((c * 1j * k, e, f))
                    break
        return Scalar(out)

    def integrate_unit(self, name: str) -> "Scalar":
        """Exact integral over the unit interval in ``name``.

        Polynomial factors are handled by exact integration by parts; the
        result no longer depends on ``name``.  Callers are responsible for
        only integrating coordinates that are periodic with period 1.
        """
        out = []
        for c, e, f in self._terms:
            p = 0
            ne = []
            for n, q in e:
                if n == name:
                    p = q
                else:
                    ne.append((n, q))
            k = 0.0
            nf = []
            for n, v in f:
                if n == name:
                    k = v
                else:
                    nf.append((n, v))
            out.append((c * _poly_exp_unit_integral(p, k), tuple(ne), tuple(nf)))
        return Scalar(out)

    def eval(self, point: Mapping[str, float]) -> complex:
        """Evaluate at a point; every coordinate present must be assigned."""
        total = 0.0 + 0.0j
        for c, e, f in self._terms:
            v = c
            for n, p in e:
                if n not in point:
                    raise ScalarError(f"missing coordinate assignment: {n}")
                v *= point[n] ** p
            phase = 0.0
            for n, k in f:
                if n not in point:
                    raise ScalarError(f"missing coordinate assignment: {n}")
                phase += k * point[n]
            if phase:
                v *= cmath.exp(1j * phase)
            total += v
        return total

    def conj(self) -> "Scalar":
        out = tuple((c.conjugate(), e, tuple((n, -v) for n, v in reversed(f)))
                    for c, e, f in self._terms)
        return Scalar(out)

    # -- rendering ---------------------------------------------------------

    def render(self) -> str:
        return render_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar({self.render()})"

    def __str__(self) -> str:
        return self.render()


def _as_scalar(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, float, complex)):
        return Scalar.const(x)
    return NotImplemented


def _merge_exps(e1, e2):
    d = dict(e1)
    for n, p in e2:
        q = d.get(n, 0) + p
        if q > EXPONENT_CAP:
            raise ExponentCapExceeded(
                f"exponent of {n} reaches {q}, beyond cap {EXPONENT_CAP}")
        d[n] = q
    return tuple(sorted(d.items()))


def _merge_freqs(f1, f2):
    d = dict(f1)
    for n, v in f2:
        d[n] = d.get(n, 0.0) + v
    return tuple(sorted(d.items()))


def _poly_exp_unit_integral(p: int, k: float) -> complex:
    """Exact value of the integral of x^p * exp(i k x) over [0, 1]."""
    if abs(k) <= FREQ_TOL:
        return 1.0 / (p + 1)
    ik = 1j * k
    top = cmath.exp(ik)
    val = (top - 1.0) / ik
    for q in range(1, p + 1):
        # integral(x^q e^{ikx}) = [x^q e^{ikx}/ik]_0^1 - (q/ik) integral(x^{q-1} ...)
        val = top / ik - (q / ik) * val
    return val


_ZERO = Scalar((), _canonical=True)
_ONE = Scalar(((1.0 + 0.0j, (), ()),), _canonical=True)


# ---------------------------------------------------------------------------
# Canonical textual rendering.  The grammar in gencontact.dsl parses exactly
# what this emits, which gives bit-stable round trips.
# ---------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _fmt_complex(c: complex, *, product_ctx: bool) -> str:
    """Render a complex coefficient; parenthesized when used as a factor."""
    re, im = c.real, c.imag
    if abs(im) <= ZERO_TOL:
        return _fmt_float(re)
    if abs(re) <= ZERO_TOL:
        if im == 1.0:
            return "i"
        if im == -1.0:
            return "-i"
        return f"{_fmt_float(im)}*i"
    sign = "+" if im >= 0 else "-"
    body = f"{_fmt_float(re)} {sign} {_fmt_float(abs(im))}*i"
    return f"({body})" if product_ctx else body


def _fmt_linear_phase(freqs) -> str:
    """Render the linear form sum(k*x) with k pulled out as multiples of pi."""
    parts = []
    for n, k in freqs:
        m = k / math.pi
        if abs(m - round(m)) < 1e-9 and abs(round(m)) >= 1:
            m = int(round(m))
            coeff = "pi" if m == 1 else ("-pi" if m == -1 else f"{m}*pi")
        else:
            coeff = repr(k)
        parts.append(f"{coeff}*{n}")
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def _fmt_monomial(exps) -> str:
    return "*".join(n if p == 1 else f"{n}^{p}" for n, p in exps)


def render_scalar(s: Scalar) -> str:
    if s.is_zero():
        return "0"
    terms = list(s._terms)
    consumed = [False] * len(terms)
    index = {}
    for i, (c, e, f) in enumerate(terms):
        index.setdefault((e, tuple((n, round(v, 9)) for n, v in f)), i)

    pieces: list[tuple[complex | None, str]] = []  # (pure coefficient, tail)
    for i, (c, e, f) in enumerate(terms):
        if consumed[i]:
            continue
        tail_factors = []
        if e:
            tail_factors.append(_fmt_monomial(e))
        coeff: complex = c
        if f:
            mirror = (e, tuple((n, round(-v, 9)) for n, v in f))
            j = index.get(mirror)
            if j is not None and j != i and not consumed[j]:
                # c e^{i t} + c' e^{-i t} = (c + c') cos t + i (c - c') sin t,
                # written on the representative with positive leading frequency
                cj = terms[j][0]
                consumed[j] = True
                if f[0][1] > 0:
                    cpos, cneg = c, cj
                    pos = f
                else:
                    cpos, cneg = cj, c
                    pos = tuple((n, -v) for n, v in f)
                phase = _fmt_linear_phase(pos)
                a = cpos + cneg
                b = 1j * (cpos - cneg)
                if abs(a) > ZERO_TOL:
                    pieces.append((a, "*".join(tail_factors + [f"cos({phase})"])))
                if abs(b) > ZERO_TOL:
                    pieces.append((b, "*".join(tail_factors + [f"sin({phase})"])))
            else:
                tail_factors.append(f"exp(i*({_fmt_linear_phase(f)}))")
                pieces.append((coeff, "*".join(tail_factors)))
        else:
            pieces.append((coeff, "*".join(tail_factors)))
        consumed[i] = True

    rendered = []
    for coeff, tail in pieces:
        c = coeff
        neg = False
        if abs(c.imag) <= ZERO_TOL and c.real < 0:
            neg = True
            c = -c
        if not tail:
            body = _fmt_complex(c, product_ctx=False)
            if body.startswith("(") and body.endswith(")"):
                body = body[1:-1]
        elif abs(c - 1.0) <= ZERO_TOL:
            body = tail
        else:
            body = f"{_fmt_complex(c, product_ctx=True)}*{tail}"
        rendered.append((neg, body))

    out = ""
    for k, (neg, body) in enumerate(rendered):
        if k == 0:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out
