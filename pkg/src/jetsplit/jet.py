"""Truncated multivariate power series (jets) and coordinate changes.

A jet is a power series cut off above a total-degree precision N, stored as
a sparse map from exponent tuples to nonzero field elements.  All operations
are exact on the retained terms: binary operations return the minimum of the
two precisions, and products drop terms above the result precision during
accumulation.
"""

from __future__ import annotations

import math

from . import linalg
from .field import Field, Valuation

# order() of the zero jet: larger than any precision, safe in comparisons
ABOVE_PRECISION = math.inf


class PrecisionError(ValueError):
    pass


def grlex_key(alpha):
    """Sort key for graded lexicographic term order (x1-major within a degree)."""
    return (sum(alpha), tuple(-e for e in alpha))


class Jet:
    __slots__ = ("field", "nvars", "prec", "coeffs")

    def __init__(self, field: Field, nvars: int, prec: int, coeffs: dict):
        if prec < 0:
            raise PrecisionError("precision must be >= 0")
        clean = {}
        zero = field.zero
        for alpha, c in coeffs.items():
            if c == zero:
                continue
            if len(alpha) != nvars:
                raise ValueError(f"exponent {alpha} does not have {nvars} entries")
            if sum(alpha) > prec:
                raise PrecisionError(f"term {alpha} exceeds precision {prec}")
            clean[alpha] = c
        self.field = field
        self.nvars = nvars
        self.prec = prec
        self.coeffs = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, field, nvars, prec):
        return cls(field, nvars, prec, {})

    @classmethod
    def constant(cls, field, nvars, prec, c):
        return cls(field, nvars, prec, {(0,) * nvars: c})

    @classmethod
    def variable(cls, field, nvars, i, prec):
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for {nvars} variables")
        if prec < 1:
            raise PrecisionError("a coordinate jet needs precision >= 1")
        alpha = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(field, nvars, prec, {alpha: field.one})

    # -- basic queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def order(self):
        """Smallest total degree of a nonzero term, or ABOVE_PRECISION."""
        if not self.coeffs:
            return ABOVE_PRECISION
        return min(sum(a) for a in self.coeffs)

    def terms(self):
        """Terms in graded lexicographic order."""
        return sorted(self.coeffs.items(), key=lambda kv: grlex_key(kv[0]))

    def constant_term(self):
        return self.coeffs.get((0,) * self.nvars, self.field.zero)

    def degree_part(self, d: int) -> "Jet":
        return Jet(self.field, self.nvars, self.prec,
                   {a: c for a, c in self.coeffs.items() if sum(a) == d})

    def __eq__(self, other):
        return (isinstance(other, Jet) and self.field == other.field
                and self.nvars == other.nvars and self.prec == other.prec
                and self.coeffs == other.coeffs)

    def __repr__(self):
        from .expr import serialize_jet
        return f"Jet({serialize_jet(self)!r})"

    # -- arithmetic -----------------------------------------------------------

    def _check_compatible(self, other):
        if self.field != other.field:
            raise ValueError("jets over different fields")
        if self.nvars != other.nvars:
            raise ValueError("jets in different numbers of variables")

    def __add__(self, other):
        self._check_compatible(other)
        prec = min(self.prec, other.prec)
        out = dict()
        field = self.field
        for a, c in self.coeffs.items():
            if sum(a) <= prec:
                out[a] = c
        for a, c in other.coeffs.items():
            if sum(a) > prec:
                continue
            s = field.add(out.get(a, field.zero), c)
            if s == field.zero:
                out.pop(a, None)
            else:
                out[a] = s
        return Jet(field, self.nvars, prec, out)

    def __neg__(self):
        field = self.field
        return Jet(field, self.nvars, self.prec,
                   {a: field.neg(c) for a, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check_compatible(other)
        field = self.field
        prec = min(self.prec, other.prec)
        left = sorted(((sum(a), a, c) for a, c in self.coeffs.items()))
        right = sorted(((sum(a), a, c) for a, c in other.coeffs.items()))
        out = {}
        zero = field.zero
        for da, a, ca in left:
            if da + (right[0][0] if right else 0) > prec:
                break
            for db, b, cb in right:
                if da + db > prec:
                    break
                g = tuple(x + y for x, y in zip(a, b))
                prod = field.mul(ca, cb)
                s = field.add(out.get(g, zero), prod)
                if s == zero:
                    out.pop(g, None)
                else:
                    out[g] = s
        return Jet(field, self.nvars, prec, out)

    def scale(self, c) -> "Jet":
        field = self.field
        if c == field.zero:
            return Jet.zero(field, self.nvars, self.prec)
        return Jet(field, self.nvars, self.prec,
                   {a: field.mul(c, v) for a, v in self.coeffs.items()})

    def power(self, e: int) -> "Jet":
        if e < 0:
            raise ValueError("negative jet power")
        result = Jet.constant(self.field, self.nvars, self.prec, self.field.one)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- truncation, order, differentiation ------------------------------------

    def truncate(self, k: int) -> "Jet":
        if k > self.prec:
            raise PrecisionError(f"cannot truncate precision-{self.prec} jet at {k}")
        return Jet(self.field, self.nvars, k,
                   {a: c for a, c in self.coeffs.items() if sum(a) <= k})

    def with_precision(self, prec: int) -> "Jet":
        """Same terms at another precision; existing terms must fit."""
        return Jet(self.field, self.nvars, prec, dict(self.coeffs))

    def partial(self, i: int) -> "Jet":
        """Formal partial derivative; the exponent multiplies in the field."""
        if not 0 <= i < self.nvars:
            raise ValueError(f"variable index {i} out of range")
        if self.prec < 1:
            raise PrecisionError("cannot differentiate a precision-0 jet")
        field = self.field
        out = {}
        for a, c in self.coeffs.items():
            e = a[i]
            if e == 0:
                continue
            coeff = field.mul(field.from_int(e), c)
            if coeff == field.zero:
                continue
            b = a[:i] + (e - 1,) + a[i + 1:]
            out[b] = field.add(out.get(b, field.zero), coeff)
            if out[b] == field.zero:
                del out[b]
        return Jet(field, self.nvars, self.prec - 1, out)

    # -- substitution -----------------------------------------------------------

    def substitute(self, parts) -> "Jet":
        """Evaluate the jet at an n-tuple of jets with zero constant term.

        Every part must live in the same target variable set and carry at
        least this jet's precision; the result is exact at that precision.
        """
        parts = list(parts)
        if len(parts) != self.nvars:
            raise ValueError(f"need {self.nvars} substitution components, got {len(parts)}")
        field = self.field
        prec = self.prec
        if self.nvars == 0:
            return Jet(field, 0, prec, dict(self.coeffs))
        m = parts[0].nvars
        for p in parts:
            if p.field != field:
                raise ValueError("substitution components over a different field")
            if p.nvars != m:
                raise ValueError("substitution components in different variable sets")
            if p.prec < prec:
                raise PrecisionError("substitution component precision below target")
            if p.constant_term() != field.zero:
                raise ValueError("substitution component has a nonzero constant term")
        parts = [p if p.prec == prec else p.truncate(prec) for p in parts]
        powers = [{0: Jet.constant(field, m, prec, field.one)} for _ in range(self.nvars)]

        def power_of(i, e):
            cache = powers[i]
            if e not in cache:
                best = max(k for k in cache if k <= e)
                acc = cache[best]
                for k in range(best + 1, e + 1):
                    acc = acc * parts[i]
                    cache[k] = acc
            return cache[e]

        acc = Jet.zero(field, m, prec)
        for alpha, c in sorted(self.coeffs.items(), key=lambda kv: grlex_key(kv[0])):
            term = None
            for i, e in enumerate(alpha):
                if e == 0:
                    continue
                p = power_of(i, e)
                term = p if term is None else term * p
            if term is None:
                term = Jet.constant(field, m, prec, field.one)
            acc = acc + term.scale(c)
        return acc

    # -- second-order data ---------------------------------------------------

    def hessian(self):
        """Matrix of second partials at 0, computed in the field."""
        if self.prec < 2:
            raise PrecisionError("hessian needs precision >= 2")
        field = self.field
        n = self.nvars
        h = [[field.zero] * n for _ in range(n)]
        two = field.from_int(2)
        for a, c in self.coeffs.items():
            if sum(a) != 2:
                continue
            support = [i for i, e in enumerate(a) if e]
            if len(support) == 1:
                i = support[0]
                h[i][i] = field.mul(two, c)
            else:
                i, j = support
                h[i][j] = c
                h[j][i] = c
        return h

    def hessian_rank(self) -> int:
        return linalg.rank(self.field, self.hessian())

    # -- norms -----------------------------------------------------------------

    def norm(self, valuation: Valuation, eps):
        """The weighted coefficient norm  sum |c_alpha| * eps^alpha."""
        valuation.check(self.field)
        eps = list(eps)
        if len(eps) != self.nvars:
            raise ValueError(f"need {self.nvars} radii, got {len(eps)}")
        for e in eps:
            if e <= 0:
                raise ValueError("radii must be positive")
        from .field import ArchimedeanValuation
        from fractions import Fraction

        total = Fraction(0)
        archimedean = isinstance(valuation, ArchimedeanValuation)
        for a, c in self.coeffs.items():
            weight = Fraction(1)
            for e, r in zip(a, eps):
                if e:
                    weight *= Fraction(r) ** e
            if archimedean:
                total += valuation.exact_value(self.field, c) * weight
            else:
                total += valuation.value(self.field, c) * weight
        return float(total) if archimedean else total


class CoordinateChange:
    """An n-tuple of jets with zero constant terms, acting by substitution.

    The change is an automorphism exactly when the linear-part matrix
    (d phi_i / d x_j at 0) is invertible over the field.
    """

    __slots__ = ("field", "nvars", "prec", "components")

    def __init__(self, components):
        components = tuple(components)
        if not components:
            raise ValueError("a coordinate change needs at least one component")
        first = components[0]
        for c in components:
            if c.field != first.field or c.nvars != len(components) or c.prec != first.prec:
                raise ValueError("components must be jets in n variables at one precision")
            if c.constant_term() != c.field.zero:
                raise ValueError("coordinate change component has a nonzero constant term")
        self.field = first.field
        self.nvars = len(components)
        self.prec = first.prec
        self.components = components

    @classmethod
    def identity(cls, field, nvars, prec):
        return cls([Jet.variable(field, nvars, i, prec) for i in range(nvars)])

    @classmethod
    def from_linear(cls, field, matrix, prec):
        """Linear change with components phi_i = sum_j matrix[i][j] * x_j."""
        n = len(matrix)
        comps = []
        for row in matrix:
            coeffs = {}
            for j, c in enumerate(row):
                if c != field.zero:
                    alpha = tuple(1 if t == j else 0 for t in range(n))
                    coeffs[alpha] = c
            comps.append(Jet(field, n, prec, coeffs))
        return cls(comps)

    def linear_matrix(self):
        n = self.nvars
        field = self.field
        out = [[field.zero] * n for _ in range(n)]
        for i, comp in enumerate(self.components):
            for a, c in comp.coeffs.items():
                if sum(a) == 1:
                    out[i][a.index(1)] = c
        return out

    def is_automorphism(self) -> bool:
        return linalg.rank(self.field, self.linear_matrix()) == self.nvars

    def apply(self, f: Jet) -> Jet:
        return f.substitute(self.components)

    def compose(self, inner: "CoordinateChange") -> "CoordinateChange":
        """The change x -> self(inner(x)), so f.substitute matches chaining:
        compose(compose(f, self), inner) == compose(f, self.compose(inner))."""
        return CoordinateChange([c.substitute(inner.components) for c in self.components])

    def __eq__(self, other):
        return isinstance(other, CoordinateChange) and self.components == other.components

    def __repr__(self):
        return f"CoordinateChange({list(self.components)!r})"
