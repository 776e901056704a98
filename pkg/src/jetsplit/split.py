"""The splitting algorithm.

A series f in m^2 is transformed, by an explicit automorphism computed to a
requested jet precision N, into (nondegenerate quadratic normal form in head
variables) + (residual series in the tail variables).  Away from
characteristic 2 the head is diagonal and the iteration substitutes
x_i -> x_i - g_i/(2 a_i); in characteristic 2 the head consists of Arf pairs
with middle coefficient 1 and the iteration substitutes, per pair,
x_i -> x_i + g_{i+1} and x_{i+1} -> x_{i+1} + g_i.  Each pass strictly
raises the order of the mixed part, so the loop ends once it vanishes at
precision N.
"""

from __future__ import annotations

from dataclasses import dataclass

from .jet import ABOVE_PRECISION, CoordinateChange, Jet, PrecisionError
from .quadform import QuadNormalForm, QuadraticForm, arf_normal_form, diagonalize


class SplitShapeError(ValueError):
    pass


@dataclass
class SplitResult:
    """Verified outcome of a split.

    ``residual`` lives in the ambient variables but involves only tail
    variables; in characteristic 2 it includes the diagonal square tail of
    the 2-jet.  ``change`` satisfies f(change) = head quadratic + residual,
    and ``verification_residual`` is the recomputed difference (zero).
    """

    quad: QuadNormalForm
    rank: int
    residual: Jet
    change: CoordinateChange
    precision: int
    verification_residual: Jet

    @property
    def field(self):
        return self.residual.field

    @property
    def nvars(self):
        return self.residual.nvars

    def head_jet(self) -> Jet:
        return self.quad.head_jet(self.precision)

    def residual_tail_jet(self) -> Jet:
        """The residual as a jet in the tail variables alone."""
        return project_to_tail(self.residual, self.rank)

    def to_json(self, varnames=None) -> dict:
        from .expr import serialize_jet

        return {
            "rank": self.rank,
            "field": self.field.spec(),
            "precision": self.precision,
            "quad": self.quad.to_json(),
            "residual": serialize_jet(self.residual, varnames),
            "change": [serialize_jet(c, varnames) for c in self.change.components],
            "verified": self.verification_residual.is_zero(),
        }


def project_to_tail(f: Jet, rank: int) -> Jet:
    """Re-index a jet supported on x_{rank+1..n} to n - rank variables."""
    for alpha in f.coeffs:
        if any(alpha[:rank]):
            raise SplitShapeError("jet involves head variables")
    return Jet(f.field, f.nvars - rank, f.prec,
               {alpha[rank:]: c for alpha, c in f.coeffs.items()})


def embed_from_tail(g: Jet, rank: int) -> Jet:
    """Inverse of project_to_tail: pad with rank zero head exponents."""
    return Jet(g.field, g.nvars + rank, g.prec,
               {(0,) * rank + alpha: c for alpha, c in g.coeffs.items()})


def _check_m2(f: Jet):
    if any(sum(alpha) < 2 for alpha in f.coeffs):
        raise SplitShapeError("series must have no terms of degree < 2")


def _cofactors(f: Jet, head_quad: Jet, head: int):
    """Per-head-variable cofactors g_i of f - head_quad.

    Every monomial containing a head variable is assigned to the cofactor of
    its smallest head index (divided by that variable); monomials in tail
    variables alone are left for the residual.
    """
    h = f - head_quad
    gs = [dict() for _ in range(head)]
    for alpha, c in h.coeffs.items():
        i = next((j for j in range(head) if alpha[j]), None)
        if i is None:
            continue
        beta = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
        gs[i][beta] = c
    out = [Jet(f.field, f.nvars, f.prec, g) for g in gs]
    for g in out:
        if not g.is_zero() and g.order() < 2:
            raise SplitShapeError("2-jet does not match the declared quadratic head")
    return out


def _mixed_order(gs):
    orders = [g.order() + 1 for g in gs if not g.is_zero()]
    return min(orders) if orders else ABOVE_PRECISION


def _iterate(f: Jet, head_quad: Jet, head: int, make_components, N: int):
    """Shared splitting loop; make_components turns cofactors into one pass."""
    total = CoordinateChange.identity(f.field, f.nvars, N)
    gs = _cofactors(f, head_quad, head)
    mixed_order = _mixed_order(gs)
    passes = 0
    while mixed_order != ABOVE_PRECISION:
        passes += 1
        assert passes <= N + 1, "splitting iteration failed to make progress"
        change = CoordinateChange(make_components(gs))
        f = change.apply(f)
        total = total.compose(change)
        gs = _cofactors(f, head_quad, head)
        new_order = _mixed_order(gs)
        assert new_order > mixed_order, "mixed part order did not increase"
        mixed_order = new_order
    residual = f - head_quad
    return total, residual


def iterate_diagonal(f: Jet, N: int):
    """Split a series whose 2-jet is already diagonal with nonzero entries.

    Returns (change, residual); characteristic != 2.
    """
    field = f.field
    if field.char == 2:
        raise SplitShapeError("diagonal splitting iteration needs characteristic != 2")
    if f.prec < N:
        raise PrecisionError(f"requested precision {N} exceeds the input's {f.prec}")
    f = f.truncate(N)
    _check_m2(f)
    two_jet = f.degree_part(2)
    diag = {}
    for alpha, c in two_jet.coeffs.items():
        support = [i for i, e in enumerate(alpha) if e]
        if len(support) != 1:
            raise SplitShapeError("2-jet is not diagonal")
        diag[support[0]] = c
    head = (max(diag) + 1) if diag else 0
    if sorted(diag) != list(range(head)):
        raise SplitShapeError("diagonal 2-jet entries are not in leading position")
    coeffs = [diag[i] for i in range(head)]
    two = field.from_int(2)

    def components(gs):
        out = []
        for i in range(f.nvars):
            x = Jet.variable(field, f.nvars, i, N)
            if i < head and not gs[i].is_zero():
                scale = field.neg(field.inv(field.mul(two, coeffs[i])))
                out.append(x + gs[i].scale(scale))  # x_i -> x_i - g_i/(2 a_i)
            else:
                out.append(x)
        return out

    return _iterate(f, two_jet, head, components, N)


def iterate_arf(f: Jet, N: int):
    """Split a series whose 2-jet is an Arf normal form with unit middle terms.

    Returns (change, residual); characteristic 2.  The residual keeps the
    diagonal square tail of the 2-jet.
    """
    field = f.field
    if field.char != 2:
        raise SplitShapeError("Arf splitting iteration needs characteristic 2")
    if f.prec < N:
        raise PrecisionError(f"requested precision {N} exceeds the input's {f.prec}")
    f = f.truncate(N)
    _check_m2(f)
    two_jet = f.degree_part(2)
    n = f.nvars
    cross = {}
    squares = {}
    for alpha, c in two_jet.coeffs.items():
        support = [i for i, e in enumerate(alpha) if e]
        if len(support) == 2:
            cross[(support[0], support[1])] = c
        else:
            squares[support[0]] = c
    if sorted(cross) != [(2 * t, 2 * t + 1) for t in range(len(cross))]:
        raise SplitShapeError("2-jet cross terms do not pair consecutive variables")
    if any(c != field.one for c in cross.values()):
        raise SplitShapeError("2-jet pair middle coefficients are not 1")
    l = len(cross)
    head = 2 * l
    head_coeffs = {}
    for alpha, c in two_jet.coeffs.items():
        support = [i for i, e in enumerate(alpha) if e]
        if len(support) == 2 or support[0] < head:
            head_coeffs[alpha] = c
    head_quad = Jet(field, n, f.prec, head_coeffs)

    def components(gs):
        out = [Jet.variable(field, n, i, N) for i in range(n)]
        for t in range(l):
            e = 2 * t
            if not gs[e + 1].is_zero():
                out[e] = out[e] + gs[e + 1]  # x_i -> x_i + g_{i+1}
            if not gs[e].is_zero():
                out[e + 1] = out[e + 1] + gs[e]  # x_{i+1} -> x_{i+1} + g_i
        return out

    return _iterate(f, head_quad, head, components, N)


def split(f: Jet, N: int) -> SplitResult:
    """Full splitting: classify the 2-jet, iterate, and verify by substitution."""
    if N < 2:
        raise PrecisionError("splitting needs precision >= 2")
    if N > f.prec:
        raise PrecisionError(f"requested precision {N} exceeds the input's {f.prec}")
    f = f.truncate(N)
    _check_m2(f)
    field = f.field
    q = QuadraticForm.from_jet(f)
    nf = arf_normal_form(q) if field.char == 2 else diagonalize(q)
    rank = nf.rank
    linear = nf.change(N)
    f1 = linear.apply(f)
    if field.char == 2:
        change_it, residual = iterate_arf(f1, N)
    else:
        change_it, residual = iterate_diagonal(f1, N)
    total = linear.compose(change_it)
    check = total.apply(f) - (nf.head_jet(N) + residual)
    if not check.is_zero():
        raise AssertionError("split verification failed")
    assert rank == f.hessian_rank() or field.char != 2
    return SplitResult(nf, rank, residual, total, N, check)


def verify_split(f: Jet, result: SplitResult) -> Jet:
    """Recompute f(change) - (head quadratic + residual); zero on contract."""
    if f.prec > result.precision:
        f = f.truncate(result.precision)
    lhs = result.change.apply(f)
    rhs = result.head_jet() + result.residual
    return lhs - rhs
