"""Milnor number and finite-determinacy bounds by exact linear algebra.

Inputs are treated as polynomials (their jets carry every term).  Ideal
membership at bounded degree is decided by incremental row reduction over
the monomial basis; the inclusion m^s <= J + m^(s+1), once seen, upgrades to
m^s <= J in the local ring by Nakayama, which both certifies finiteness of
the Milnor number and bounds the quotient computation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import Field
from .jet import ABOVE_PRECISION, Jet, grlex_key

DEFAULT_MAX_DEGREE = 12


def monomials_of_degree(nvars: int, degree: int):
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            yield (first,) + rest


def count_monomials_upto(nvars: int, degree: int) -> int:
    import math

    return sum(math.comb(d + nvars - 1, nvars - 1) for d in range(degree + 1))


class _Echelon:
    """Sparse exact row echelon keyed by graded-lex leading monomials."""

    def __init__(self, field: Field):
        self.field = field
        self.rows = {}

    def _reduce(self, row):
        field = self.field
        zero = field.zero
        row = dict(row)
        while row:
            lead = min(row, key=grlex_key)
            pivot = self.rows.get(lead)
            if pivot is None:
                return row, lead
            c = row[lead]
            for mono, pc in pivot.items():
                new = field.sub(row.get(mono, zero), field.mul(c, pc))
                if new == zero:
                    row.pop(mono, None)
                else:
                    row[mono] = new
        return row, None

    def insert(self, row):
        field = self.field
        row, lead = self._reduce(row)
        if lead is None:
            return
        inv = field.inv(row[lead])
        self.rows[lead] = {m: field.mul(inv, c) for m, c in row.items()}

    def contains(self, row) -> bool:
        reduced, lead = self._reduce(row)
        return lead is None

    @property
    def rank(self) -> int:
        return len(self.rows)


def _ideal_echelon(field: Field, gens, cutoff: int, min_multiplier_degree: int = 0):
    """Echelon of all monomial multiples of the generators, kept mod m^(cutoff+1)."""
    ech = _Echelon(field)
    nvars = gens[0].nvars if gens else 0
    for g in gens:
        if g.is_zero():
            continue
        ordg = int(g.order())
        top = cutoff - ordg
        for bdeg in range(min_multiplier_degree, top + 1):
            for beta in monomials_of_degree(nvars, bdeg):
                row = {}
                for alpha, c in g.coeffs.items():
                    if bdeg + sum(alpha) <= cutoff:
                        row[tuple(b + a for b, a in zip(beta, alpha))] = c
                ech.insert(row)
    return ech


def _covers_degree(field: Field, ech: _Echelon, nvars: int, degree: int) -> bool:
    return all(ech.contains({mono: field.one}) for mono in monomials_of_degree(nvars, degree))


def jacobian_generators(f: Jet):
    return [f.partial(i) for i in range(f.nvars)]


@dataclass
class MilnorReport:
    """Outcome of the bounded Milnor-number search.

    ``mu`` is None when no Nakayama certificate m^s <= J + m^(s+1) appears
    up to ``max_degree`` -- that is "infinite or unknown", never a claim of
    non-isolation.  ``determinacy_bound`` is 2*mu - order + 2 when mu is
    certified.
    """

    mu: int | None
    stabilization_degree: int | None
    determinacy_bound: int | None
    order: int | None
    max_degree: int


def milnor_number(f: Jet, max_degree: int = DEFAULT_MAX_DEGREE) -> MilnorReport:
    field = f.field
    order = f.order()
    order = None if order == ABOVE_PRECISION else int(order)
    gens = [g for g in jacobian_generators(f) if not g.is_zero()] if order is not None else []
    if gens:
        for s in range(1, max_degree + 1):
            ech = _ideal_echelon(field, gens, cutoff=s)
            if _covers_degree(field, ech, f.nvars, s):
                quotient = _ideal_echelon(field, gens, cutoff=s - 1)
                mu = count_monomials_upto(f.nvars, s - 1) - quotient.rank
                bound = 2 * mu - order + 2
                return MilnorReport(mu, s, bound, order, max_degree)
    return MilnorReport(None, None, None, order, max_degree)


def verify_milnor(f: Jet, report: MilnorReport) -> bool:
    """Re-run the certificate membership checks from scratch."""
    if report.mu is None:
        return True
    field = f.field
    gens = [g for g in jacobian_generators(f) if not g.is_zero()]
    s = report.stabilization_degree
    ech = _ideal_echelon(field, gens, cutoff=s)
    return _covers_degree(field, ech, f.nvars, s)


def determinacy_certificate(f: Jet, max_degree: int = DEFAULT_MAX_DEGREE):
    """Smallest k with m^(k+2) <= m^2 J + m^(k+3), or None up to max_degree."""
    order = f.order()
    if order == ABOVE_PRECISION:
        return None
    field = f.field
    gens = [g for g in jacobian_generators(f) if not g.is_zero()]
    if not gens:
        return None
    for k in range(0, max_degree - 1):
        ech = _ideal_echelon(field, gens, cutoff=k + 2, min_multiplier_degree=2)
        if _covers_degree(field, ech, f.nvars, k + 2):
            return k
    return None


def verify_determinacy(f: Jet, k) -> bool:
    """Re-check the membership certificate m^(k+2) <= m^2 J + m^(k+3)."""
    if k is None:
        return True
    field = f.field
    gens = [g for g in jacobian_generators(f) if not g.is_zero()]
    if not gens:
        return False
    ech = _ideal_echelon(field, gens, cutoff=k + 2, min_multiplier_degree=2)
    return _covers_degree(field, ech, f.nvars, k + 2)


def determinacy_bound(f: Jet, max_degree: int = DEFAULT_MAX_DEGREE):
    """Right-determinacy bound 2k - order + 2 from the m^2 J inclusion."""
    k = determinacy_certificate(f, max_degree)
    if k is None:
        return None
    return 2 * k - int(f.order()) + 2


def mu_determinacy_bound(f: Jet, max_degree: int = DEFAULT_MAX_DEGREE):
    """Right-determinacy bound 2*mu - order + 2; None when mu is unknown."""
    report = milnor_number(f, max_degree)
    if report.mu is None:
        return None
    return 2 * report.mu - report.order + 2
