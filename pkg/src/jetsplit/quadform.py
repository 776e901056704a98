"""Classification of quadratic forms.

Away from characteristic 2 a form is congruence-diagonalized; in
characteristic 2 it is brought to Arf normal form (hyperbolic-style pairs
``a x_i^2 + x_i x_{i+1} + b x_{i+1}^2`` plus a diagonal square tail), with a
further reduction to the solvable-field normal forms when the needed square
roots and affine quadratics have solutions.  Every producer verifies its
transition by exact substitution before returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .field import CharacteristicError, Field, RationalField
from .jet import CoordinateChange, Jet


class QuadraticShapeError(ValueError):
    pass


def _square_free_split(fr: Fraction):
    """Write fr = s * t^2 with s a squarefree integer (t > 0 rational)."""
    if fr == 0:
        return Fraction(0), Fraction(1)
    m = fr.numerator * fr.denominator
    sign = -1 if m < 0 else 1
    mm = abs(m)
    u, s0 = 1, 1
    d = 2
    while d * d <= mm:
        if mm % d == 0:
            e = 0
            while mm % d == 0:
                mm //= d
                e += 1
            u *= d ** (e // 2)
            if e % 2:
                s0 *= d
        d += 1
    s0 *= mm
    return Fraction(sign * s0), Fraction(u, fr.denominator)


class QuadraticForm:
    """q(x) = sum_{i<=j} a_ij x_i x_j with an upper-triangular coefficient map."""

    def __init__(self, field: Field, nvars: int, gram: dict):
        clean = {}
        for (i, j), c in gram.items():
            if not (0 <= i <= j < nvars):
                raise ValueError(f"bad coefficient position {(i, j)}")
            if c != field.zero:
                clean[(i, j)] = c
        self.field = field
        self.nvars = nvars
        self.gram = clean

    @classmethod
    def from_jet(cls, f: Jet) -> "QuadraticForm":
        """Extract the 2-jet of a series in m^2 (no constant or linear terms)."""
        if f.prec < 2:
            raise QuadraticShapeError("need precision >= 2 to extract a quadratic form")
        gram = {}
        for alpha, c in f.coeffs.items():
            d = sum(alpha)
            if d < 2:
                raise QuadraticShapeError("series has terms of degree < 2")
            if d != 2:
                continue
            support = [i for i, e in enumerate(alpha) if e]
            if len(support) == 1:
                gram[(support[0], support[0])] = c
            else:
                gram[(support[0], support[1])] = c
        return cls(f.field, f.nvars, gram)

    def as_jet(self, prec: int = 2) -> Jet:
        coeffs = {}
        n = self.nvars
        for (i, j), c in self.gram.items():
            alpha = [0] * n
            alpha[i] += 1
            alpha[j] += 1
            coeffs[tuple(alpha)] = c
        return Jet(self.field, n, prec, coeffs)

    def evaluate(self, v):
        """q(v) for a coordinate vector v."""
        field = self.field
        s = field.zero
        for (i, j), c in self.gram.items():
            s = field.add(s, field.mul(c, field.mul(v[i], v[j])))
        return s

    def symmetric_matrix(self):
        """(A + A^T)/2 as a full matrix; characteristic != 2 only."""
        field = self.field
        if field.char == 2:
            raise CharacteristicError("no symmetric matrix in characteristic 2")
        half = field.inv(field.from_int(2))
        n = self.nvars
        b = [[field.zero] * n for _ in range(n)]
        for (i, j), c in self.gram.items():
            if i == j:
                b[i][i] = c
            else:
                b[i][j] = b[j][i] = field.mul(half, c)
        return b

    def bilinear_gram(self):
        """The polarization b(e_i, e_j) = a_ij as an alternating matrix (char 2)."""
        field = self.field
        n = self.nvars
        b = [[field.zero] * n for _ in range(n)]
        for (i, j), c in self.gram.items():
            if i != j:
                b[i][j] = b[j][i] = c
        return b

    def bilinear(self, v, w):
        field = self.field
        s = field.zero
        for (i, j), c in self.gram.items():
            if i == j:
                continue
            s = field.add(s, field.mul(c, field.add(field.mul(v[i], w[j]),
                                                    field.mul(v[j], w[i]))))
        return s

    def __eq__(self, other):
        return (isinstance(other, QuadraticForm) and self.field == other.field
                and self.nvars == other.nvars and self.gram == other.gram)

    def __repr__(self):
        from .expr import serialize_jet
        return f"QuadraticForm({serialize_jet(self.as_jet(), with_precision=False)!r})"


@dataclass
class ArfDecomposition:
    """Radical plus symplectic pairing basis of the polarization (char 2).

    Pair vectors are rescaled so that b(u, w) = 1 inside every pair.
    """

    bilinear_gram: list
    symplectic_pairs: list
    radical_basis: list


@dataclass
class QuadNormalForm:
    """A classified 2-jet together with the linear transition onto it.

    ``matrix`` is the substitution matrix S: applying the change
    phi_i = sum_j S[i][j] x_j to the original form reproduces ``normal_jet``.
    """

    variant: str  # diagonal | unit_diagonal | arf | char2_solvable_a | char2_solvable_b
    field: Field
    nvars: int
    matrix: list
    diagonal: tuple = ()
    pairs: tuple = ()
    tail: tuple = ()

    @property
    def half_rank(self) -> int:
        return len(self.pairs)

    @property
    def rank(self) -> int:
        if self.variant in ("diagonal", "unit_diagonal"):
            return len(self.diagonal)
        return 2 * len(self.pairs)

    @property
    def has_square(self) -> bool:
        return self.variant == "char2_solvable_a"

    def change(self, prec: int = 2) -> CoordinateChange:
        return CoordinateChange.from_linear(self.field, self.matrix, prec)

    def normal_jet(self, prec: int = 2) -> Jet:
        field = self.field
        n = self.nvars
        coeffs = {}

        def put(i, j, c):
            if c == field.zero:
                return
            alpha = [0] * n
            alpha[i] += 1
            alpha[j] += 1
            coeffs[tuple(alpha)] = c

        if self.variant in ("diagonal", "unit_diagonal"):
            for i, a in enumerate(self.diagonal):
                put(i, i, a)
        elif self.variant == "arf":
            for t, (a, b) in enumerate(self.pairs):
                put(2 * t, 2 * t, a)
                put(2 * t, 2 * t + 1, field.one)
                put(2 * t + 1, 2 * t + 1, b)
            for j, d in enumerate(self.tail):
                put(self.rank + j, self.rank + j, d)
        else:
            for t in range(self.half_rank):
                put(2 * t, 2 * t + 1, field.one)
            if self.variant == "char2_solvable_a":
                put(self.rank, self.rank, field.one)
        return Jet(field, n, prec, coeffs)

    def head_jet(self, prec: int = 2) -> Jet:
        """Only the nondegenerate head: the diagonal, or the Arf pairs."""
        if self.variant == "arf":
            trimmed = QuadNormalForm(self.variant, self.field, self.nvars,
                                     self.matrix, pairs=self.pairs, tail=())
            return trimmed.normal_jet(prec)
        return self.normal_jet(prec)

    def to_json(self) -> dict:
        fmt = self.field.format_scalar
        out = {
            "variant": self.variant,
            "rank": self.rank,
            "nvars": self.nvars,
        }
        if self.variant in ("diagonal", "unit_diagonal"):
            out["diagonal"] = [fmt(a) for a in self.diagonal]
        elif self.variant == "arf":
            out["pairs"] = [[fmt(a), fmt(b)] for a, b in self.pairs]
            out["tail"] = [fmt(d) for d in self.tail]
        else:
            out["half_rank"] = self.half_rank
            out["has_square"] = self.has_square
        out["transition_matrix"] = [[fmt(c) for c in row] for row in self.matrix]
        return out

    @classmethod
    def from_json(cls, field: Field, data: dict) -> "QuadNormalForm":
        parse = field.parse_scalar
        variant = data["variant"]
        nvars = data["nvars"]
        matrix = [[parse(c) for c in row] for row in data["transition_matrix"]]
        if variant in ("diagonal", "unit_diagonal"):
            return cls(variant, field, nvars, matrix,
                       diagonal=tuple(parse(a) for a in data["diagonal"]))
        if variant == "arf":
            return cls(variant, field, nvars, matrix,
                       pairs=tuple((parse(a), parse(b)) for a, b in data["pairs"]),
                       tail=tuple(parse(d) for d in data["tail"]))
        half = data["half_rank"]
        return cls(variant, field, nvars, matrix,
                   pairs=tuple((field.zero, field.zero) for _ in range(half)))


def _verify_transition(q: QuadraticForm, nf: QuadNormalForm):
    got = nf.change(2).apply(q.as_jet(2))
    want = nf.normal_jet(2)
    if got != want:
        raise AssertionError("normal form transition failed to verify")
    if linalg.rank(q.field, nf.matrix) != q.nvars:
        raise AssertionError("normal form transition is singular")


def diagonalize(q: QuadraticForm) -> QuadNormalForm:
    """Congruence-diagonalize q over a field of characteristic != 2.

    Pivots prefer the smallest index with a nonzero diagonal entry; if the
    remaining block has a zero diagonal but a nonzero mixed entry a_ij, the
    substitution x_j -> x_j + x_i creates one.  Over the rationals each
    diagonal entry is reduced to its squarefree part.
    """
    field = q.field
    if field.char == 2:
        raise CharacteristicError("diagonalization requires characteristic != 2")
    n = q.nvars
    b = q.symmetric_matrix()
    s = linalg.identity(field, n)

    def step(m):
        nonlocal b, s
        s = linalg.matmul(field, s, m)
        mt = [[m[j][i] for j in range(n)] for i in range(n)]
        b = linalg.matmul(field, mt, linalg.matmul(field, b, m))

    p = 0
    while p < n:
        piv = next((j for j in range(p, n) if b[j][j] != field.zero), None)
        if piv is None:
            pair = None
            for i in range(p, n):
                for j in range(i + 1, n):
                    if b[i][j] != field.zero:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                break
            i, j = pair
            m = linalg.identity(field, n)
            m[j][i] = field.one  # x_j -> x_j + x_i, makes b[i][i] = 2 a_ij != 0
            step(m)
            continue
        if piv != p:
            m = linalg.identity(field, n)
            m[p][p] = m[piv][piv] = field.zero
            m[p][piv] = m[piv][p] = field.one
            step(m)
        for j in range(p + 1, n):
            if b[p][j] != field.zero:
                lam = field.div(b[p][j], b[p][p])
                m = linalg.identity(field, n)
                m[p][j] = field.neg(lam)  # x_p -> x_p - lam x_j
                step(m)
        p += 1
    k = p
    if isinstance(field, RationalField):
        for i in range(k):
            _, t = _square_free_split(b[i][i])
            if t != 1:
                m = linalg.identity(field, n)
                m[i][i] = field.inv(t)  # x_i -> x_i / t strips the square factor
                step(m)
    nf = QuadNormalForm("diagonal", field, n, s,
                        diagonal=tuple(b[i][i] for i in range(k)))
    _verify_transition(q, nf)
    return nf


def diagonal_signs(nf: QuadNormalForm):
    """Sign pattern of the diagonal entries (rationals only)."""
    if not isinstance(nf.field, RationalField):
        raise ValueError("sign pattern is only defined over the rationals")
    return tuple("+" if a > 0 else "-" for a in nf.diagonal)


def normalize_squares(nf: QuadNormalForm):
    """Rescale a diagonal form to unit diagonal when every entry is a square.

    Returns None when some entry has no square root in the field.
    """
    if nf.variant != "diagonal":
        raise ValueError("normalize_squares expects a diagonal normal form")
    field = nf.field
    roots = [field.sqrt(a) for a in nf.diagonal]
    if any(r is None for r in roots):
        return None
    n = nf.nvars
    m = linalg.identity(field, n)
    for i, r in enumerate(roots):
        m[i][i] = field.inv(r)
    return QuadNormalForm("unit_diagonal", field, n,
                          linalg.matmul(field, nf.matrix, m),
                          diagonal=tuple(field.one for _ in roots))


def arf_decompose(q: QuadraticForm) -> ArfDecomposition:
    """Split K^n into symplectic pairs plus the radical of the polarization."""
    field = q.field
    if field.char != 2:
        raise CharacteristicError("Arf decomposition requires characteristic 2")
    n = q.nvars
    gram = q.bilinear_gram()
    remaining = [[field.one if j == i else field.zero for j in range(n)] for i in range(n)]
    pairs = []
    while True:
        found = None
        for i, v in enumerate(remaining):
            partner = next(
                (j for j, w in enumerate(remaining) if j != i and q.bilinear(v, w) != field.zero),
                None,
            )
            if partner is not None:
                found = (i, partner)
                break
        if found is None:
            break
        i, j = found
        v, w = remaining[i], remaining[j]
        c = q.bilinear(v, w)
        cinv = field.inv(c)
        rest = [z for t, z in enumerate(remaining) if t not in (i, j)]
        fixed = []
        for z in rest:
            bv = field.mul(q.bilinear(z, w), cinv)
            bw = field.mul(q.bilinear(z, v), cinv)
            fixed.append([field.add(zc, field.add(field.mul(bv, vc), field.mul(bw, wc)))
                          for zc, vc, wc in zip(z, v, w)])
        pairs.append(([field.mul(cinv, vc) for vc in v], w))
        remaining = fixed
    pair_vectors = [u for p in pairs for u in p]
    for z in remaining:
        for w in pair_vectors:
            assert q.bilinear(z, w) == field.zero
        for z2 in remaining:
            assert q.bilinear(z, z2) == field.zero
    return ArfDecomposition(gram, pairs, remaining)


def arf_normal_form(q: QuadraticForm) -> QuadNormalForm:
    """Arf normal form: pair blocks with middle coefficient 1 plus a square tail."""
    dec = arf_decompose(q)
    field = q.field
    n = q.nvars
    basis = []
    pair_coeffs = []
    for u, w in dec.symplectic_pairs:
        basis.append(u)
        basis.append(w)
        pair_coeffs.append((q.evaluate(u), q.evaluate(w)))
    tail = tuple(q.evaluate(r) for r in dec.radical_basis)
    basis.extend(dec.radical_basis)
    s = [[basis[j][i] for j in range(n)] for i in range(n)]  # columns are basis vectors
    nf = QuadNormalForm("arf", field, n, s, pairs=tuple(pair_coeffs), tail=tail)
    _verify_transition(q, nf)
    return nf


def arf_reduce_solvable(nf: QuadNormalForm):
    """Reduce an Arf normal form to x1x2 + ... (+ x_{2l+1}^2) if the field allows.

    Per pair this solves a_i u^2 + u + a_{i+1} = 0; the square tail is
    rescaled by square roots and collapsed to a single square.  Returns None
    when some required root does not exist.
    """
    if nf.variant != "arf":
        raise ValueError("arf_reduce_solvable expects an Arf normal form")
    field = nf.field
    n = nf.nvars
    l = nf.half_rank
    extra = linalg.identity(field, n)

    def step(m):
        nonlocal extra
        extra = linalg.matmul(field, extra, m)

    for t, (a, c) in enumerate(nf.pairs):
        u = field.solve_affine_quadratic(a, c)
        if u is None:
            return None
        e = 2 * t
        if u != field.zero:
            m = linalg.identity(field, n)
            m[e][e + 1] = u  # x_i -> x_i + u x_{i+1}
            step(m)
        if a != field.zero:
            m = linalg.identity(field, n)
            m[e + 1][e] = a  # x_{i+1} -> x_{i+1} + a_i x_i
            step(m)
    nonzero = [i for i, d in enumerate(nf.tail) if d != field.zero]
    order = nonzero + [i for i, d in enumerate(nf.tail) if d == field.zero]
    if order != list(range(len(nf.tail))):
        # renumber so the nonzero squares sit right after the pairs
        m = linalg.identity(field, n)
        for idx in range(len(nf.tail)):
            m[2 * l + idx][2 * l + idx] = field.zero
        for new_pos, old_pos in enumerate(order):
            m[2 * l + old_pos][2 * l + new_pos] = field.one
        step(m)
    for pos, old in enumerate(nonzero):
        r = field.sqrt(nf.tail[old])
        if r is None:
            return None
        if r != field.one:
            m = linalg.identity(field, n)
            m[2 * l + pos][2 * l + pos] = field.inv(r)
            step(m)
    k_sq = len(nonzero)
    if k_sq >= 2:
        m = linalg.identity(field, n)
        for j in range(1, k_sq):
            m[2 * l][2 * l + j] = field.one  # collapse x^2 + ... + x^2 onto one square
        step(m)
    variant = "char2_solvable_a" if k_sq >= 1 else "char2_solvable_b"
    out = QuadNormalForm(variant, field, n,
                         linalg.matmul(field, nf.matrix, extra),
                         pairs=tuple((field.zero, field.zero) for _ in range(l)))
    extra_change = CoordinateChange.from_linear(field, extra, 2)
    if extra_change.apply(nf.normal_jet(2)) != out.normal_jet(2):
        raise AssertionError("solvable reduction failed to verify")
    return out


def normal_form(q: QuadraticForm) -> QuadNormalForm:
    """Characteristic dispatch: diagonalize, or Arf normal form."""
    if q.field.char == 2:
        return arf_normal_form(q)
    return diagonalize(q)
