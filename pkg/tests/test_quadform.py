import random
from fractions import Fraction

import pytest

from gen import FIELDS, rand_invertible, rand_m2_jet
from jetsplit import (BinaryField, CharacteristicError, CoordinateChange,
                      PrimeField, QuadNormalForm, QuadraticForm,
                      RationalField, arf_decompose, arf_normal_form,
                      arf_reduce_solvable, diagonal_signs, diagonalize,
                      normal_form, normalize_squares, parse_jet)
from jetsplit import linalg
from jetsplit.quadform import QuadraticShapeError, _square_free_split

Q = RationalField()
F2 = PrimeField(2)
F4 = BinaryField(2)
F7 = PrimeField(7)


def qf(text, field, names, prec=2):
    return QuadraticForm.from_jet(parse_jet(text, field, names, prec))


def test_extract_degree_two_part():
    q = qf("x^2 + y^3", Q, ["x", "y"], 3)
    assert q.gram == {(0, 0): Fraction(1)}
    q2 = qf("x*y + x^3", F2, ["x", "y"], 3)
    assert q2.gram == {(0, 1): 1}
    q3 = qf("y^3", Q, ["x", "y"], 3)
    assert q3.gram == {}


def test_extract_rejects_low_degree_terms():
    with pytest.raises(QuadraticShapeError):
        qf("x + x^2", Q, ["x"], 2)
    with pytest.raises(QuadraticShapeError):
        qf("1 + x^2", Q, ["x"], 2)


def test_square_free_split():
    for fr, s, t in [(Fraction(4), Fraction(1), Fraction(2)),
                     (Fraction(-18), Fraction(-2), Fraction(3)),
                     (Fraction(1, 4), Fraction(1), Fraction(1, 2)),
                     (Fraction(3, 2), Fraction(6), Fraction(1, 2))]:
        got_s, got_t = _square_free_split(fr)
        assert (got_s, got_t) == (s, t)
        assert got_s * got_t ** 2 == fr


def test_diagonalize_hyperbolic_rational():
    q = qf("x1*x2", Q, ["x1", "x2"])
    nf = diagonalize(q)
    assert nf.diagonal == (Fraction(1), Fraction(-1))
    assert nf.rank == 2
    assert nf.change(2).apply(q.as_jet(2)) == nf.normal_jet(2)


def test_diagonalize_already_diagonal():
    q = qf("3*x^2", F7, ["x", "y"])
    nf = diagonalize(q)
    assert nf.diagonal == (3,)
    assert nf.rank == 1


def test_diagonalize_zero_form():
    q = QuadraticForm(Q, 2, {})
    nf = diagonalize(q)
    assert nf.diagonal == ()
    assert nf.rank == 0


def test_diagonalize_rejects_char2():
    with pytest.raises(CharacteristicError):
        diagonalize(qf("x*y", F2, ["x", "y"]))


def test_diagonalize_reduces_square_factors():
    q = qf("4*x^2 + 18*y^2", Q, ["x", "y"])
    nf = diagonalize(q)
    assert nf.diagonal == (Fraction(1), Fraction(2))


def test_normalize_squares_rational():
    nf = QuadNormalForm("diagonal", Q, 2, linalg.identity(Q, 2),
                        diagonal=(Fraction(4), Fraction(9)))
    unit = normalize_squares(nf)
    assert unit is not None
    assert unit.diagonal == (Fraction(1), Fraction(1))
    q = qf("4*x^2 + 9*y^2", Q, ["x", "y"])
    assert unit.change(2).apply(q.as_jet(2)) == unit.normal_jet(2)


def test_normalize_squares_absent_reports_signs():
    nf = diagonalize(qf("2*x^2", Q, ["x", "y"]))
    assert normalize_squares(nf) is None
    assert diagonal_signs(nf) == ("+",)
    neg = diagonalize(qf("-3*x^2 + 2*y^2", Q, ["x", "y"]))
    assert diagonal_signs(neg) == ("-", "+")


def test_normalize_squares_gf7_quadratic_residues():
    # squares mod 7 are {1, 2, 4}: 2 normalizes, 3 does not
    good = QuadNormalForm("diagonal", F7, 1, linalg.identity(F7, 1), diagonal=(2,))
    unit = normalize_squares(good)
    assert unit is not None and unit.diagonal == (1,)
    q = qf("2*x^2", F7, ["x"])
    assert unit.change(2).apply(q.as_jet(2)) == unit.normal_jet(2)
    bad = QuadNormalForm("diagonal", F7, 1, linalg.identity(F7, 1), diagonal=(3,))
    assert normalize_squares(bad) is None


def test_arf_decompose_pair_and_radical():
    q = qf("x1*x2 + x3^2", F2, ["x1", "x2", "x3"])
    dec = arf_decompose(q)
    assert len(dec.symplectic_pairs) == 1
    assert len(dec.radical_basis) == 1
    assert dec.radical_basis[0] == [0, 0, 1]
    u, w = dec.symplectic_pairs[0]
    assert q.bilinear(u, w) == 1


def test_arf_decompose_pure_square():
    q = qf("x1^2", F2, ["x1"])
    dec = arf_decompose(q)
    assert dec.symplectic_pairs == []
    assert dec.radical_basis == [[1]]


def test_arf_decompose_zero_form():
    q = QuadraticForm(F2, 2, {})
    dec = arf_decompose(q)
    assert len(dec.radical_basis) == 2


def test_arf_normal_form_examples():
    nf = arf_normal_form(qf("x1^2 + x1*x2 + x2^2 + x3^2", F2, ["x1", "x2", "x3"]))
    assert nf.pairs == ((1, 1),)
    assert nf.tail == (1,)
    assert nf.half_rank == 1

    nf2 = arf_normal_form(qf("x1*x2", F2, ["x1", "x2"]))
    assert nf2.pairs == ((0, 0),)
    assert nf2.tail == ()

    nf3 = arf_normal_form(qf("x1^2 + x2^2", F2, ["x1", "x2"]))
    assert nf3.half_rank == 0
    assert nf3.tail == (1, 1)


def test_arf_normal_form_rank_matches_hessian():
    rng = random.Random(12)
    for field in (F2, F4):
        for _ in range(50):
            n = rng.randint(1, 4)
            f = rand_m2_jet(field, n, 2, rng)
            q = QuadraticForm.from_jet(f)
            nf = arf_normal_form(q)
            assert 2 * nf.half_rank == f.hessian_rank()


def test_arf_reduce_solvable_examples():
    unsolvable = QuadNormalForm("arf", F2, 2, linalg.identity(F2, 2), pairs=((1, 1),))
    assert arf_reduce_solvable(unsolvable) is None

    over_gf4 = QuadNormalForm("arf", F4, 2, linalg.identity(F4, 2), pairs=((1, 1),))
    red = arf_reduce_solvable(over_gf4)
    assert red is not None
    assert red.variant == "char2_solvable_b"
    assert red.half_rank == 1

    squares = QuadNormalForm("arf", F2, 4, linalg.identity(F2, 4),
                             pairs=((0, 0),), tail=(1, 1))
    red2 = arf_reduce_solvable(squares)
    assert red2 is not None
    assert red2.variant == "char2_solvable_a"
    q = qf("x1*x2 + x3^2 + x4^2", F2, ["x1", "x2", "x3", "x4"])
    assert red2.change(2).apply(q.as_jet(2)) == red2.normal_jet(2)
    assert red2.normal_jet(2) == parse_jet("x1*x2 + x3^2", F2,
                                           ["x1", "x2", "x3", "x4"], 2)


def test_arf_reduce_full_pipeline_over_gf4():
    q = qf("x1^2 + x1*x2 + x2^2", F4, ["x1", "x2"])
    red = arf_reduce_solvable(arf_normal_form(q))
    assert red is not None
    assert red.variant == "char2_solvable_b"
    assert red.change(2).apply(q.as_jet(2)) == parse_jet("x1*x2", F4, ["x1", "x2"], 2)


def test_normal_form_dispatch():
    assert normal_form(qf("x*y", Q, ["x", "y"])).variant == "diagonal"
    assert normal_form(qf("x*y", F2, ["x", "y"])).variant == "arf"


def test_random_normal_forms_verify_and_rank_is_invariant():
    rng = random.Random(13)
    for field in FIELDS:
        for _ in range(25):
            n = rng.randint(1, 4)
            f = rand_m2_jet(field, n, 2, rng)
            q = QuadraticForm.from_jet(f)
            nf = normal_form(q)
            assert nf.change(2).apply(q.as_jet(2)) == nf.normal_jet(2)
            assert linalg.rank(field, nf.matrix) == n
            # rank is invariant under a random linear change of the form
            m = rand_invertible(field, n, rng)
            change = CoordinateChange.from_linear(field, m, 2)
            q2 = QuadraticForm.from_jet(change.apply(q.as_jet(2)))
            assert normal_form(q2).rank == nf.rank


def test_json_roundtrip():
    for q, field in [(qf("x1*x2 + x3^2", F2, ["x1", "x2", "x3"]), F2),
                     (qf("x1*x2", Q, ["x1", "x2"]), Q)]:
        nf = normal_form(q)
        data = nf.to_json()
        back = QuadNormalForm.from_json(field, data)
        assert back.variant == nf.variant
        assert back.matrix == nf.matrix
        assert back.diagonal == nf.diagonal
        assert back.pairs == nf.pairs
        assert back.tail == nf.tail
