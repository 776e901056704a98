import random

import pytest

from gen import FIELDS, rand_automorphism, rand_m2_jet
from jetsplit import (BinaryField, Jet, PrecisionError, PrimeField,
                      RationalField, SplitShapeError, iterate_arf,
                      iterate_diagonal, parse_jet, split, verify_split)

Q = RationalField()
F2 = PrimeField(2)


def test_worked_example_rational():
    names = ["x", "y"]
    f = parse_jet("x^2 + x*y^2", Q, names, 4)
    r = split(f, 4)
    assert r.rank == 1
    assert r.residual == parse_jet("-1/4*y^4", Q, names, 4)
    assert r.change.components[0] == parse_jet("x - 1/2*y^2", Q, names, 4)
    assert r.change.components[1] == parse_jet("y", Q, names, 4)
    assert verify_split(f, r).is_zero()


def test_worked_example_char2():
    names = ["x1", "x2", "x3"]
    f = parse_jet("x1*x2 + x1*x3^2", F2, names, 4)
    r = split(f, 4)
    assert r.rank == 2
    assert r.residual.is_zero()
    assert r.change.components[1] == parse_jet("x2 + x3^2", F2, names, 4)
    assert verify_split(f, r).is_zero()


def test_already_split_gives_linear_change():
    f = parse_jet("x^2 + y^2", Q, ["x", "y"], 3)
    r = split(f, 3)
    assert r.residual.is_zero()
    for comp in r.change.components:
        assert all(sum(a) == 1 for a in comp.coeffs)


def test_two_step_iteration():
    names = ["x", "y"]
    f = parse_jet("x^2 + x*y^2 + x*y^3", Q, names, 6)
    r = split(f, 6)
    assert r.rank == 1
    assert all(a[0] == 0 for a in r.residual.coeffs)
    assert verify_split(f, r).is_zero()


def test_iterate_diagonal_requires_diagonal_two_jet():
    f = parse_jet("x*y + x^3", Q, ["x", "y"], 3)
    with pytest.raises(SplitShapeError):
        iterate_diagonal(f, 3)


def test_iterate_arf_requires_unit_pairs():
    f = parse_jet("x1^2 + x1*x2 + x3*x2", F2, ["x1", "x2", "x3"], 3)
    with pytest.raises(SplitShapeError):
        iterate_arf(f, 3)
    f4 = BinaryField(2)
    g = parse_jet("t*x1*x2", f4, ["x1", "x2"], 3)
    with pytest.raises(SplitShapeError):
        iterate_arf(g, 3)


def test_char2_residual_keeps_square_tail():
    names = ["x1", "x2", "x3"]
    f = parse_jet("x1*x2 + x3^2 + x2*x3^3", F2, names, 6)
    r = split(f, 6)
    assert r.rank == 2
    two_jet = r.residual.degree_part(2)
    assert two_jet == parse_jet("x3^2", F2, names, 6).degree_part(2)
    rest = r.residual - two_jet
    assert rest.is_zero() or rest.order() >= 3
    assert verify_split(f, r).is_zero()


def test_degenerate_zero_two_jet():
    f = parse_jet("x^3 + y^4", Q, ["x", "y"], 5)
    r = split(f, 5)
    assert r.rank == 0
    assert r.residual == f
    g = parse_jet("x1^2 + x1^3", F2, ["x1", "x2"], 4)
    r2 = split(g, 4)
    assert r2.rank == 0
    assert r2.residual == g


def test_rejects_low_degree_terms_and_bad_precision():
    with pytest.raises(SplitShapeError):
        split(parse_jet("x + x^2", Q, ["x"], 3), 3)
    with pytest.raises(PrecisionError):
        split(parse_jet("x^2", Q, ["x"], 3), 4)
    with pytest.raises(PrecisionError):
        split(parse_jet("x^2", Q, ["x"], 3), 1)


def test_residual_involves_only_tail_variables():
    rng = random.Random(21)
    for field in FIELDS:
        for _ in range(25):
            n = rng.randint(1, 4)
            N = rng.randint(2, 7)
            f = rand_m2_jet(field, n, N, rng)
            r = split(f, N)
            assert all(not any(a[:r.rank]) for a in r.residual.coeffs)
            head_two = r.residual.degree_part(2)
            rest = r.residual - head_two
            if field.char == 2:
                assert rest.is_zero() or rest.order() >= 3
            else:
                assert r.residual.is_zero() or r.residual.order() >= 3


def test_split_soundness_random():
    rng = random.Random(22)
    for field in FIELDS:
        for _ in range(50):
            n = rng.randint(1, 4)
            N = rng.randint(2, 8)
            f = rand_m2_jet(field, n, N, rng, terms=rng.randint(0, 8))
            r = split(f, N)
            assert verify_split(f, r).is_zero()
            assert r.change.is_automorphism()


def test_split_on_further_field_families():
    from jetsplit import PrimeField as P, BinaryField as B

    rng = random.Random(25)
    for field in (P(3), P(5), P(13), B(1), B(3), B(4)):
        for _ in range(15):
            n = rng.randint(1, 3)
            N = rng.randint(2, 6)
            f = rand_m2_jet(field, n, N, rng)
            r = split(f, N)
            assert verify_split(f, r).is_zero()


def test_rank_invariant_under_precomposition():
    rng = random.Random(23)
    for field in FIELDS:
        for _ in range(20):
            n = rng.randint(2, 4)
            N = 4
            f = rand_m2_jet(field, n, N, rng)
            phi = rand_automorphism(field, n, N, rng)
            assert split(phi.apply(f), N).rank == split(f, N).rank


def test_split_idempotent_on_its_own_output():
    rng = random.Random(24)
    for field in FIELDS:
        for _ in range(20):
            n = rng.randint(1, 4)
            N = rng.randint(2, 6)
            f = rand_m2_jet(field, n, N, rng)
            r = split(f, N)
            again = r.head_jet() + r.residual
            r2 = split(again, N)
            assert r2.residual == r.residual
            identity = [Jet.variable(field, n, i, N) for i in range(n)]
            assert list(r2.change.components) == identity


def test_verify_split_detects_tampering():
    names = ["x", "y"]
    f = parse_jet("x^2 + x*y^2", Q, names, 4)
    r = split(f, 4)
    r.residual = r.residual + parse_jet("y^3", Q, names, 4)
    assert not verify_split(f, r).is_zero()


def test_verify_split_detects_identity_change_on_unsplit_input():
    names = ["x", "y"]
    f = parse_jet("x^2 + x*y^2", Q, names, 4)
    r = split(f, 4)
    from jetsplit import CoordinateChange

    r.change = CoordinateChange.identity(Q, 2, 4)
    assert not verify_split(f, r).is_zero()


def test_split_json_shape():
    f = parse_jet("x^2 + x*y^2", Q, ["x", "y"], 4)
    data = split(f, 4).to_json(["x", "y"])
    assert data["rank"] == 1
    assert data["field"] == "q"
    assert data["residual"] == "-1/4*y^4 + O(deg 4)"
    assert data["verified"] is True
    assert len(data["change"]) == 2
