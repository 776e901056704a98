import random
from fractions import Fraction

import pytest

from jetsplit import (ArchimedeanValuation, BinaryField, CharacteristicError,
                      FieldError, PAdicValuation, PrimeField, RationalField,
                      TrivialValuation, parse_field_spec, parse_valuation_spec)
from jetsplit.field import (default_modulus, format_t_poly,
                            gf2_poly_irreducible, parse_t_poly)

FIELDS = [RationalField(), PrimeField(7), PrimeField(2), BinaryField(2), BinaryField(4)]


def test_gf7_product():
    f = PrimeField(7)
    assert f.mul(3, 5) == 1


def test_rational_sum():
    q = RationalField()
    assert q.add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)


def test_gf4_generator_square():
    # modulus t^2+t+1: t*t reduces to t+1
    f = BinaryField(2)
    omega = 0b10
    assert f.mul(omega, omega) == 0b11


def test_field_axioms_random():
    rng = random.Random(1)
    for field in FIELDS:
        for _ in range(1000):
            a = field.random_element(rng)
            b = field.random_element(rng)
            c = field.random_element(rng)
            assert field.add(a, b) == field.add(b, a)
            assert field.mul(a, b) == field.mul(b, a)
            assert field.add(field.add(a, b), c) == field.add(a, field.add(b, c))
            assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
            assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))
            assert field.add(a, field.neg(a)) == field.zero
            if a != field.zero:
                assert field.mul(a, field.inv(a)) == field.one
            assert field.sub(a, b) == field.add(a, field.neg(b))


def test_sqrt_gf7_tie_break():
    f = PrimeField(7)
    r = f.sqrt(2)
    assert r == 3  # both 3 and 4 square to 2; the smaller residue wins
    assert f.mul(r, r) == 2


def test_sqrt_gf4():
    f = BinaryField(2)
    omega = 0b10
    r = f.sqrt(omega)
    assert r == 0b11
    assert f.mul(r, r) == omega


def test_sqrt_rationals():
    q = RationalField()
    assert q.sqrt(Fraction(2)) is None
    assert q.sqrt(Fraction(4, 9)) == Fraction(2, 3)
    assert q.sqrt(Fraction(-4)) is None
    assert q.sqrt(Fraction(0)) == 0


def test_sqrt_prime_fields_match_bruteforce():
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29):
        f = PrimeField(p)
        for a in f.elements():
            roots = [r for r in range(p) if r * r % p == a]
            expected = min(roots) if roots else None
            assert f.sqrt(a) == expected


def test_sqrt_binary_exhaustive():
    for k in range(1, 9):
        f = BinaryField(k)
        for a in f.elements():
            s = f.sqrt(a)
            assert f.mul(s, s) == a
        # Frobenius is injective, so roots are unique
        squares = {f.mul(a, a) for a in f.elements()}
        assert len(squares) == f.order


def test_solve_affine_quadratic_examples():
    assert PrimeField(2).solve_affine_quadratic(1, 1) is None
    f4 = BinaryField(2)
    assert f4.solve_affine_quadratic(1, 1) == 0b10
    for field in (PrimeField(2), BinaryField(2), BinaryField(3)):
        assert field.solve_affine_quadratic(field.one, field.zero) == field.zero


def test_solve_affine_quadratic_wrong_characteristic():
    with pytest.raises(CharacteristicError):
        PrimeField(7).solve_affine_quadratic(1, 1)
    with pytest.raises(CharacteristicError):
        RationalField().solve_affine_quadratic(Fraction(1), Fraction(1))


def test_solve_affine_quadratic_small_fields_bruteforce():
    for k in range(1, 5):
        f = BinaryField(k)
        for a in f.elements():
            for c in f.elements():
                roots = [u for u in f.elements()
                         if f.add(f.add(f.mul(a, f.mul(u, u)), u), c) == f.zero]
                expected = min(roots) if roots else None
                assert f.solve_affine_quadratic(a, c) == expected, (k, a, c)


def test_solve_affine_quadratic_exhaustive_upto_gf256():
    # root-table oracle: roots of a u^2 + u + c = 0 are u = v/a with v^2 + v = a c
    for k in range(5, 9):
        f = BinaryField(k)
        table = {}
        for v in f.elements():
            key = f.add(f.mul(v, v), v)
            table[key] = min(table.get(key, v), v)
        for a in f.elements():
            for c in f.elements():
                got = f.solve_affine_quadratic(a, c)
                if a == f.zero:
                    assert got == c
                    continue
                d = f.mul(a, c)
                if d not in table:
                    assert got is None
                    continue
                v = table[d]
                ai = f.inv(a)
                expected = min(f.mul(v, ai), f.add(f.mul(v, ai), ai))
                assert got == expected, (k, a, c)
                assert f.add(f.add(f.mul(a, f.mul(got, got)), got), c) == f.zero


def test_padic_valuation_example():
    v = PAdicValuation(2)
    q = RationalField()
    assert v.value(q, Fraction(12)) == Fraction(1, 4)
    assert v.value(q, Fraction(0)) == 0
    assert v.value(q, Fraction(3, 8)) == Fraction(8)


def test_trivial_valuation_any_field():
    v = TrivialValuation()
    assert v.value(PrimeField(7), 5) == 1
    assert v.value(PrimeField(7), 0) == 0
    assert v.value(BinaryField(2), 0b10) == 1


def test_archimedean_valuation():
    v = ArchimedeanValuation()
    q = RationalField()
    assert v.value(q, Fraction(-3, 2)) == 1.5
    with pytest.raises(FieldError):
        v.value(PrimeField(7), 3)


def test_valuation_axioms_random():
    rng = random.Random(2)
    q = RationalField()
    exact = [PAdicValuation(2), PAdicValuation(5), TrivialValuation()]
    for v in exact:
        for _ in range(300):
            a = q.random_element(rng)
            b = q.random_element(rng)
            assert (v.value(q, a) == 0) == (a == 0)
            assert v.value(q, q.mul(a, b)) == v.value(q, a) * v.value(q, b)
            assert v.value(q, q.add(a, b)) <= v.value(q, a) + v.value(q, b)
    arch = ArchimedeanValuation()
    for _ in range(300):
        a = q.random_element(rng)
        b = q.random_element(rng)
        assert arch.exact_value(q, a * b) == arch.exact_value(q, a) * arch.exact_value(q, b)
        assert arch.exact_value(q, a + b) <= arch.exact_value(q, a) + arch.exact_value(q, b)


def test_builtin_moduli_are_irreducible():
    for k in range(1, 17):
        m = default_modulus(k)
        assert m.bit_length() - 1 == k
        assert gf2_poly_irreducible(m)


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        BinaryField(2, parse_t_poly("t^2+1"))  # (t+1)^2


def test_t_poly_roundtrip():
    for mask in range(1, 64):
        assert parse_t_poly(format_t_poly(mask)) == mask
    assert parse_t_poly("t4+t+1") == 0b10011


def test_parse_field_spec():
    assert parse_field_spec("q").spec() == "q"
    assert parse_field_spec("fp:7").spec() == "fp:7"
    assert parse_field_spec("f2k:4").spec() == "f2k:4"
    custom = parse_field_spec("f2k:4:modulus=t4+t3+1")
    assert custom.spec() == "f2k:4:modulus=t^4+t^3+1"
    assert parse_field_spec("f2k:4") == BinaryField(4)
    for bad in ("z", "fp:6", "fp:x", "f2k:4:mod=t4", "q:1"):
        with pytest.raises(FieldError):
            parse_field_spec(bad)


def test_parse_valuation_spec():
    assert parse_valuation_spec("trivial").kind == "trivial"
    assert parse_valuation_spec("abs").kind == "archimedean"
    assert parse_valuation_spec("padic:3").kind == "p-adic(3)"
    with pytest.raises(FieldError):
        parse_valuation_spec("padic:4")


def test_prime_field_requires_prime():
    with pytest.raises(FieldError):
        PrimeField(6)


def test_division_by_zero():
    for field in FIELDS:
        with pytest.raises(ZeroDivisionError):
            field.inv(field.zero)
        with pytest.raises(ZeroDivisionError):
            field.div(field.one, field.zero)


def test_scalar_text_roundtrip():
    rng = random.Random(3)
    for field in FIELDS:
        for _ in range(50):
            a = field.random_element(rng)
            assert field.parse_scalar(field.format_scalar(a)) == a
