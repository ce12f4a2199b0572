from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cremona_kit import errors
from cremona_kit.fields import (
    ExtensionField,
    IRREDUCIBLE,
    Poly,
    PrimeField,
    QQ,
    REDUCIBLE,
    UNVERIFIED,
    factor_over_prime_field,
    field_from_json,
    field_to_json,
    find_irreducible,
    frobenius_orbit,
    irreducible_check,
    is_irreducible,
    minimal_polynomial,
    monic_polys,
    poly_from_json,
    poly_from_string,
    poly_to_json,
    sylvester_resultant,
)

F2 = PrimeField(2)
F3 = PrimeField(3)


def P(field, s):
    return poly_from_string(field, s)


class TestFactor:
    def test_irreducible_quadratic(self):
        assert factor_over_prime_field(P(F2, "x^2+x+1")) == [(P(F2, "x^2+x+1"), 1)]

    def test_square_in_char_2(self):
        # (x+1)^2 = x^2+1 over F_2
        assert factor_over_prime_field(P(F2, "x^2+1")) == [(P(F2, "x+1"), 2)]

    def test_quartic_irreducible(self):
        # no roots and no quadratic factor, by exhaustive trial below
        f = P(F2, "x^4+x+1")
        assert factor_over_prime_field(f) == [(f, 1)]
        for g in monic_polys(F2, 1):
            assert not (f % g).is_zero()
        for g in monic_polys(F2, 2):
            assert not (f % g).is_zero()

    @pytest.mark.parametrize("field", [F2, F3, PrimeField(5)])
    def test_reassembly(self, field):
        import random

        rng = random.Random(11)
        for _ in range(25):
            coeffs = [rng.randrange(field.p) for _ in range(rng.randrange(2, 9))] + [1]
            f = Poly(field, coeffs)
            factors = factor_over_prime_field(f)
            prod = Poly(field, (field.one,))
            for g, m in factors:
                for _ in range(m):
                    prod = prod * g
            assert prod == f.monic()
            assert sum(g.degree * m for g, m in factors) == f.degree
            for g, _ in factors:
                assert g.is_monic() and is_irreducible(g)

    def test_extension_field_factor(self):
        F4 = ExtensionField(F2, (1, 1, 1))
        # x^2 + x + 1 splits into linears over F_4
        f = Poly(F4, (F4.one, F4.one, F4.one))
        factors = factor_over_prime_field(f)
        assert [g.degree for g, _ in factors] == [1, 1]

    def test_errors(self):
        with pytest.raises(errors.ZeroPolynomial):
            factor_over_prime_field(Poly(F2, ()))
        with pytest.raises(errors.UnsupportedField):
            factor_over_prime_field(P(QQ, "x^2-1"))

    def test_deterministic(self):
        f = P(F2, "x^9+x^4+x^2+x")
        assert factor_over_prime_field(f) == factor_over_prime_field(f)


class TestIrreducibleCheck:
    def test_eisenstein(self):
        cert = irreducible_check(P(QQ, "x^17-2"))
        assert cert.verdict == IRREDUCIBLE
        assert cert.method == "Eisenstein" and cert.prime == 2

    def test_rational_root(self):
        cert = irreducible_check(P(QQ, "x^2-1"))
        assert cert.verdict == REDUCIBLE
        assert (P(QQ, "x^2-1") % cert.witness).is_zero()

    def test_f2_degree_17(self):
        # decided by the factorization oracle, not assumed
        f = P(F2, "x^17+x^3+1")
        cert = irreducible_check(f)
        assert (cert.verdict == IRREDUCIBLE) == (
            factor_over_prime_field(f) == [(f, 1)]
        )

    def test_never_contradicts_factorization(self):
        import random

        rng = random.Random(5)
        for _ in range(40):
            coeffs = [rng.randrange(2) for _ in range(rng.randrange(2, 8))] + [1]
            f = Poly(F2, coeffs)
            cert = irreducible_check(f)
            split = factor_over_prime_field(f)
            if cert.verdict == IRREDUCIBLE:
                assert split == [(f.monic(), 1)]
            else:
                assert cert.witness is not None
                assert (f % cert.witness).is_zero()

    @pytest.mark.parametrize(
        "s,verdict",
        [
            ("x^4-5*x^2+6", REDUCIBLE),  # (x^2-2)(x^2-3)
            ("x^4+4", REDUCIBLE),  # (x^2+2x+2)(x^2-2x+2)
            ("x^4+1", IRREDUCIBLE),
            ("x^4-2", IRREDUCIBLE),
            ("x^3-2", IRREDUCIBLE),
            ("x^3-1", REDUCIBLE),
            ("x^2+1", IRREDUCIBLE),
        ],
    )
    def test_low_degree_over_q(self, s, verdict):
        cert = irreducible_check(P(QQ, s))
        assert cert.verdict == verdict
        if verdict == REDUCIBLE:
            assert (P(QQ, s) % cert.witness).is_zero()
            assert 0 < cert.witness.degree < 4

    def test_unverified_exists(self):
        # swinnerton-dyer style polynomial: irreducible but resists the
        # three certified methods in degree > 4
        f = P(QQ, "x^8-40*x^6+352*x^4-960*x^2+576")
        cert = irreducible_check(f)
        assert cert.verdict in (UNVERIFIED, IRREDUCIBLE)

    def test_constant_error(self):
        with pytest.raises(errors.ConstantPolynomial):
            irreducible_check(Poly(QQ, (Fraction(3),)))


class TestFrobeniusOrbit:
    def test_quartic_q2(self):
        f = P(F2, "t^4+t+1")
        orbit = frobenius_orbit(f, 2)
        assert orbit.size == 4
        want = {P(F2, "t"), P(F2, "t^2"), P(F2, "t+1"), P(F2, "t^2+1")}
        assert set(orbit.conjugates) == want

    def test_degree_one(self):
        orbit = frobenius_orbit(P(F2, "t+1"), 2)
        assert orbit.size == 1
        assert orbit.conjugates == [P(F2, "1")]

    def test_quartic_q4(self):
        assert frobenius_orbit(P(F2, "t^4+t+1"), 4).size == 2

    @pytest.mark.parametrize("s", ["t^2+t+1", "t^3+t+1", "t^4+t+1", "t^6+t+1"])
    def test_size_divides_degree(self, s):
        f = P(F2, s)
        assert frobenius_orbit(f, 2).size == f.degree
        for j in (2, 3):
            q = 2 ** j
            assert f.degree % frobenius_orbit(f, q).size == 0

    def test_cyclic_permutation(self):
        f = P(F2, "t^4+t+1")
        orbit = frobenius_orbit(f, 2)
        conj = orbit.conjugates
        for i, c in enumerate(conj):
            assert c.pow_mod(2, f) == conj[(i + 1) % len(conj)]

    def test_errors(self):
        with pytest.raises(errors.NotIrreducible):
            frobenius_orbit(P(F2, "t^2+1"), 2)
        with pytest.raises(errors.BaseMismatch):
            frobenius_orbit(P(F2, "t^2+t+1"), 3)


class TestCanonicalOrder:
    def test_least_irreducible_quartic(self):
        assert find_irreducible(F2, 4) == P(F2, "t^4+t+1")

    def test_least_irreducible_quadratic(self):
        assert find_irreducible(F2, 2) == P(F2, "t^2+t+1")

    def test_every_degree_exists(self):
        for d in range(1, 12):
            f = find_irreducible(F2, d)
            assert f.degree == d and is_irreducible(f)


class TestExtensionField:
    def test_tower(self):
        F16 = ExtensionField(F2, P(F2, "t^4+t+1").coeffs)
        r17 = find_irreducible(F2, 17)
        T = ExtensionField(F16, [F16.embed(c) for c in r17.coeffs])
        s = T.gen()
        x = T.mul(s, s)
        assert T.mul(x, T.inv(x)) == T.one
        # s lies in the copy of F_{2^17}: s^(2^17) = s
        assert T.pow(s, 2 ** 17) == s

    def test_minimal_polynomial(self):
        F16 = ExtensionField(F2, P(F2, "t^4+t+1").coeffs)
        t = F16.gen()
        assert minimal_polynomial(F16, t) == P(F2, "t^4+t+1")
        u = F16.add(F16.mul(t, t), t)  # t^2 + t generates F_4
        assert minimal_polynomial(F16, u) == P(F2, "t^2+t+1")

    def test_log_tables_match_raw(self):
        F16 = ExtensionField(F2, P(F2, "t^4+t+1").coeffs)
        elems = list(F16.elements())
        F16._ensure_tables()
        for a in elems:
            for b in elems:
                assert F16.mul(a, b) == F16._mul_raw(a, b)


class TestResultant:
    def test_linear(self):
        a, b = Fraction(3), Fraction(5)
        f = Poly(QQ, (-a, 1))
        g = Poly(QQ, (-b, 1))
        assert sylvester_resultant(f, g) == a - b

    def test_common_root(self):
        f = P(QQ, "x^2-1")
        g = P(QQ, "x^2-3*x+2")  # shares root 1
        assert sylvester_resultant(f, g) == 0

    def test_product_formula(self):
        f = P(QQ, "x^2-1")
        g = P(QQ, "x^2-4")
        # lc(f)^deg g * g(1) * g(-1) = (-3) * (-3)
        assert sylvester_resultant(f, g) == 9


class TestJson:
    @pytest.mark.parametrize(
        "field",
        [QQ, F2, PrimeField(7), ExtensionField(F2, (1, 1, 1))],
    )
    def test_field_roundtrip(self, field):
        assert field_from_json(field_to_json(field)) == field

    def test_poly_roundtrip(self):
        for field, s in [(QQ, "x^3-1/2*x+7"), (F2, "x^4+x+1")]:
            f = P(field, s)
            assert poly_from_json(poly_to_json(f)) == f

    def test_poly_roundtrip_fq(self):
        F4 = ExtensionField(F2, (1, 1, 1))
        f = Poly(F4, (F4.gen(), F4.one, F4.one))
        assert poly_from_json(poly_to_json(f)) == f


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(min_value=0, max_value=2), min_size=1, max_size=9),
    st.lists(st.integers(min_value=0, max_value=2), min_size=1, max_size=9),
)
def test_gcd_divides_both(a, b):
    f, g = Poly(F3, a), Poly(F3, b)
    if f.is_zero() or g.is_zero():
        return
    d = f.gcd(g)
    assert (f % d).is_zero() and (g % d).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=1), min_size=2, max_size=10))
def test_factor_product_property(coeffs):
    f = Poly(F2, coeffs + [1])
    prod = Poly(F2, (F2.one,))
    for g, m in factor_over_prime_field(f):
        for _ in range(m):
            prod = prod * g
    assert prod == f
