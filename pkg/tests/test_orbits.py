import itertools
import random

import pytest

from cremona_kit import errors
from cremona_kit.fields import (
    ExtensionField,
    Poly,
    PrimeField,
    QQ,
    find_irreducible,
    poly_from_string,
)
from cremona_kit.orbits import (
    ALL,
    CONIC,
    EXPLICIT,
    GENERAL_POSITION_ONLY,
    GP_NO,
    GP_UNKNOWN,
    GP_YES,
    LINE,
    SPLIT,
    apply_matrix,
    closed_point_count,
    enumerate_point_orbits,
    explicit_orbit,
    frobenius_fingerprint,
    general_position_check,
    general_position_points,
    large_orbit,
    lift_matrix,
    match_transform,
    materialize_points,
    orbit_from_json,
    orbit_from_poly,
    orbit_to_json,
    perm_cycles,
    pgl3_classify,
    pgl3_matrices,
    point_sort_key,
    transitive_sym4_audit,
)

F2 = PrimeField(2)
F3 = PrimeField(3)


def P(field, s):
    return poly_from_string(field, s)


import functools


@functools.lru_cache(maxsize=None)
def census(q, n):
    return enumerate_point_orbits(PrimeField(q), n)


@functools.lru_cache(maxsize=None)
def classify(q, n, filt=ALL):
    return pgl3_classify(census(q, n), PrimeField(q), filter=filt)


class TestOrbitFromPoly:
    def test_conic_f2(self):
        o = orbit_from_poly(F2, P(F2, "t^4+t+1"), CONIC)
        assert o.size == 4 and o.general_position == GP_YES
        # oracle: collinearity determinants of all triples over F_16
        K, pts = materialize_points(o)
        assert general_position_points(K, pts) is True

    def test_line_over_q(self):
        o = orbit_from_poly(QQ, P(QQ, "x^17-2"), LINE)
        assert o.size == 17
        assert o.template == LINE

    def test_split_f2(self):
        f = P(F2, "x^2+x+1")
        o = orbit_from_poly(F2, f, SPLIT, second_poly=f)
        assert o.size == 4 and o.general_position == GP_YES
        K, pts = materialize_points(o)
        assert len(pts) == 4
        assert general_position_points(K, pts) is True

    def test_not_irreducible(self):
        with pytest.raises(errors.NotIrreducible):
            orbit_from_poly(F2, P(F2, "t^2+1"), CONIC)

    def test_split_needs_two_quadratics(self):
        with pytest.raises(errors.DegreeMismatch):
            orbit_from_poly(F2, P(F2, "t^2+t+1"), SPLIT)
        with pytest.raises(errors.DegreeMismatch):
            orbit_from_poly(
                F2, P(F2, "t^2+t+1"), SPLIT, second_poly=P(F2, "t^3+t+1")
            )

    def test_conic_over_q_general_position(self):
        o = orbit_from_poly(QQ, P(QQ, "x^4-2"), CONIC)
        assert o.general_position == GP_YES

    def test_split_over_q_unknown_at_construction(self):
        o = orbit_from_poly(QQ, P(QQ, "x^2-2"), SPLIT, second_poly=P(QQ, "x^2-3"))
        assert o.general_position == GP_UNKNOWN


class TestGeneralPosition:
    def test_conic_yes(self):
        o = orbit_from_poly(F2, P(F2, "t^4+t+1"), CONIC)
        verdict, witness = general_position_check([o])
        assert verdict == GP_YES and witness is None

    def test_collinear_triple_witnessed(self):
        one, zero = F2.one, F2.zero
        o = explicit_orbit(
            F2, F2, [(one, zero, zero), (zero, one, zero), (one, one, zero)]
        )
        verdict, witness = general_position_check([o])
        assert verdict == GP_NO and len(witness) == 3

    def test_split_f2_yes(self):
        f = P(F2, "x^2+x+1")
        o = orbit_from_poly(F2, f, SPLIT, second_poly=f)
        verdict, _ = general_position_check([o])
        assert verdict == GP_YES

    def test_split_over_q_symbolic(self):
        o = orbit_from_poly(QQ, P(QQ, "x^2-2"), SPLIT, second_poly=P(QQ, "x^2-2"))
        verdict, _ = general_position_check([o])
        assert verdict == GP_YES

    def test_explicit_over_q_rejected(self):
        o = explicit_orbit(QQ, QQ, [(QQ.one, QQ.zero, QQ.zero)], check_gp=False)
        oo = explicit_orbit(QQ, QQ, [(QQ.zero, QQ.one, QQ.zero)], check_gp=False)
        o3 = explicit_orbit(QQ, QQ, [(QQ.zero, QQ.zero, QQ.one)], check_gp=False)
        with pytest.raises(errors.UncomputableOverQ):
            general_position_check([o, oo, o3])

    def test_pgl3_invariance(self):
        rng = random.Random(3)
        orbits = census(2, 4)
        mats = pgl3_matrices(F2)
        for o in rng.sample(orbits, 6):
            K, pts = materialize_points(o)
            base_verdict = general_position_points(K, pts) is True
            M = rng.choice(mats)
            rows = lift_matrix(K, F2, M)
            image = [apply_matrix(K, rows, p) for p in pts]
            assert (general_position_points(K, image) is True) == base_verdict


class TestEnumeration:
    @pytest.mark.parametrize("n,count", [(1, 7), (2, 7), (4, 63)])
    def test_f2_counts(self, n, count):
        orbits = census(2, n)
        assert len(orbits) == count
        for o in orbits:
            assert o.size == n
            assert len(set(o.points)) == n

    def test_zeta_recursion(self):
        # (|P^2(F_{q^n})| - sum_{d|n, d<n} d*count_d) / n
        for q in (2, 3):
            for n in (1, 2, 3, 4):
                plane = q ** (2 * n) + q ** n + 1
                acc = plane
                for d in range(1, n):
                    if n % d == 0:
                        acc -= d * closed_point_count(q, d)
                assert closed_point_count(q, n) == acc // n

    def test_f3_census(self):
        assert len(census(3, 1)) == closed_point_count(3, 1) == 13
        assert len(census(3, 2)) == closed_point_count(3, 2)

    def test_orbits_are_frobenius_closed(self):
        for o in census(2, 2):
            K = o.coord_field
            keys = {point_sort_key(K, p) for p in o.points}
            for p in o.points:
                fp = tuple(K.pow(c, 2) for c in p)
                from cremona_kit.orbits import normalize_point

                assert point_sort_key(K, normalize_point(K, fp)) in keys

    def test_scale_guard(self):
        with pytest.raises(errors.ScaleExceeded):
            enumerate_point_orbits(F2, 33)


class TestClassification:
    def test_size2_one_class(self):
        assert len(classify(2, 2)) == 1

    def test_size4_general_position_one_class(self):
        classes = classify(2, 4, GENERAL_POSITION_ONLY)
        assert len(classes) == 1 and classes[0].count == 42

    def test_rational_points_one_class(self):
        classes = classify(2, 1)
        assert len(classes) == 1 and classes[0].count == 7

    def test_order_independence(self):
        orbits = census(2, 4)
        a = classify(2, 4)
        b = pgl3_classify(list(reversed(orbits)), F2)
        assert [c.class_id for c in a] == [c.class_id for c in b]
        assert [c.count for c in a] == [c.count for c in b]

    def test_transversal_inequivalent_by_exhaustion(self):
        # distinct classes admit no matrix mapping one representative onto
        # the other (independent exhaustive check)
        classes = classify(2, 4)
        assert len(classes) == 2
        reps = [c.representative for c in classes]
        K, pts_a = materialize_points(reps[0])
        _, pts_b = materialize_points(reps[1], K=K)
        keys_b = sorted(point_sort_key(K, p) for p in pts_b)
        for M in pgl3_matrices(F2):
            rows = lift_matrix(K, F2, M)
            image = sorted(
                point_sort_key(K, apply_matrix(K, rows, p)) for p in pts_a
            )
            assert image != keys_b

    def test_f3_size2(self):
        classes = classify(3, 2)
        assert sum(c.count for c in classes) == closed_point_count(3, 2)


class TestMatchTransform:
    def orbit4(self):
        return orbit_from_poly(F2, P(F2, "t^4+t+1"), CONIC)

    def test_identity(self):
        o = self.orbit4()
        A = match_transform(o, o)
        assert A == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]

    def test_recovers_transform(self):
        o = self.orbit4()
        K, pts = materialize_points(o)
        M = [[1, 1, 0], [0, 1, 1], [0, 0, 1]]
        rows = lift_matrix(K, F2, M)
        image = explicit_orbit(F2, K, [apply_matrix(K, rows, p) for p in pts])
        A = match_transform(o, image)
        assert A is not None
        # substitution check: A maps the point set onto the image set
        rows_a = lift_matrix(K, F2, A)
        got = sorted(
            point_sort_key(K, apply_matrix(K, rows_a, p)) for p in pts
        )
        want = sorted(point_sort_key(K, p) for p in image.points)
        assert got == want

    def test_collinear_rejected(self):
        o = self.orbit4()
        one, zero = F2.one, F2.zero
        bad = explicit_orbit(
            F2,
            F2,
            [
                (one, zero, zero),
                (zero, one, zero),
                (one, one, zero),
                (zero, zero, one),
            ],
        )
        with pytest.raises(errors.CollinearTriple):
            match_transform(o, bad)

    def test_fingerprint_mismatch(self):
        o = self.orbit4()
        one, zero = F2.one, F2.zero
        rational_frame = explicit_orbit(
            F2,
            F2,
            [
                (one, zero, zero),
                (zero, one, zero),
                (zero, zero, one),
                (one, one, one),
            ],
        )
        with pytest.raises(errors.FingerprintMismatch):
            match_transform(o, rational_frame)

    def test_q_identity_and_conservatism(self):
        o = orbit_from_poly(QQ, P(QQ, "x^4-2"), CONIC)
        assert match_transform(o, o) is not None
        other = orbit_from_poly(QQ, P(QQ, "x^4-3"), CONIC)
        assert match_transform(o, other) is None  # NoMatch, never a proof


class TestLargeOrbit:
    def test_over_q(self):
        o = large_orbit(QQ, 17)
        assert o.size == 17 and o.template == CONIC
        assert o.min_poly == P(QQ, "x^17-2")

    def test_over_f2(self):
        o = large_orbit(F2, 4)
        assert o.size == 4
        assert o.min_poly == P(F2, "t^4+t+1")

    def test_delta_one_rational_point(self):
        o = large_orbit(QQ, 1)
        assert o.size == 1 and o.template == EXPLICIT
        assert o.points == ((QQ.one, QQ.zero, QQ.zero),)

    def test_parity_constraint(self):
        o = large_orbit(QQ, 16, parity="odd")
        assert o.size == 17

    @pytest.mark.parametrize("delta", [1, 2, 3, 5, 8])
    def test_size_at_least_delta(self, delta):
        assert large_orbit(F3, delta).size >= delta


class TestSym4Audit:
    def test_five_classes(self):
        entries = transitive_sym4_audit()
        assert [e.name for e in entries] == ["Sym4", "A4", "D8", "V4", "Z4"]
        assert [e.order for e in entries] == [24, 12, 8, 4, 4]

    def test_witnesses_for_all_pairings(self):
        for e in transitive_sym4_audit():
            assert set(e.exchange_witnesses) == {"12|34", "13|24", "14|23"}
            for ws in e.exchange_witnesses.values():
                assert ws

    def test_distinguished_witnesses(self):
        entries = {e.name: e for e in transitive_sym4_audit()}
        # (14)(23) exchanges {1,3} with {2,4} inside V4
        assert (3, 1, 0, 2)[::1] in entries["V4"].exchange_witnesses["13|24"] or (
            3,
            2,
            1,
            0,
        ) in entries["V4"].exchange_witnesses["13|24"]
        # (13)(24) lies in every subgroup
        for e in entries.values():
            assert (2, 3, 0, 1) in e.elements

    def test_cycle_format(self):
        assert perm_cycles((2, 3, 0, 1)) == "(1 3)(2 4)"
        assert perm_cycles((0, 1, 2, 3)) == "id"


class TestJsonRoundTrip:
    def test_conic(self):
        o = orbit_from_poly(F2, P(F2, "t^4+t+1"), CONIC)
        assert orbit_from_json(orbit_to_json(o)).key() == o.key()

    def test_split(self):
        f = P(F2, "x^2+x+1")
        o = orbit_from_poly(F2, f, SPLIT, second_poly=f)
        assert orbit_from_json(orbit_to_json(o)).key() == o.key()

    def test_explicit(self):
        o = enumerate_point_orbits(F2, 2)[0]
        back = orbit_from_json(orbit_to_json(o))
        assert back.key() == o.key()
        assert back.general_position == o.general_position

    def test_over_q(self):
        o = orbit_from_poly(QQ, P(QQ, "x^17-2"), LINE)
        assert orbit_from_json(orbit_to_json(o)).key() == o.key()


def test_fingerprint_is_permutation():
    o = orbit_from_poly(F2, P(F2, "t^4+t+1"), CONIC)
    K, pts = materialize_points(o)
    fp = frobenius_fingerprint(K, pts, 2).generator_images[0]
    assert sorted(fp) == [0, 1, 2, 3]
    # transitive single orbit: the permutation is a 4-cycle
    seen, i = set(), 0
    while i not in seen:
        seen.add(i)
        i = fp[i]
    assert len(seen) == 4


class TestFrameNormalization:
    """q > 5 uses frame normalization instead of the exhaustive sweep."""

    def test_equivalent_orbits_merge(self):
        F7 = PrimeField(7)
        f = find_irreducible(F7, 4)
        o1 = orbit_from_poly(F7, f, CONIC)
        K, pts = materialize_points(o1)
        M = [[1, 2, 0], [0, 1, 0], [3, 0, 1]]
        rows = lift_matrix(K, F7, M)
        o2 = explicit_orbit(F7, K, [apply_matrix(K, rows, p) for p in pts])
        classes = pgl3_classify([o1, o2], F7)
        assert len(classes) == 1 and classes[0].strategy == "frame-normalization"

    def test_no_frame_refused(self):
        F7 = PrimeField(7)
        o = orbit_from_poly(F7, find_irreducible(F7, 2), CONIC)
        with pytest.raises(errors.ScaleExceeded):
            pgl3_classify([o], F7)


class TestReembedding:
    def test_explicit_orbit_over_noncanonical_modulus(self):
        # an explicit orbit whose coordinate field uses a non-canonical
        # modulus classifies together with its conic-form twin
        from cremona_kit.fields import ExtensionField

        K2 = ExtensionField(F2, P(F2, "t^4+t^3+1").coeffs)
        o_conic = orbit_from_poly(F2, P(F2, "t^4+t^3+1"), CONIC)
        roots = [K2.gen()]
        for _ in range(3):
            roots.append(K2.pow(roots[-1], 2))
        pts = [(K2.one, a, K2.mul(a, a)) for a in roots]
        o_explicit = explicit_orbit(F2, K2, pts, min_poly=P(F2, "t^4+t^3+1"))
        classes = pgl3_classify([o_conic, o_explicit], F2)
        assert len(classes) == 1 and classes[0].count == 2
