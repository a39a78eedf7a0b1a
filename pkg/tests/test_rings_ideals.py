import random

from cubicstats import enumerate as enumeration, forms, ideals, rings

SAMPLE_FORMS = [
    (1, 1, 2, 1),     # disc -23
    (1, 0, 1, -1),    # disc -31
    (1, -1, -3, 1),   # disc 148
    (1, 0, 4, -1),    # disc -283
    (2, -3, 1, -4),   # disc -1727
    (1, 1, -4, -2),   # disc 316
]


def random_elt(rng, lim=9):
    return tuple(rng.randint(-lim, lim) for _ in range(3))


def test_multiplication_commutative_associative():
    rng = random.Random(11)
    for f in SAMPLE_FORMS:
        R = rings.CubicRing.from_form(f)
        for _ in range(40):
            x, y, z = (random_elt(rng) for _ in range(3))
            assert R.mul(x, y) == R.mul(y, x)
            assert R.mul(R.mul(x, y), z) == R.mul(x, R.mul(y, z))


def test_norm_multiplicative():
    rng = random.Random(12)
    for f in SAMPLE_FORMS:
        R = rings.CubicRing.from_form(f)
        for _ in range(60):
            x, y = random_elt(rng), random_elt(rng)
            assert R.norm(R.mul(x, y)) == R.norm(x) * R.norm(y)


def test_ring_discriminant_matches_form():
    for f in SAMPLE_FORMS:
        R = rings.CubicRing.from_form(f)
        assert R.discriminant == forms.disc(f)


def test_primes_above_structure():
    for f in SAMPLE_FORMS:
        R = rings.CubicRing.from_form(f)
        for p in (2, 3, 5, 7, 11):
            prs = ideals.primes_above(R, p)
            assert sum(P.e * P.f for P in prs) == 3
            whole = ideals.Ideal.whole_ring(R)
            prod = whole
            for P in prs:
                assert P.ideal.norm() == p ** P.f
                prod = prod.mul(P.ideal.pow(P.e))
            # product of P^e is exactly (p)
            assert prod == whole.mul_element((p, 0, 0))


def test_principal_ideal_norm():
    rng = random.Random(13)
    for f in SAMPLE_FORMS:
        R = rings.CubicRing.from_form(f)
        for _ in range(20):
            x = random_elt(rng, lim=5)
            n = R.norm(x)
            if n == 0:
                continue
            assert ideals.Ideal.principal(R, x).norm() == abs(n)


def test_element_valuations_match_ideal_valuations():
    rng = random.Random(14)
    for f in SAMPLE_FORMS[:3]:
        R = rings.CubicRing.from_form(f)
        prs = [P for p in (2, 3, 5) for P in ideals.primes_above(R, p)]
        for _ in range(15):
            x = random_elt(rng, lim=6)
            if R.norm(x) == 0:
                continue
            I = ideals.Ideal.principal(R, x)
            vals = ideals.element_valuations(R, x, [P.ideal for P in prs])
            for P, v in zip(prs, vals):
                assert ideals.valuation(I, P.ideal) == v


def test_maximality_flags_against_enumeration():
    # every record produced by the enumerator must be maximal at the
    # primes whose square divides the discriminant
    for rec in enumeration.enumerate_fields(500, 0):
        R = rings.CubicRing.from_form(rec.form)
        d = abs(rec.disc)
        for p in (2, 3, 5, 7):
            if d % (p * p) == 0:
                assert R.is_maximal_at(p)
