import math
import random

import numpy as np

from cubicstats import embeddings, linalg, rings

FORMS = [
    (1, 1, 2, 1),     # complex
    (1, -1, -3, 1),   # totally real
    (2, -3, 1, -4),   # complex, non-monic
    (1, 1, -4, -2),   # totally real
]


def setup_field(f):
    R = rings.CubicRing.from_form(f)
    return R, embeddings.Embeddings(f)


def random_elt(rng, lim=7):
    return tuple(rng.randint(-lim, lim) for _ in range(3))


def test_log_vector_sums_to_log_norm():
    rng = random.Random(21)
    for f in FORMS:
        R, emb = setup_field(f)
        for _ in range(25):
            x = random_elt(rng)
            n = R.norm(x)
            if n == 0:
                continue
            logs = emb.log_vector(x)
            assert abs(float(sum(logs)) - math.log(abs(n))) < 1e-8


def test_sign_bits_match_resultant_sign():
    # the product of the real embeddings of x has the sign of
    # N(x) restricted to the real places
    rng = random.Random(22)
    for f in FORMS:
        R, emb = setup_field(f)
        for _ in range(40):
            x = random_elt(rng)
            n = R.norm(x)
            if n == 0:
                continue
            bits = emb.sign_bits(x)
            assert len(bits) == emb.r1
            # parity of negative real embeddings determines sign of N
            neg = sum(bits)
            assert (n < 0) == (neg % 2 == 1)


def test_sqrt_in_ring_roundtrip():
    rng = random.Random(23)
    for f in FORMS:
        R, emb = setup_field(f)
        hits = 0
        for _ in range(20):
            x = random_elt(rng, lim=4)
            if R.norm(x) == 0:
                continue
            sq = R.mul(x, x)
            root = embeddings.sqrt_in_ring(R, emb, list(sq))
            assert root is not None
            assert R.mul(root, root) == sq
            hits += 1
        assert hits > 10
        # non-squares come back None
        for x in [(2, 0, 0), (0, 1, 0), (3, 1, 1)]:
            sq = R.mul(x, x)
            bad = tuple(v for v in sq)
            bad = (bad[0] + 1, bad[1], bad[2])
            if R.norm(bad) != 0:
                got = embeddings.sqrt_in_ring(R, emb, list(bad))
                if got is not None:
                    assert R.mul(got, got) == bad


def test_t2_gram_positive_definite():
    for f in FORMS:
        R, emb = setup_field(f)
        G = np.asarray(emb.t2_gram(), dtype=np.float64)
        assert np.all(np.linalg.eigvalsh(G) > 0)
        # T2(1) = 3
        assert abs(G[0, 0] - 3.0) < 1e-9


def test_fincke_pohst_completeness():
    # against direct box enumeration on a small ball
    rng = random.Random(24)
    for f in FORMS:
        R, emb = setup_field(f)
        G = np.asarray(emb.t2_gram(), dtype=np.float64)
        rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        bound = 40.25  # not attainable by the integer-valued T2 here
        got = {tuple(v) for v in embeddings.fincke_pohst(
            G, rows, bound).tolist()}
        brute = set()
        for x0 in range(-8, 9):
            for x1 in range(-8, 9):
                for x2 in range(-8, 9):
                    v = np.array([x0, x1, x2], dtype=float)
                    q = float(v @ G @ v)
                    if 0 < q <= bound:
                        brute.add((x0, x1, x2))
        # one per +- pair in got
        assert len(got) * 2 == len(brute)
        for v in got:
            assert v in brute and tuple(-x for x in v) in brute


def test_lll_preserves_lattice():
    rng = random.Random(25)
    import mpmath

    for _ in range(30):
        ints = [[rng.randint(-9, 9) for _ in range(3)] for _ in range(3)]
        if abs(linalg.det3(ints)) == 0:
            continue
        det0 = linalg.det3(ints)
        vecs = [[mpmath.mpf(v) for v in row] for row in ints]
        before = [row[:] for row in ints]
        embeddings._lll_rows(vecs, ints)
        assert abs(linalg.det3(ints)) == abs(det0)
        # every reduced int row is in the original lattice
        assert linalg.hnf([r[:] for r in before]) == linalg.hnf(
            [r[:] for r in ints]
        )
        # reduction should not lengthen the basis overall
        def prod_norms(rows):
            out = 1.0
            for r in rows:
                out *= sum(x * x for x in r) ** 0.5
            return out

        assert prod_norms(ints) <= prod_norms(before) * 1.0001


def test_skewed_enumeration_matches_plain_at_zero_skew():
    for f in FORMS:
        R, emb = setup_field(f)
        G = np.asarray(emb.t2_gram(), dtype=np.float64)
        rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        nplaces = emb.r1 + emb.r2
        plain = {tuple(v) for v in embeddings.fincke_pohst(
            G, rows, 30.0).tolist()}
        skew = {tuple(v) for v in embeddings.fincke_pohst_skewed(
            emb, [0.0] * nplaces, rows, 30.0).tolist()}
        norm_plain = {tuple(sorted((v, tuple(-x for x in v)))) for v in plain}
        norm_skew = {tuple(sorted((v, tuple(-x for x in v)))) for v in skew}
        assert norm_plain == norm_skew
