import pytest

from cubicstats import classgroup, enumerate as enumeration, selmer


def test_spec_examples():
    fd = classgroup.compute_field((1, 1, 2, 1))  # disc -23, complex
    assert selmer.selmer_size_formula(fd, ()) == 4
    assert selmer.selmer_size_formula(fd, (2,)) == 8  # 2 inert
    assert selmer.selmer_size_exact_sequence(fd, ()) == 4
    fd = classgroup.compute_field((1, -1, -3, 1))  # disc 148, totally real
    assert selmer.selmer_size_formula(fd, ()) == 8
    assert selmer.selmer_size_exact_sequence(fd, ()) == 8


def test_routes_agree_small():
    for rec in enumeration.enumerate_fields(1500, 0):
        fd = classgroup.compute_field(rec.form)
        for s in [(), (2,), (2, 3)]:
            assert selmer.selmer_size_formula(fd, s) == (
                selmer.selmer_size_exact_sequence(fd, s)
            ), (rec.form, s)


def test_selmer_monotone_in_s():
    for rec in enumeration.enumerate_fields(1200, 0):
        fd = classgroup.compute_field(rec.form)
        a = selmer.selmer_size_formula(fd, ())
        b = selmer.selmer_size_formula(fd, (2,))
        c = selmer.selmer_size_formula(fd, (2, 3))
        assert b % a == 0 and c % b == 0


def test_k_rank_disc_23():
    fd = classgroup.compute_field((1, 1, 2, 1))
    cards = [selmer.k_rank(fd, n).card for n in (4, 1, 2, 3)]
    assert cards == [1, 2, 1, 1]


def test_k_rank_shift_and_collapse():
    for rec in enumeration.enumerate_fields(1200, 0):
        fd = classgroup.compute_field(rec.form)
        r1 = 3 if rec.disc > 0 else 1
        assert selmer.k_rank(fd, 1).rank - selmer.k_rank(fd, 4).rank == r1
        if rec.disc < 0:
            assert selmer.k_rank(fd, 2).rank == selmer.k_rank(fd, 4).rank
        assert selmer.k_rank(fd, 2).rank == selmer.k_rank(fd, 3).rank


def test_k_rank_rejects_nonpositive():
    fd = classgroup.compute_field((1, 1, 2, 1))
    with pytest.raises(ValueError):
        selmer.k_rank(fd, 0)


def test_mod_squares_dim_counts_generators():
    # dim = 1 (for -1) + unit rank + nu_S when generation is exact
    for form in [(1, 1, 2, 1), (1, -1, -3, 1), (1, 0, 4, -1)]:
        fd = classgroup.compute_field(form)
        r1r2 = 3 if fd.disc > 0 else 2
        for s in [(), (2,)]:
            gens = classgroup.sunit_generators(fd, s)
            dim = selmer.mod_squares_dim(fd, gens)
            assert dim == r1r2 + fd.nu[s]


def test_saturation_detects_planted_square():
    # feeding a generating set with a planted square dependence must
    # raise, not silently shrink the dimension
    fd = classgroup.compute_field((1, -1, -3, 1))
    u = fd.units.gens[0]
    planted = fd.ring.mul(u, u)
    gens = list(fd.units.gens) + [planted]
    with pytest.raises(selmer.SaturationError):
        selmer.mod_squares_dim(fd, gens)
