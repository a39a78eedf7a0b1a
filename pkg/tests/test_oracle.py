import pytest

from cubicstats import classgroup, enumerate as enumeration, oracle


def test_known_fields():
    of = oracle.OracleField((1, 1, 2, 1))  # disc -23
    assert of.cl.divisors == () and of.cl_plus.divisors == ()
    assert of.cl_s[(2,)].divisors == ()
    of = oracle.OracleField((1, 0, 4, -1))  # disc -283
    assert of.cl.divisors == (2,)
    of = oracle.OracleField((1, -1, -3, 1))  # disc 148
    assert of.cl.divisors == ()


def test_oracle_equivalence_small():
    # fast subset; the |disc| <= 2*10^4 sweep lives in the acceptance gate
    for rec in enumeration.enumerate_fields(900, 0):
        fd = classgroup.compute_field(rec.form)
        of = oracle.OracleField(rec.form, seed_units=fd.units.gens)
        assert of.cl == fd.cl, rec.form
        assert of.cl_plus == fd.cl_plus, rec.form
        assert of.cl_s == fd.cl_s, rec.form
        assert of.cl_plus_s == fd.cl_plus_s, rec.form


def test_oracle_self_contained_units():
    # without seeds the oracle must bootstrap its own certified unit group
    of = oracle.OracleField((1, 1, 2, 1))
    assert of.cl.divisors == ()
    of = oracle.OracleField((2, -3, 1, -4))
    assert of.cl.divisors == ()


def test_threshold_guard():
    with pytest.raises(oracle.ResourceLimitError):
        oracle.OracleField((1, 1, 2, 1), threshold=10)
