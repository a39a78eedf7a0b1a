import os
import random

import pytest

from cubicstats import splitting, survey


def make_cfg(tmp_path, **kw):
    args = dict(x_max=600, checkpoints=(300, 600), s=(2,),
                cache_path=str(tmp_path / "survey.cache"))
    args.update(kw)
    return survey.SurveyConfig(**args)


def random_record(rng):
    form = tuple(rng.randint(-30, 30) for _ in range(4))
    disc = rng.randint(-10 ** 6, 10 ** 6) or 1
    typs = list(splitting.ALL_TYPES)
    spl = tuple(
        (p, typs[rng.randrange(len(typs))]) for p in (2, 3)
    )
    if rng.random() < 0.1:
        return survey.FieldRecord(
            form=form, disc=disc, is_cyclic=survey._is_square(disc),
            splittings=spl, sat_failed=True,
        )
    divs = lambda: tuple(
        sorted(rng.choice([2, 3, 4, 6, 8]) for _ in range(rng.randrange(3)))
    )
    rows = tuple(
        tuple(rng.randint(0, 1) for _ in range(3))
        for _ in range(rng.randrange(4))
    )
    return survey.FieldRecord(
        form=form, disc=disc, is_cyclic=survey._is_square(disc),
        splittings=spl, cl=divs(), cl_plus=divs(), cl_s=divs(),
        cl_plus_s=divs(), sign_rows=rows,
    )


def test_record_round_trip():
    rng = random.Random(31)
    for _ in range(1000):
        r = random_record(rng)
        assert survey.line_to_record(survey.record_to_line(r)) == r


def test_cache_corrupt_record_reports_line(tmp_path):
    path = tmp_path / "bad.cache"
    path.write_text("#cubicstats-cache v1 S=2\n1,1,2,1|-23|real\n")
    with pytest.raises(survey.CacheError) as exc:
        survey.cache_read(str(path))
    assert ":2:" in str(exc.value)


def test_cache_duplicate_handling(tmp_path):
    rng = random.Random(32)
    r = random_record(rng)
    line = survey.record_to_line(r)
    path = tmp_path / "dup.cache"
    path.write_text(f"{line}\n{line}\n")
    recs = survey.cache_read(str(path))
    assert len(recs) == 1  # equal payloads merge

    r2 = survey.FieldRecord(
        form=r.form, disc=r.disc + (2 if not r.sat_failed else 0),
        is_cyclic=r.is_cyclic, splittings=r.splittings, cl=r.cl,
        cl_plus=r.cl_plus, cl_s=r.cl_s, cl_plus_s=r.cl_plus_s,
        sign_rows=r.sign_rows, sat_failed=r.sat_failed,
    )
    if r2 != r:
        path.write_text(f"{line}\n{survey.record_to_line(r2)}\n")
        with pytest.raises(survey.CacheError):
            survey.cache_read(str(path))


def test_survey_deterministic_and_resumable(tmp_path):
    cfg = make_cfg(tmp_path)
    rep1 = survey.run_survey(cfg)
    text1 = survey.report_json(rep1)

    # full resume from cache
    rep2 = survey.run_survey(make_cfg(tmp_path))
    assert survey.report_json(rep2) == text1

    # interrupt at ~50%: truncate the cache and resume
    cache = tmp_path / "survey.cache"
    lines = cache.read_text().splitlines(keepends=True)
    half = 1 + (len(lines) - 1) // 2
    cache.write_text("".join(lines[:half]))
    rep3 = survey.run_survey(make_cfg(tmp_path))
    assert survey.report_json(rep3) == text1

    # no cache, different parallelism
    rep4 = survey.run_survey(make_cfg(tmp_path, cache_path=None,
                                      parallelism=3))
    assert survey.report_json(rep4) == text1


def test_cache_header_mismatch(tmp_path):
    cfg = make_cfg(tmp_path, x_max=120, checkpoints=(120,))
    survey.run_survey(cfg)
    with pytest.raises(survey.CacheError):
        survey.run_survey(make_cfg(tmp_path, x_max=120, checkpoints=(120,),
                                   s=(2, 3)))


def test_smallest_complex_field_average():
    # below |disc| = 31 the only complex cubic field is disc -23
    cfg = survey.SurveyConfig(x_max=30, signature="complex", s=())
    rep = survey.run_survey(cfg)
    sec = rep["checkpoints"][0]["sections"]["complex"]
    assert sec["count"] == 1
    assert sec["averages"]["cl2"]["value"] == "1/1"


def test_cyclic_fields_excluded_by_default():
    cfg = survey.SurveyConfig(x_max=100, signature="real", s=())
    rep = survey.run_survey(cfg)
    cp = rep["checkpoints"][0]
    assert cp["sections"]["real"]["count"] == 0
    assert cp["excluded"]["cyclic"] == 2  # disc 49 and 81
    cfg = survey.SurveyConfig(x_max=100, signature="real", s=(),
                              include_cyclic=True)
    rep = survey.run_survey(cfg)
    assert rep["checkpoints"][0]["sections"]["real"]["count"] == 2


def test_conditioning_filters_fields(tmp_path):
    # survey conditioned on 2 totally split keeps only r_2 = 3 fields
    cfg = make_cfg(tmp_path, conditioning={2: 3})
    rep = survey.run_survey(cfg)
    full = survey.run_survey(make_cfg(tmp_path))
    for sig in ("real", "complex"):
        n_cond = rep["checkpoints"][-1]["sections"][sig]["count"]
        n_full = full["checkpoints"][-1]["sections"][sig]["count"]
        assert n_cond < n_full
    # prediction switches to the fixed-local-algebra value: 1 + 2^-(2+c)
    sec = rep["checkpoints"][-1]["sections"]["real"]
    assert sec["averages"]["cl_s2"]["predicted"] == "17/16"
    sec = rep["checkpoints"][-1]["sections"]["complex"]
    assert sec["averages"]["cl_s2"]["predicted"] == "9/8"


def test_proportions_nested(tmp_path):
    cfg = make_cfg(tmp_path, x_max=1200, checkpoints=(1200,),
                   signature="real")
    rep = survey.run_survey(cfg)
    props = rep["checkpoints"][0]["sections"]["real"]["proportions"]
    p1 = props["narrow_s_2torsion_trivial"]["sum"]
    p2 = props["narrow_s_equals_s"]["sum"]
    p3 = props["all_unit_signatures"]["sum"]
    assert p1 <= p2 <= p3


def test_proportion_predicates_helper(tmp_path):
    cfg = make_cfg(tmp_path, x_max=800, checkpoints=(800,))
    out = survey.proportion_predicates(cfg)
    assert len(out) == 3
    assert out[0] <= out[1] <= out[2]


def test_csv_and_json_render(tmp_path):
    cfg = make_cfg(tmp_path, x_max=300, checkpoints=(300,))
    rep = survey.run_survey(cfg)
    text = survey.report_csv(rep)
    assert text.startswith("x,signature,kind,metric")
    import json

    parsed = json.loads(survey.report_json(rep))
    assert parsed["schema"] == survey.SCHEMA_VERSION


def test_dec12_exact():
    from fractions import Fraction

    assert survey._dec12(Fraction(1, 3)) == "0.333333333333"
    assert survey._dec12(Fraction(3, 2)) == "1.500000000000"
    assert survey._dec12(Fraction(-5, 4)) == "-1.250000000000"
    assert survey._dec12(Fraction(2)) == "2.000000000000"
