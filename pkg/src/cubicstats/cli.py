"""Command-line interface.

Subcommands:
  enumerate      list cubic fields up to a discriminant bound
  invariants     class-group style invariants of one field
  survey         run a survey from a JSON config file
  predict        closed-form predicted averages
  masses         local masses at a prime
  verify-oracle  cross-check the main path against the unconditional oracle
  kgroups        K-group 2-torsion: per-field ranks or predicted averages
"""

import argparse
import sys
from fractions import Fraction

from . import classgroup, densities, enumerate as enumeration, selmer, survey


def _parse_s(text):
    if not text:
        return ()
    return tuple(sorted({int(p) for p in text.split(",")}))


def _parse_form(text):
    vals = tuple(int(v) for v in text.split(","))
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("form must be a,b,c,d")
    return vals


def _frac_str(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator} = {float(q):.12g}"


def cmd_enumerate(args):
    sign = {"real": 1, "complex": -1, "both": 0}[args.signature]
    n = 0
    for rec in enumeration.enumerate_fields(args.max_disc, sign):
        if not args.include_cyclic and survey._is_square(rec.disc):
            continue
        a, b, c, d = rec.form
        print(f"{rec.disc}\t{a},{b},{c},{d}")
        n += 1
    print(f"# {n} fields", file=sys.stderr)
    return 0


def cmd_invariants(args):
    s = _parse_s(args.s)
    fd = classgroup.compute_field(args.form)
    print(f"form: {','.join(map(str, args.form))}")
    print(f"disc: {fd.disc} ({'totally real' if fd.disc > 0 else 'complex'})")
    print(f"h: {fd.h}")
    print(f"regulator: {fd.regulator:.10g}")
    print(f"Cl: {fd.cl}")
    if args.narrow:
        print(f"Cl+: {fd.cl_plus}")
    if s:
        if s not in fd.cl_s:
            fd = classgroup.compute_field(args.form, s_sets=((), s))
        print(f"nu_S: {fd.nu[s]}")
        print(f"Cl_S: {fd.cl_s[s]}")
        if args.narrow:
            print(f"Cl+_S: {fd.cl_plus_s[s]}")
        print(f"|Sel_2^S|: {selmer.selmer_size_formula(fd, s)}")
    return 0


def cmd_survey(args):
    cfg = survey.SurveyConfig.from_file(args.config)
    report = survey.run_survey(cfg)
    if args.csv:
        out = survey.report_csv(report)
    else:
        out = survey.report_json(report)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


def cmd_predict(args):
    s = _parse_s(args.s)
    tr = args.signature == "real"
    t = args.theorem
    if t == "1.1":
        print("avg |Cl[2]|:", _frac_str(densities.predict_cl_avg(tr, False, ())))
        if tr:
            print("avg |Cl+[2]|:",
                  _frac_str(densities.predict_cl_avg(True, True, ())))
    elif t == "1.2":
        print("avg |Cl_S[2]|:",
              _frac_str(densities.predict_cl_avg(tr, args.narrow, s)))
    elif t == "1.4":
        rvs = [int(v) for v in args.r_values.split(",")] if args.r_values else []
        print("avg |Cl_S[2]| (fixed local algebras):",
              _frac_str(densities.predict_cl_avg_conditioned(tr, args.narrow, rvs)))
    elif t == "1.5":
        print("avg |Sel_2^S|:", _frac_str(densities.predict_selmer_avg(tr, s)))
    elif t == "1.6":
        for m in range(4):
            print(f"avg |K_2n[2]|, n = {m} mod 4:",
                  _frac_str(densities.predict_kgroup_avg(tr, m)))
    elif t == "5.2":
        print("avg 2^nu_S:", _frac_str(densities.predict_2nu_avg(s)))
    elif t == "5.5":
        print("avg 2^nu_S |Cl_S[2]|:",
              _frac_str(densities.predict_2nu_cl_avg(tr, args.narrow, s)))
    elif t == "cor1.3":
        print("proportion floor:", _frac_str(densities.predict_cor13_floor(s)))
    return 0


def cmd_masses(args):
    p = args.p
    for r in (1, 2, 3):
        print(f"mu_p(Sigma_{p},{r}):", _frac_str(densities.mass_sigma_r(p, r)))
    print("total:", _frac_str(densities.mass_total(p)))
    print("tilde total:", _frac_str(densities.mass_tilde(p)))
    print("tilde ratio (all):", _frac_str(densities.tilde_ratio_all(p)))
    for r in (1, 2, 3):
        print(f"tilde ratio (single, r={r}):",
              _frac_str(densities.tilde_ratio_single(r)))
    return 0


def cmd_verify_oracle(args):
    from . import oracle

    bad = 0
    n = 0
    for rec in enumeration.enumerate_fields(args.max_disc, 0):
        fd = classgroup.compute_field(rec.form)
        of = oracle.OracleField(rec.form, seed_units=fd.units.gens)
        ok = (fd.cl == of.cl and fd.cl_plus == of.cl_plus
              and fd.cl_s == of.cl_s and fd.cl_plus_s == of.cl_plus_s)
        n += 1
        if not ok:
            bad += 1
            print(f"MISMATCH {rec.form} disc {rec.disc}")
        elif args.verbose:
            print(f"ok {rec.form} disc {rec.disc} Cl={fd.cl} Cl+={fd.cl_plus}")
    print(f"# {n} fields checked, {bad} mismatches")
    return 1 if bad else 0


def cmd_kgroups(args):
    if args.form:
        fd = classgroup.compute_field(args.form)
        kr = selmer.k_rank(fd, args.n_mod_4 if args.n_mod_4 > 0 else 4)
        print(f"disc {fd.disc}: 2-rank of K_2n (n = {args.n_mod_4} mod 4): "
              f"{kr.rank} (card {kr.card})")
    else:
        for tr, name in ((True, "totally real"), (False, "complex")):
            print(f"{name}: avg |K_2n[2]| =",
                  _frac_str(densities.predict_kgroup_avg(tr, args.n_mod_4)))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="cubicstats", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="list cubic fields")
    p.add_argument("--max-disc", type=int, required=True)
    p.add_argument("--signature", choices=("real", "complex", "both"),
                   default="both")
    p.add_argument("--include-cyclic", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("invariants", help="invariants of one field")
    p.add_argument("--form", type=_parse_form, required=True,
                   help="maximal form a,b,c,d")
    p.add_argument("--s", default="", help="comma-separated primes")
    p.add_argument("--narrow", action="store_true")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("survey", help="run a survey")
    p.add_argument("--config", required=True, help="JSON config file")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("predict", help="closed-form predictions")
    p.add_argument("--theorem", required=True,
                   choices=("1.1", "1.2", "1.4", "1.5", "1.6", "5.2", "5.5",
                            "cor1.3"))
    p.add_argument("--s", default="")
    p.add_argument("--signature", choices=("real", "complex"),
                   default="real")
    p.add_argument("--narrow", action="store_true")
    p.add_argument("--r-values", default="",
                   help="pinned r_p values for theorem 1.4, e.g. 3,1")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("masses", help="local masses at a prime")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_masses)

    p = sub.add_parser("verify-oracle", help="main path vs oracle")
    p.add_argument("--max-disc", type=int, required=True)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_verify_oracle)

    p = sub.add_parser("kgroups", help="K-group 2-torsion")
    p.add_argument("--n-mod-4", type=int, required=True,
                   choices=(0, 1, 2, 3))
    p.add_argument("--form", type=_parse_form)
    p.set_defaults(func=cmd_kgroups)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
