"""Survey driver: enumerate fields, compute invariants, aggregate averages.

Empirical counterparts of the density predictions are partial averages
over |Disc| <= X with a sharp cutoff.  All aggregation is exact: per-field
quantities are integers (sizes of 2-torsion groups, 2^nu, K-group cards),
sums are taken over Z, and the single division happens at the very end,
so reports are bit-identical across runs, shard partitions and thread
counts.  Convergence of the 2-torsion averages is slow (the limit has
secondary terms we do not model), so acceptance-style checks compare
trends and bands rather than tight tolerances.

Per-field work is cached in an append-only line-oriented file keyed by
the reduced form, so an interrupted survey resumes where it stopped and
a resumed report is byte-identical to an uninterrupted one.  Fields whose
S-unit generators fail 2-saturation are excluded from all averages and
counted (never silently dropped); cyclic (square-discriminant) cubics
are likewise excluded by default.
"""

import json
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import classgroup, densities, enumerate as enumeration, selmer, splitting

SCHEMA_VERSION = 1


class CacheError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------


@dataclass
class SurveyConfig:
    x_max: int
    checkpoints: tuple = None
    signature: str = "both"  # real | complex | both
    s: tuple = ()
    conditioning: object = None  # {p: allowed r_p or splitting types}
    plus: bool = True  # also aggregate narrow variants
    include_cyclic: bool = False
    oracle_threshold: int = 0  # cross-check fields with |disc| <= this
    parallelism: int = 1
    cache_path: str = None
    selmer_s_sets: tuple = ((), (2,), (2, 3))

    def __post_init__(self):
        if self.checkpoints is None:
            self.checkpoints = (self.x_max,)
        self.checkpoints = tuple(sorted(set(int(x) for x in self.checkpoints)))
        if any(x > self.x_max for x in self.checkpoints):
            raise ValueError("checkpoints must not exceed x_max")
        if self.signature not in ("real", "complex", "both"):
            raise ValueError(f"bad signature filter {self.signature!r}")
        self.s = tuple(sorted(set(int(p) for p in self.s)))
        self.selmer_s_sets = tuple(
            tuple(sorted(set(ss))) for ss in self.selmer_s_sets
        )
        if self.s not in self.selmer_s_sets:
            self.selmer_s_sets = self.selmer_s_sets + (self.s,)

    @property
    def splitting_primes(self):
        ps = set(self.s) | {2}
        if self.conditioning:
            ps |= set(int(p) for p in self.conditioning)
        return tuple(sorted(ps))

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            raw = json.load(fh)
        cond = raw.get("conditioning")
        if cond is not None:
            cond = {int(p): v for p, v in cond.items()}
        return cls(
            x_max=int(raw["x_max"]),
            checkpoints=tuple(raw.get("checkpoints", [raw["x_max"]])),
            signature=raw.get("signature", "both"),
            s=tuple(raw.get("s", [])),
            conditioning=cond,
            plus=bool(raw.get("plus", True)),
            include_cyclic=bool(raw.get("include_cyclic", False)),
            oracle_threshold=int(raw.get("oracle_threshold", 0)),
            parallelism=int(raw.get("parallelism", 1)),
            cache_path=raw.get("cache_path"),
        )


# --------------------------------------------------------------------------
# per-field records
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldRecord:
    form: tuple
    disc: int
    is_cyclic: bool
    splittings: tuple  # ((p, type), ...) with type = ((e, f), ...)
    cl: tuple = ()
    cl_plus: tuple = ()
    cl_s: tuple = ()
    cl_plus_s: tuple = ()
    sign_rows: tuple = ()  # sign bits of the S-unit generators
    sat_failed: bool = False

    @property
    def totally_real(self):
        return self.disc > 0

    def r_p(self, p):
        return len(dict(self.splittings)[p])

    def nu(self, s_primes):
        return sum(self.r_p(p) for p in s_primes)

    @staticmethod
    def _two_torsion(divisors):
        return 1 << sum(1 for d in divisors if d % 2 == 0)

    @property
    def cl2(self):
        return self._two_torsion(self.cl)

    @property
    def cl_plus2(self):
        return self._two_torsion(self.cl_plus)

    @property
    def cl_s2(self):
        return self._two_torsion(self.cl_s)

    @property
    def cl_plus_s2(self):
        return self._two_torsion(self.cl_plus_s)


def _is_square(n):
    if n < 0:
        return False
    r = int(n ** 0.5)
    while r * r > n:
        r -= 1
    while (r + 1) * (r + 1) <= n:
        r += 1
    return r * r == n


# mpmath keeps per-thread state in one shared context, so the per-field
# math must not interleave across threads.  The work is pure Python and
# GIL-bound, so serializing it costs no throughput; sharding still buys
# deterministic resume granularity.
_FIELD_LOCK = threading.Lock()


def compute_record(rec, cfg):
    """Full invariant record for one enumerated field, including the
    Selmer route cross-check for every S in cfg.selmer_s_sets."""
    with _FIELD_LOCK:
        return _compute_record_locked(rec, cfg)


def _compute_record_locked(rec, cfg):
    form = rec.form
    is_cyc = _is_square(rec.disc)
    s_sets = tuple(sorted(set(cfg.selmer_s_sets), key=lambda t: (len(t), t)))
    fd = classgroup.compute_field(form, s_sets=s_sets)
    spl = tuple(
        (p, splitting.splitting_type(form, p, ring=fd.ring))
        for p in cfg.splitting_primes
    )
    sign_rows = ()
    try:
        for ss in s_sets:
            gens = classgroup.sunit_generators(fd, ss)
            dim = selmer.mod_squares_dim(fd, gens)
            size = (1 << dim) * fd.cl_s[ss].two_torsion
            if size != selmer.selmer_size_formula(fd, ss):
                # a disagreement here would falsify the exact sequence
                # bookkeeping; treat as a saturation-level failure
                raise selmer.SaturationError(
                    f"Selmer routes disagree for {form}, S={ss}"
                )
            if ss == cfg.s:
                sign_rows = tuple(
                    tuple(fd.emb.sign_bits(g)) for g in gens
                )
    except selmer.SaturationError:
        return FieldRecord(
            form=form, disc=rec.disc, is_cyclic=is_cyc, splittings=spl,
            sat_failed=True,
        )
    if cfg.oracle_threshold and abs(rec.disc) <= cfg.oracle_threshold:
        from . import oracle

        of = oracle.OracleField(form, s_sets=(cfg.s,),
                                seed_units=fd.units.gens)
        if (of.cl, of.cl_plus, of.cl_s[cfg.s], of.cl_plus_s[cfg.s]) != (
            fd.cl, fd.cl_plus, fd.cl_s[cfg.s], fd.cl_plus_s[cfg.s]
        ):
            raise classgroup.CertificationError(
                f"oracle disagrees with main path on {form}"
            )
    return FieldRecord(
        form=form,
        disc=rec.disc,
        is_cyclic=is_cyc,
        splittings=spl,
        cl=fd.cl.divisors,
        cl_plus=fd.cl_plus.divisors,
        cl_s=fd.cl_s[cfg.s].divisors,
        cl_plus_s=fd.cl_plus_s[cfg.s].divisors,
        sign_rows=sign_rows,
    )


# --------------------------------------------------------------------------
# cache: one line per field, append-only, keyed by the reduced form
# --------------------------------------------------------------------------


def _fmt_splittings(spl):
    return " ".join(
        f"{p}:" + "+".join(f"{e}^{f}" for e, f in typ) for p, typ in spl
    )


def _parse_splittings(text):
    out = []
    for part in text.split():
        p, typ = part.split(":")
        pairs = tuple(
            tuple(int(v) for v in ef.split("^")) for ef in typ.split("+")
        )
        out.append((int(p), pairs))
    return tuple(out)


def _fmt_divs(divs):
    return ",".join(str(d) for d in divs)


def _parse_divs(text):
    return tuple(int(v) for v in text.split(",")) if text else ()


def record_to_line(r):
    form = ",".join(str(v) for v in r.form)
    if r.sat_failed:
        return f"{form}|{r.disc}|satfail|{_fmt_splittings(r.splittings)}"
    sig = "real" if r.disc > 0 else "complex"
    rows = ",".join("".join(str(b) for b in row) for row in r.sign_rows)
    return "|".join(
        [
            form,
            str(r.disc),
            sig,
            "1" if r.is_cyclic else "0",
            _fmt_splittings(r.splittings),
            _fmt_divs(r.cl),
            _fmt_divs(r.cl_plus),
            _fmt_divs(r.cl_s),
            _fmt_divs(r.cl_plus_s),
            rows,
        ]
    )


def line_to_record(line):
    parts = line.rstrip("\n").split("|")
    form = tuple(int(v) for v in parts[0].split(","))
    disc = int(parts[1])
    if parts[2] == "satfail":
        return FieldRecord(
            form=form, disc=disc, is_cyclic=_is_square(disc),
            splittings=_parse_splittings(parts[3]), sat_failed=True,
        )
    if len(parts) != 10:
        raise ValueError("wrong field count")
    rows = tuple(
        tuple(int(ch) for ch in row)
        for row in parts[9].split(",")
        if row
    )
    return FieldRecord(
        form=form,
        disc=disc,
        is_cyclic=parts[3] == "1",
        splittings=_parse_splittings(parts[4]),
        cl=_parse_divs(parts[5]),
        cl_plus=_parse_divs(parts[6]),
        cl_s=_parse_divs(parts[7]),
        cl_plus_s=_parse_divs(parts[8]),
        sign_rows=rows,
    )


def _cache_header(cfg):
    s = ",".join(str(p) for p in cfg.s)
    return f"#cubicstats-cache v{SCHEMA_VERSION} S={s}"


def cache_read(path, cfg=None):
    """Records keyed by form.  Duplicate keys are merged; equal payloads
    collapse to one record, differing payloads are an error."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                if cfg is not None and line != _cache_header(cfg):
                    raise CacheError(
                        f"{path}:{lineno}: cache header {line!r} does not "
                        f"match the survey configuration"
                    )
                continue
            try:
                rec = line_to_record(line)
            except (ValueError, IndexError) as exc:
                raise CacheError(f"{path}:{lineno}: corrupt record ({exc})")
            old = out.get(rec.form)
            if old is not None and old != rec:
                raise CacheError(
                    f"{path}:{lineno}: duplicate key {rec.form} with "
                    f"conflicting payloads"
                )
            out[rec.form] = rec
    return out


class CacheWriter:
    """Append-only, thread-safe cache writer."""

    def __init__(self, path, cfg):
        self.path = path
        self.lock = threading.Lock()
        if not os.path.exists(path) or os.path.getsize(path) == 0:
            with open(path, "w") as fh:
                fh.write(_cache_header(cfg) + "\n")

    def write(self, rec):
        with self.lock, open(self.path, "a") as fh:
            fh.write(record_to_line(rec) + "\n")


# --------------------------------------------------------------------------
# aggregation
# --------------------------------------------------------------------------


def _matches_conditioning(rec, conditioning):
    if not conditioning:
        return True
    spl = dict(rec.splittings)
    for p, allowed in conditioning.items():
        if isinstance(allowed, int):
            allowed = {allowed}
        typ = spl[int(p)]
        if typ not in allowed and len(typ) not in allowed:
            return False
    return True


def _sign_rank(rows, r1):
    """F2 rank of the sign rows together with the all-ones row of -1."""
    masks = [int("".join(str(b) for b in row), 2) for row in rows if row]
    masks.append((1 << r1) - 1)
    rank = 0
    basis = []
    for m in masks:
        for b in basis:
            m = min(m, m ^ b)
        if m:
            basis.append(m)
            basis.sort(reverse=True)
            rank += 1
    return rank


def cor13_predicates(rec):
    """The three nested predicates for a totally real field: (i) trivial
    narrow 2-torsion, (ii) Cl+_S = Cl_S, (iii) S-units of all signatures."""
    p1 = rec.cl_plus_s2 == 1
    order = 1
    for d in rec.cl_s:
        order *= d
    order_plus = 1
    for d in rec.cl_plus_s:
        order_plus *= d
    p2 = order == order_plus
    p3 = _sign_rank(rec.sign_rows, 3) == 3
    if (p1 and not p2) or (p2 and not p3):
        raise AssertionError(f"predicate nesting violated for {rec.form}")
    return p1, p2, p3


def _dec12(frac):
    """Exact 12-digit decimal rendering of a Fraction."""
    sign = "-" if frac < 0 else ""
    frac = abs(frac)
    scaled = (frac.numerator * 10 ** 12 + frac.denominator // 2) // frac.denominator
    digits = str(scaled).rjust(13, "0")
    return f"{sign}{digits[:-12]}.{digits[-12:]}"


def _avg_entry(total, count, predicted=None):
    entry = {"sum": total, "count": count}
    if count:
        val = Fraction(total, count)
        entry["value"] = f"{val.numerator}/{val.denominator}"
        entry["decimal"] = _dec12(val)
    if predicted is not None:
        entry["predicted"] = f"{predicted.numerator}/{predicted.denominator}"
        entry["predicted_decimal"] = _dec12(predicted)
        if count:
            dev = Fraction(total, count) - predicted
            entry["deviation"] = f"{dev.numerator}/{dev.denominator}"
            entry["deviation_decimal"] = _dec12(dev)
    return entry


def _conditioned_r_values(cfg):
    """The list of pinned r_p values when the conditioning fixes the
    number of primes above each p in S (and touches nothing else); None
    otherwise.  This is the regime of the fixed-local-algebra averages."""
    cond = cfg.conditioning
    if not cond or set(int(p) for p in cond) != set(cfg.s):
        return None
    rvs = []
    for p in cfg.s:
        allowed = cond[p]
        if isinstance(allowed, int):
            rvs.append(allowed)
            continue
        vals = {a if isinstance(a, int) else len(a) for a in allowed}
        if len(vals) != 1:
            return None
        rvs.append(vals.pop())
    return rvs


def _section(records, cfg, totally_real):
    recs = [r for r in records if r.totally_real == totally_real]
    n = len(recs)
    s = cfg.s
    rvs = _conditioned_r_values(cfg)
    r_cond = None if rvs is None else sum(rv - 1 for rv in rvs)

    def pred_cl(narrow):
        if rvs is not None:
            return densities.predict_cl_avg_conditioned(
                totally_real, narrow, rvs
            )
        return densities.predict_cl_avg(totally_real, narrow, s)

    out = {"count": n}
    avgs = {}
    avgs["cl2"] = _avg_entry(
        sum(r.cl2 for r in recs), n,
        None if cfg.conditioning
        else densities.predict_cl_avg(totally_real, False, ()),
    )
    avgs["cl_s2"] = _avg_entry(sum(r.cl_s2 for r in recs), n, pred_cl(False))
    if cfg.plus and totally_real:
        avgs["cl_plus2"] = _avg_entry(
            sum(r.cl_plus2 for r in recs), n,
            None if cfg.conditioning
            else densities.predict_cl_avg(True, True, ()),
        )
        avgs["cl_plus_s2"] = _avg_entry(
            sum(r.cl_plus_s2 for r in recs), n, pred_cl(True)
        )
    if r_cond is None:
        avgs["2nu_cl_s2"] = _avg_entry(
            sum((1 << r.nu(s)) * r.cl_s2 for r in recs), n,
            densities.predict_2nu_cl_avg(totally_real, False, s),
        )
        if cfg.plus and totally_real:
            avgs["2nu_cl_plus_s2"] = _avg_entry(
                sum((1 << r.nu(s)) * r.cl_plus_s2 for r in recs), n,
                densities.predict_2nu_cl_avg(True, True, s),
            )
        c = 3 if totally_real else 2
        avgs["selmer"] = _avg_entry(
            sum((1 << (r.nu(s) + c)) * r.cl_s2 for r in recs), n,
            densities.predict_selmer_avg(totally_real, s),
        )
    if s == (2,):
        r1 = 3 if totally_real else 1
        for m in range(4):
            tors = (
                (lambda r: r.cl_plus_s2) if (m in (2, 3) and totally_real)
                else (lambda r: r.cl_s2)
            )
            shift = r1 if m == 1 else 0
            total = sum(
                tors(r) << (r.r_p(2) - 1 + shift) for r in recs
            )
            avgs[f"k2n_mod{m}"] = _avg_entry(
                total, n,
                densities.predict_kgroup_avg(totally_real, m)
                if r_cond is None else None,
            )
    out["averages"] = avgs
    if totally_real and s:
        floor = densities.predict_cor13_floor(s)
        props = {}
        flags = [cor13_predicates(r) for r in recs]
        for i, name in enumerate(
            ("narrow_s_2torsion_trivial", "narrow_s_equals_s",
             "all_unit_signatures")
        ):
            props[name] = _avg_entry(sum(1 for f in flags if f[i]), n, floor)
        out["proportions"] = props
    return out


# --------------------------------------------------------------------------
# the driver
# --------------------------------------------------------------------------


def field_stream(cfg):
    """Enumerated fields for the survey, sorted by (|disc|, disc, form)."""
    sign = {"real": 1, "complex": -1, "both": 0}[cfg.signature]
    return enumeration.enumerate_fields(cfg.x_max, sign)


def resume(cfg):
    """Cached records for the configuration, keyed by form."""
    if cfg.cache_path and os.path.exists(cfg.cache_path):
        return cache_read(cfg.cache_path, cfg)
    return {}


def run_survey(cfg, progress=None):
    """Survey report for the configuration; deterministic and exact."""
    fields = field_stream(cfg)
    cached = resume(cfg)
    writer = CacheWriter(cfg.cache_path, cfg) if cfg.cache_path else None
    todo = [rec for rec in fields if rec.form not in cached]

    def work(chunk):
        out = []
        for rec in chunk:
            fr = compute_record(rec, cfg)
            if writer:
                writer.write(fr)
            out.append(fr)
            if progress:
                progress(fr)
        return out

    if cfg.parallelism > 1 and todo:
        # shard by discriminant intervals; merge is deterministic because
        # aggregation reads the combined dict in canonical order
        shards = [[] for _ in range(cfg.parallelism)]
        for i, rec in enumerate(todo):
            shards[i * cfg.parallelism // len(todo)].append(rec)
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as ex:
            results = list(ex.map(work, shards))
        computed = [fr for chunk in results for fr in chunk]
    else:
        computed = work(todo)

    by_form = dict(cached)
    for fr in computed:
        by_form[fr.form] = fr

    ordered = []
    for rec in fields:
        fr = by_form[rec.form]
        ordered.append(fr)

    report = {
        "schema": SCHEMA_VERSION,
        "config": {
            "x_max": cfg.x_max,
            "checkpoints": list(cfg.checkpoints),
            "signature": cfg.signature,
            "s": list(cfg.s),
            "conditioning": {
                str(p): sorted(v) if isinstance(v, (set, frozenset)) else v
                for p, v in (cfg.conditioning or {}).items()
            } or None,
            "plus": cfg.plus,
            "include_cyclic": cfg.include_cyclic,
        },
        "checkpoints": [],
    }
    for x in cfg.checkpoints:
        window = [fr for fr in ordered if abs(fr.disc) <= x]
        n_cyc = sum(1 for fr in window if fr.is_cyclic)
        n_sat = sum(1 for fr in window if fr.sat_failed)
        usable = [
            fr for fr in window
            if not fr.sat_failed
            and (cfg.include_cyclic or not fr.is_cyclic)
            and _matches_conditioning(fr, cfg.conditioning)
        ]
        entry = {
            "x": x,
            "excluded": {
                "cyclic": 0 if cfg.include_cyclic else n_cyc,
                "saturation_failures": n_sat,
            },
            "sections": {},
        }
        if cfg.signature in ("real", "both"):
            entry["sections"]["real"] = _section(usable, cfg, True)
        if cfg.signature in ("complex", "both"):
            entry["sections"]["complex"] = _section(usable, cfg, False)
        report["checkpoints"].append(entry)
    return report


def proportion_predicates(cfg):
    """Cor-1.3 style proportions over the totally real fields of the
    survey; returns the three proportions at x_max as Fractions."""
    cfg2 = SurveyConfig(
        x_max=cfg.x_max, checkpoints=(cfg.x_max,), signature="real",
        s=cfg.s, conditioning=cfg.conditioning, plus=True,
        include_cyclic=cfg.include_cyclic,
        oracle_threshold=cfg.oracle_threshold,
        parallelism=cfg.parallelism, cache_path=cfg.cache_path,
    )
    rep = run_survey(cfg2)
    props = rep["checkpoints"][-1]["sections"]["real"]["proportions"]
    out = []
    for name in ("narrow_s_2torsion_trivial", "narrow_s_equals_s",
                 "all_unit_signatures"):
        e = props[name]
        out.append(Fraction(e["sum"], e["count"]) if e["count"] else None)
    return tuple(out)


# --------------------------------------------------------------------------
# report rendering
# --------------------------------------------------------------------------


def report_json(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def report_csv(report):
    lines = [
        "x,signature,kind,metric,count,sum,value,decimal,"
        "predicted,predicted_decimal"
    ]
    for cp in report["checkpoints"]:
        x = cp["x"]
        for sig in sorted(cp["sections"]):
            sec = cp["sections"][sig]
            for kind, table in (
                ("average", sec.get("averages", {})),
                ("proportion", sec.get("proportions", {})),
            ):
                for metric in sorted(table):
                    e = table[metric]
                    lines.append(
                        f"{x},{sig},{kind},{metric},{e['count']},{e['sum']},"
                        f"{e.get('value', '')},{e.get('decimal', '')},"
                        f"{e.get('predicted', '')},"
                        f"{e.get('predicted_decimal', '')}"
                    )
        lines.append(
            f"{x},both,excluded,cyclic,{cp['excluded']['cyclic']},,,,,"
        )
        lines.append(
            f"{x},both,excluded,saturation_failures,"
            f"{cp['excluded']['saturation_failures']},,,,,"
        )
    return "\n".join(lines) + "\n"
