"""Enumeration of cubic fields by bounded discriminant.

Forms are generated directly inside the per-class-unique reduction domains of
forms.py, so no global duplicate elimination is needed:

* disc < 0: a > 0, 0 < u < 1, v > 1 (exact integer inequalities), with loop
  bounds a^4 <= 16 X / 27, |theta| <= (X/3)^{1/4}/a + 1/2 and
  v <= (16 X / (27 a^4))^{1/3} derived from |disc| = a^4 q(theta)^2 (4v - u^2).

* disc > 0: Hessian box |Q| <= P <= R with a > 0 and b > 0 (or b = 0,
  d > 0), using 27 a^2 <= 4 P <= 4 sqrt(X), the identity 3 a R = b Q - c P
  (so c <= b - 3a), and |Q| <= P to bound d.  The b-sign rule picks exactly
  one member among the four with reduced Hessian (the +-f and +-(f o J)
  pairs), so interior classes appear once; only the Hessian walls |Q| = P
  and P = R can hold several members, and those are deduplicated through
  reduce_form on that thin slice.

Maximality uses the multiple-root-mod-p criterion: a primitive irreducible f
is non-maximal at p iff f has a multiple projective root (x0:y0) mod p with
f(x0, y0) = 0 mod p^2 (well defined because the gradient vanishes at a
multiple root).  Only p with p^2 | disc can occur, so candidates are grouped
by such p and tested in bulk.  rings.is_maximal_at is the independent
Round-2 style authority the tests compare against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import forms

_SIEVE_PRIMES = (5, 7, 11, 13, 17, 19)


def _primes_upto(n):
    if n < 2:
        return []
    s = np.ones(n + 1, dtype=bool)
    s[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if s[p]:
            s[p * p :: p] = False
    return [int(p) for p in np.nonzero(s)[0]]


def _isqrt_array(x):
    """Exact floor-sqrt of a nonnegative int64 array."""
    s = np.sqrt(x.astype(np.float64)).astype(np.int64)
    s = np.maximum(s, 0)
    for _ in range(3):
        too_big = s * s > x
        s[too_big] -= 1
        low = (s + 1) * (s + 1) <= x
        s[low] += 1
    return s


def _expand_ranges(lo, hi):
    """Concatenate arange(lo[i], hi[i]+1); returns (index, value) arrays."""
    lens = np.maximum(hi - lo + 1, 0)
    keep = lens > 0
    lo, lens = lo[keep], lens[keep]
    idx_keep = np.nonzero(keep)[0]
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    idx = np.repeat(idx_keep, lens)
    starts = np.repeat(np.cumsum(lens) - lens, lens)
    vals = np.repeat(lo, lens) + (np.arange(total, dtype=np.int64) - starts)
    return idx, vals


def _disc_vec(a, b, c, d):
    return (
        18 * a * b * c * d
        + b * b * c * c
        - 4 * a * c ** 3
        - 4 * b ** 3 * d
        - 27 * a * a * d * d
    )


def _neg_blocks(X):
    """Domain representatives with -X <= disc < 0, one (a, b) slab at a time.

    Yields (a, b, c, d, D) int64 arrays.
    """
    amax = int((16 * X / 27) ** 0.25) + 1
    for a in range(1, amax + 1):
        if 27 * a ** 4 > 16 * X:
            break
        tmax = (X / 3) ** 0.25 / a + 0.5
        vmax = (16 * X / (27 * a ** 4)) ** (1 / 3)
        b_lo = -int(a * tmax) - 1
        b_hi = int(a * (1 + tmax)) + 1
        for b in range(b_lo, b_hi + 1):
            c_lo = -abs(b) - a - 1
            c_hi = int(a * vmax) + abs(b) + a + 1
            c = np.arange(c_lo, c_hi + 1, dtype=np.int64)
            # disc(d) = -27 a^2 d^2 + beta d + gamma ; need disc >= -X
            beta = 18 * a * b * c - 4 * b ** 3
            gamma = b * b * c * c - 4 * a * c ** 3
            rad = beta * beta + 108 * a * a * (gamma + X)
            ok = rad >= 0
            if not ok.any():
                continue
            c, beta, rad = c[ok], beta[ok], rad[ok]
            s = _isqrt_array(rad)
            den = 54 * a * a
            d_lo = -((s - beta) // den)  # ceil((beta - s)/den)
            d_hi = (beta + s) // den
            ci, d = _expand_ranges(d_lo, d_hi)
            if d.size == 0:
                continue
            cc = c[ci]
            D = _disc_vec(a, b, cc, d)
            keep = (D < 0) & (D >= -X)
            # u > 0 ; u < 1 ; v > 1  (exact integer forms)
            keep &= a * d - b * cc < 0
            e = a - b
            keep &= e ** 3 + b * e * e + a * cc * e + a * a * d > 0
            keep &= d * d + a * cc - b * d - a * a > 0
            if keep.any():
                n = int(keep.sum())
                yield (
                    np.full(n, a, dtype=np.int64),
                    np.full(n, b, dtype=np.int64),
                    cc[keep],
                    d[keep],
                    D[keep],
                )


def _pos_blocks(X):
    """Domain representatives with 0 < disc <= X plus a boundary flag.

    Yields (a, b, c, d, D, boundary) arrays; boundary marks Hessian-box
    walls where per-class uniqueness can fail.
    """
    sX = math.isqrt(X)
    amax = int(math.sqrt(4 * sX / 27)) + 1
    for a in range(1, amax + 1):
        if 27 * a * a > 4 * sX:
            break
        bmax = (3 * a + math.sqrt(max(4 * sX - 27 * a * a, 0))) / 2
        for b in range(0, int(bmax) + 2):
            c_lo = -((sX - b * b) // (3 * a))  # ceil((b^2 - sX)/(3a))
            c_hi = min((b * b - 1) // (3 * a), b - 3 * a)
            if c_hi < c_lo:
                continue
            c = np.arange(c_lo, c_hi + 1, dtype=np.int64)
            P = b * b - 3 * a * c
            # |Q| <= P with Q = bc - 9ad
            d_lo = -((P - b * c) // (9 * a))  # ceil((bc - P)/(9a))
            d_hi = (b * c + P) // (9 * a)
            ci, d = _expand_ranges(d_lo, d_hi)
            if d.size == 0:
                continue
            cc, PP = c[ci], P[ci]
            Q = b * cc - 9 * a * d
            R = cc * cc - 3 * b * d
            keep = (np.abs(Q) <= PP) & (PP <= R)
            if b == 0:
                keep &= d > 0
            if not keep.any():
                continue
            cc, d, PP, Q, R = cc[keep], d[keep], PP[keep], Q[keep], R[keep]
            D = _disc_vec(a, b, cc, d)
            keep = (D > 0) & (D <= X)
            if not keep.any():
                continue
            cc, d, PP, Q, R = cc[keep], d[keep], PP[keep], Q[keep], R[keep]
            boundary = (np.abs(Q) == PP) | (PP == R)
            n = cc.size
            yield (
                np.full(n, a, dtype=np.int64),
                np.full(n, b, dtype=np.int64),
                cc,
                d,
                _disc_vec(a, b, cc, d),
                boundary,
            )


def _irreducible_mask(a, b, c, d):
    """Vectorized irreducibility: sieve the monic model z^3 + b z^2 + ac z
    + a^2 d for roots modulo small primes, then verify survivors exactly."""
    mask = (a != 0) & (d != 0)
    suspect = mask.copy()
    p1 = a * c
    p0 = a * a * d
    for q in _SIEVE_PRIMES:
        if not suspect.any():
            break
        z = np.arange(q, dtype=np.int64)
        bv = (b % q)[suspect, None]
        pv1 = (p1 % q)[suspect, None]
        pv0 = (p0 % q)[suspect, None]
        vals = (((z + bv) * z + pv1) * z + pv0) % q
        has_root = (vals == 0).any(axis=1)
        idx = np.nonzero(suspect)[0]
        suspect[idx[~has_root]] = False
    for i in np.nonzero(suspect)[0]:
        if _has_integer_root(int(b[i]), int(p1[i]), int(p0[i])):
            mask[i] = False
    return mask


def _has_integer_root(p2, p1, p0):
    return bool(forms._integer_roots_monic_cubic(p2, p1, p0))


def _maximal_mask(a, b, c, d, D, X):
    """Davenport-Heilbronn style maximality for primitive forms, vectorized
    per prime p with p^2 | D."""
    n = a.size
    mask = np.ones(n, dtype=bool)
    content = np.gcd(np.gcd(np.abs(a), np.abs(b)), np.gcd(np.abs(c), np.abs(d)))
    mask &= content == 1
    absD = np.abs(D)
    for p in _primes_upto(math.isqrt(X)):
        p2 = p * p
        sel = np.nonzero(mask & (absD % p2 == 0))[0]
        if sel.size == 0:
            continue
        aa, bb, ccv, dd = a[sel], b[sel], c[sel], d[sel]
        x = np.arange(p, dtype=np.int64)
        fv = (((aa[:, None] % p * x + bb[:, None]) * x + ccv[:, None]) * x + dd[:, None]) % p
        fpv = ((3 * aa[:, None] % p * x + 2 * bb[:, None]) * x + ccv[:, None]) % p
        mult = (fv == 0) & (fpv == 0)
        bad = np.zeros(sel.size, dtype=bool)
        ii, xx = np.nonzero(mult)
        if ii.size:
            # f at the integer lift modulo p^2
            av, bv2, cv2, dv2 = aa[ii] % p2, bb[ii] % p2, ccv[ii] % p2, dd[ii] % p2
            val = (((av * xx % p2 + bv2) * xx % p2 + cv2) * xx % p2 + dv2) % p2
            np.logical_or.at(bad, ii, val == 0)
        # multiple root at infinity: p | a and p | b; lift value is a mod p^2
        inf = (aa % p == 0) & (bb % p == 0)
        bad |= inf & (aa % p2 == 0)
        mask[sel[bad]] = False
    return mask


def is_maximal_form_dh(f, p):
    """Scalar multiple-root criterion at one prime (for cross-checking)."""
    a, b, c, d = f
    if all(x % p == 0 for x in f):
        return False
    p2 = p * p
    for x in range(p):
        if (((a * x + b) * x + c) * x + d) % p == 0 and (
            (3 * a * x + 2 * b) * x + c
        ) % p == 0:
            if (((a * x + b) * x + c) * x + d) % p2 == 0:
                return False
    if a % p == 0 and b % p == 0 and a % p2 == 0:
        return False
    return True


@dataclass(frozen=True, order=True)
class CubicFieldRecord:
    """One cubic field: |disc|-ordered key, discriminant, canonical form."""

    absdisc: int
    disc: int
    form: tuple

    @property
    def totally_real(self):
        return self.disc > 0


def _collect(X, sign):
    cols = [np.empty(0, dtype=np.int64) for _ in range(5)]
    flags = np.empty(0, dtype=bool)
    parts = []
    fparts = []
    if sign <= 0:
        for blk in _neg_blocks(X):
            parts.append(blk)
            fparts.append(np.zeros(blk[0].size, dtype=bool))
    if sign >= 0:
        for blk in _pos_blocks(X):
            parts.append(blk[:5])
            fparts.append(blk[5])
    if parts:
        cols = [np.concatenate([p[i] for p in parts]) for i in range(5)]
        flags = np.concatenate(fparts)
    return cols, flags


def enumerate_classes(X, sign=0, maximal_only=True):
    """Irreducible form classes with 0 < |disc| <= X (both signs if sign=0).

    Returns (a, b, c, d, D, boundary) int64/bool arrays, one row per class
    except possibly on the positive-discriminant Hessian boundary (callers
    that need exact class lists deduplicate via `fields_from_arrays`).
    """
    (a, b, c, d, D), boundary = _collect(X, sign)
    m = _irreducible_mask(a, b, c, d)
    if maximal_only:
        m &= _maximal_mask(a, b, c, d, D, X)
    return a[m], b[m], c[m], d[m], D[m], boundary[m]


def fields_from_arrays(a, b, c, d, D, boundary):
    """Deduplicate boundary classes and emit sorted CubicFieldRecords."""
    recs = {}
    order = np.lexsort((d, c, b, a, D, np.abs(D)))
    # group boundary rows by disc; interior rows are unique already
    bnd_by_disc = {}
    for i in order:
        key = (int(abs(D[i])), int(D[i]))
        f = (int(a[i]), int(b[i]), int(c[i]), int(d[i]))
        if boundary[i]:
            bnd_by_disc.setdefault(int(D[i]), []).append(f)
        else:
            recs[(key, f)] = CubicFieldRecord(key[0], key[1], f)
    for Dv, flist in bnd_by_disc.items():
        by_class = {}
        for f in flist:
            by_class.setdefault(forms.reduce_form(f), []).append(f)
        for members in by_class.values():
            f = min(members)
            key = (abs(Dv), Dv)
            recs[(key, f)] = CubicFieldRecord(abs(Dv), Dv, f)
    return sorted(recs.values())


def enumerate_fields(X, sign=0):
    """All cubic fields with 0 < |disc| <= X, sorted by (|disc|, disc, form).

    sign > 0: totally real only; sign < 0: complex only; 0: both.
    """
    return fields_from_arrays(*enumerate_classes(X, sign=sign, maximal_only=True))


def count_fields(X, checkpoints=None, sign=0):
    """Counts of cubic fields with |disc| <= x for each checkpoint x.

    Avoids building record objects; boundary classes are deduplicated the
    same way as in enumerate_fields.
    """
    if checkpoints is None:
        checkpoints = [X]
    a, b, c, d, D, boundary = enumerate_classes(X, sign=sign, maximal_only=True)
    absD = np.abs(D)
    interior = ~boundary
    seen = set()
    bnd_absD = []
    for i in np.nonzero(boundary)[0]:
        f = (int(a[i]), int(b[i]), int(c[i]), int(d[i]))
        key = (int(D[i]), forms.reduce_form(f))
        if key not in seen:
            seen.add(key)
            bnd_absD.append(int(absD[i]))
    bnd_absD = np.asarray(bnd_absD, dtype=np.int64)
    return [
        int((absD[interior] <= x).sum())
        + int((bnd_absD <= x).sum() if bnd_absD.size else 0)
        for x in checkpoints
    ]


# --------------------------------------------------------------------------
# Brute-force oracle: monic-generator search (small discriminants only)
# --------------------------------------------------------------------------


def oracle_discriminants(limit):
    """Discriminant multiset of all cubic fields with |disc| <= limit,
    found independently of the form machinery: every cubic field has a
    monic integral generator with trace in {0, 1} and
    T2 <= trace^2/3 + (2/sqrt(3)) sqrt(|disc|/3)  (Hunter's bound), which
    boxes the remaining coefficients; sympy's round_two computes the field
    discriminant and field_isomorphism removes duplicates."""
    import sympy
    from sympy.abc import x as _x
    from sympy.polys.numberfields.basis import round_two
    from sympy import field_isomorphism

    t2 = 1 / 3 + (2 / math.sqrt(3)) * math.sqrt(limit / 3)
    s_bound = int(t2) + 1  # |sum of pairwise root products| <= T2
    n_bound = int((t2 / 3) ** 1.5) + 1
    found = {}  # disc -> list of sympy polys (distinct fields)
    for t in (0, 1):
        for s in range(-s_bound, s_bound + 1):
            for n in range(-n_bound, n_bound + 1):
                if n == 0:
                    continue
                poly = sympy.Poly(_x ** 3 - t * _x ** 2 + s * _x - n, _x)
                d0 = int(poly.discriminant())
                if d0 == 0 or not _disc_plausible(d0, limit):
                    continue
                if not poly.is_irreducible:
                    continue
                _zk, dk = round_two(poly)
                dk = int(dk)
                if abs(dk) > limit:
                    continue
                bucket = found.setdefault(dk, [])
                # compare against every real conjugate: field_isomorphism
                # works with concrete numbers, and for totally real fields
                # only one of the three conjugates lands inside Q(beta)
                nreal = 3 if dk > 0 else 1
                roots = [sympy.rootof(poly.as_expr(), k) for k in range(nreal)]
                if any(
                    field_isomorphism(alpha, beta) is not None
                    for beta in bucket
                    for alpha in roots
                ):
                    continue
                bucket.append(roots[0])
    out = []
    for dk, fields_list in found.items():
        out.extend([dk] * len(fields_list))
    return sorted(out, key=lambda v: (abs(v), v))


def _disc_plausible(d0, limit):
    """Whether d0 = dK * f^2 is possible for some |dK| <= limit."""
    import sympy

    core = 1
    for p, e in sympy.factorint(abs(d0)).items():
        if e % 2:
            core *= p
    return core <= limit
