"""Archimedean data for cubic fields: embeddings, logs, signs, short vectors.

For a form (a, b, c, d) the basis {1, w, t} embeds through each root r of
f(x, 1) as (1, a r, a r^2 + b r + c).  Writing rho = a r (a root of the
monic model z^3 + b z^2 + ac z + a^2 d), the element x0 + x1 w + x2 t maps
to (x0 + c x2) + (x1 + (b/a) x2) rho + (x2/a) rho^2, a rational-coefficient
quadratic in rho — so real-embedding signs can be decided exactly by
isolating the real roots of the monic model in rational intervals.

Numerical embeddings use mpmath at 50 digits; everything downstream that
must be exact (signs, square-root reconstruction) verifies its answer in
integer arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np


# --------------------------------------------------------------------------
# exact real-root isolation for the monic model
# --------------------------------------------------------------------------


class ExactRealRoot:
    """One real root of z^3 + p2 z^2 + p1 z + p0 in a shrinking rational
    bracket (g(lo) and g(hi) have opposite signs, single root inside)."""

    def __init__(self, coeffs, lo, hi, sign_hi):
        self.p = coeffs
        self.lo, self.hi = lo, hi
        self.sign_hi = sign_hi  # sign of g just above the root

    def _g(self, z):
        p2, p1, p0 = self.p
        return ((z + p2) * z + p1) * z + p0

    def refine(self):
        m = (self.lo + self.hi) / 2
        v = self._g(m)
        if v == 0:  # rational root: cannot happen for irreducible models
            raise ArithmeticError("rational root in bracket")
        if (v > 0) == (self.sign_hi > 0):
            self.hi = m
        else:
            self.lo = m

    def sign_quadratic(self, c0, c1, c2, max_steps=20000):
        """Exact sign of c0 + c1 rho + c2 rho^2 at this root."""
        if c1 == 0 and c2 == 0:
            return (c0 > 0) - (c0 < 0)
        for _ in range(max_steps):
            lo, hi = self.lo, self.hi
            vals = [c0 + c1 * z + c2 * z * z for z in (lo, hi)]
            if c2 != 0:
                vtx = Fraction(-c1, 2 * c2) if not isinstance(c1, Fraction) else -c1 / (2 * c2)
                if lo < vtx < hi:
                    vals.append(c0 + c1 * vtx + c2 * vtx * vtx)
            if min(vals) > 0:
                return 1
            if max(vals) < 0:
                return -1
            self.refine()
        raise ArithmeticError("sign undecided")  # pragma: no cover


def isolate_real_roots(p2, p1, p0):
    """All real roots of an irreducible monic integer cubic, ascending."""
    def g(z):
        return ((z + p2) * z + p1) * z + p0

    bound = Fraction(2 + max(abs(p2), abs(p1), abs(p0)))
    pts = [-bound, bound]
    disc_d = p2 * p2 - 3 * p1
    if disc_d > 0:
        # critical points split the line into monotone pieces
        s = Fraction(math.isqrt(disc_d * 4 ** 40), 2 ** 40)  # ~sqrt, exact enough
        for cp in (Fraction(-p2 - s, 3), Fraction(-p2 + s, 3)):
            for eps in (Fraction(-1, 1024), Fraction(1, 1024)):
                z = cp + eps
                if -bound < z < bound:
                    pts.append(z)
    pts = sorted(set(pts))
    roots = []
    for lo, hi in zip(pts, pts[1:]):
        vlo, vhi = g(lo), g(hi)
        if vlo == 0 or vhi == 0:
            raise ArithmeticError("rational sample hit a root; model reducible?")
        if (vlo > 0) != (vhi > 0):
            roots.append(ExactRealRoot((p2, p1, p0), lo, hi, 1 if vhi > 0 else -1))
    return roots


# --------------------------------------------------------------------------
# numerical embeddings
# --------------------------------------------------------------------------


class Embeddings:
    """Embedding data for the cubic field of an irreducible form."""

    def __init__(self, form, dps=50):
        import mpmath

        self.form = tuple(form)
        a, b, c, d = self.form
        self.dps = dps
        with mpmath.workdps(dps):
            roots = mpmath.polyroots([a, b, c, d], maxsteps=200, extraprec=80)
            real = sorted(
                [r.real for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-dps // 2)]
            )
            cplx = [r for r in roots if abs(mpmath.im(r)) >= mpmath.mpf(10) ** (-dps // 2)]
            self.totally_real = len(real) == 3
            self.r1 = len(real)
            self.r2 = len(cplx) // 2
            # embedding order: real roots ascending, then one per complex pair
            chosen = list(real) + [r for r in cplx if r.imag > 0]
            self.roots = chosen
            self.basis_images = [
                (1, a * r, a * r * r + b * r + c) for r in chosen
            ]
        # exact isolation of the real roots of the monic model, matching the
        # ascending real-root order via rho = a * r (a > 0 preserves order)
        self.exact_real = isolate_real_roots(b, a * c, a * a * d)
        self._hp_basis = {}  # refined basis images keyed by dps level
        self._embc = np.array(
            [[complex(v) for v in bi] for bi in self.basis_images]
        )
        self._embc_abs = np.abs(self._embc)
        self._real_f = np.real(self._embc[: self.r1])
        self._real_f_abs = np.abs(self._real_f)

    # ---- numerics ----

    def _work_dps(self, x):
        # enough headroom that |sigma x| ~ 1/|x|^2 does not cancel to zero
        bits = max(abs(int(v)) for v in x).bit_length() if any(x) else 1
        return self.dps + (2 * bits) // 3

    def _basis_at(self, wd):
        """Basis images accurate enough for working precision wd."""
        import mpmath

        if wd <= self.dps:
            return self.basis_images
        level = 1 << (wd - 1).bit_length()  # cache in power-of-two steps
        if level not in self._hp_basis:
            a, b, c, d = self.form
            with mpmath.workdps(level + 20):
                roots = mpmath.polyroots(
                    [a, b, c, d], maxsteps=400, extraprec=level
                )
                real = sorted(
                    [
                        r.real
                        for r in roots
                        if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-level // 2)
                    ]
                )
                chosen = list(real) + [r for r in roots if mpmath.im(r) > 0]
                self._hp_basis[level] = [
                    (1, a * r, a * r * r + b * r + c) for r in chosen
                ]
        return self._hp_basis[level]

    def embed(self, x):
        import mpmath

        wd = self._work_dps(x)
        basis = self._basis_at(wd)
        with mpmath.workdps(wd):
            return [
                x[0] * 1 + x[1] * bi[1] + x[2] * bi[2] for bi in basis
            ]

    def abs_embed(self, x):
        return [abs(v) for v in self.embed(x)]

    def log_vector(self, x):
        """(log|sigma x|) with complex places doubled; length r1 + r2.

        Self-checking: the weighted logs must sum to log|N(x)|, which is
        known exactly; precision escalates until they do.
        """
        import mpmath

        if not hasattr(self, "_norm_ring"):
            from . import rings

            self._norm_ring = rings.CubicRing.from_form(self.form)
        nrm = self._norm_ring.norm(tuple(x))
        if nrm == 0:
            raise ZeroDivisionError("log_vector of a zero divisor")
        wd = self._work_dps(x)
        while wd <= (1 << 18):
            basis = self._basis_at(wd)
            with mpmath.workdps(wd):
                vals = [
                    abs(x[0] + x[1] * bi[1] + x[2] * bi[2]) for bi in basis
                ]
                if all(v > 0 for v in vals):
                    out = [
                        (1 if i < self.r1 else 2) * mpmath.log(v)
                        for i, v in enumerate(vals)
                    ]
                    resid = abs(sum(out) - mpmath.log(abs(nrm)))
                    tol = 1e-9 * max(1.0, max(abs(float(t)) for t in out))
                    if resid < tol:
                        return out
            wd *= 2
        raise ArithmeticError(f"log_vector did not converge for {x}")

    def log_vector_f(self, x):
        """Float log vector; falls back to log_vector under cancellation."""
        try:
            xf = np.array([float(v) for v in x])
        except OverflowError:
            return np.array([float(t) for t in self.log_vector(x)])
        vals = self._embc @ xf
        mags = np.abs(vals)
        scale = self._embc_abs @ np.abs(xf)
        if not np.all(np.isfinite(mags)) or np.any(mags < 1e-11 * scale):
            return np.array([float(t) for t in self.log_vector(x)])
        w = np.ones(len(mags))
        w[self.r1 :] = 2
        return w * np.log(mags)

    def t2_gram(self):
        """3x3 float Gram matrix of the T2 form sum |sigma x|^2 (complex
        embeddings counted twice)."""
        import mpmath

        g = np.zeros((3, 3))
        for i, bi in enumerate(self.basis_images):
            w = 1 if i < self.r1 else 2
            for j in range(3):
                for k in range(3):
                    g[j, k] += w * float(mpmath.re(bi[j] * mpmath.conj(bi[k])))
        return (g + g.T) / 2

    # ---- exact signs ----

    def _quad_coeffs(self, x):
        a, b, c, _d = self.form
        return (
            Fraction(x[0]) + Fraction(x[2]) * c,
            Fraction(x[1]) + Fraction(x[2] * b, a),
            Fraction(x[2], a),
        )

    def signs(self, x):
        """Exact signs of x at the real places (tuple of +-1).

        A float evaluation decides whenever it is safely away from zero
        (roundoff is a tiny multiple of the accumulated magnitude); the
        rational-interval fallback settles the close calls.
        """
        vals = scales = None
        try:
            xf = np.array([float(v) for v in x])
            vals = self._real_f @ xf
            scales = self._real_f_abs @ np.abs(xf)
        except OverflowError:
            pass
        coeffs = None
        out = []
        for i in range(self.r1):
            if vals is not None and abs(vals[i]) > 1e-10 * scales[i]:
                out.append(1 if vals[i] > 0 else -1)
                continue
            if coeffs is None:
                coeffs = self._quad_coeffs(x)
            s = self.exact_real[i].sign_quadratic(*coeffs)
            if s == 0:
                raise ArithmeticError("zero element has no sign")
            out.append(s)
        return tuple(out)

    def sign_bits(self, x):
        """F_2 vector: 1 where the real embedding is negative."""
        return tuple(1 if s < 0 else 0 for s in self.signs(x))

    def is_totally_positive(self, x):
        return all(s > 0 for s in self.signs(x))


# --------------------------------------------------------------------------
# short vectors
# --------------------------------------------------------------------------


def fincke_pohst(gram, basis_rows, bound, limit=2_000_000):
    """Integer combinations x of the lattice rows with Q(x) <= bound, where
    Q has the given Gram matrix in the *ambient* coordinates.  Returns an
    array of coordinate rows (in ambient coordinates), excluding 0 and
    keeping one of each +-pair."""
    ints = [list(map(int, r)) for r in basis_rows]
    B = np.asarray(ints, dtype=np.float64)
    G = B @ np.asarray(gram, dtype=np.float64) @ B.T
    try:
        L0 = np.linalg.cholesky(G)
        _lll_rows([list(map(float, r)) for r in L0], ints)
        B = np.asarray(ints, dtype=np.float64)
        G = B @ np.asarray(gram, dtype=np.float64) @ B.T
    except np.linalg.LinAlgError:
        pass
    # Cholesky with a tiny ridge for numerical safety
    for ridge in (0.0, 1e-12, 1e-9, 1e-6):
        try:
            L = np.linalg.cholesky(G + ridge * np.eye(3) * max(1.0, G.max()))
            break
        except np.linalg.LinAlgError:
            continue
    else:  # pragma: no cover
        raise ArithmeticError("Gram matrix not positive definite")
    return _enumerate_triangular(L.T, ints, bound, limit)


def fincke_pohst_skewed(emb, t, basis_rows, bound, limit=2_000_000):
    """Short vectors of the skewed form sum_v w_v e^{-2 t_v} |sigma_v(x)|^2
    on the given row lattice.  The scales e^{-2t} can span hundreds of
    orders of magnitude, so the triangular factor is built in mpmath from
    high-precision basis images; the enumeration itself then runs in
    floats, whose range the *factor* (scale span e^{|t|}) fits easily."""
    import mpmath

    t = list(map(float, t))
    digits = 40 + int(4.0 * (max(t) - min(t)) / math.log(10)) if t else 40
    basis = emb._basis_at(digits)
    with mpmath.workdps(digits + 10):
        rows = []
        for i, bi in enumerate(basis):
            s = mpmath.e ** mpmath.mpf(-t[i])
            if i < emb.r1:
                rows.append([s * v for v in bi])
            else:
                s2 = s * mpmath.sqrt(2)
                rows.append([s2 * mpmath.re(v) for v in bi])
                rows.append([s2 * mpmath.im(v) for v in bi])
        vecs = []
        for r in basis_rows:
            vecs.append([sum(rows[i][j] * int(r[j]) for j in range(3))
                         for i in range(3)])
        ints = [list(map(int, r)) for r in basis_rows]
        # A skewed lattice is typically very elongated; without LLL the
        # enumeration tree below can hit millions of nodes.
        _lll_rows(vecs, ints)
        vecs = []
        for r in ints:
            vecs.append([sum(rows[i][j] * int(r[j]) for j in range(3))
                         for i in range(3)])
        G = mpmath.matrix(
            [[mpmath.fdot(vecs[i], vecs[j]) for j in range(3)] for i in range(3)]
        )
        L = mpmath.cholesky(G)
        R = np.array(
            [[float(L[j, i]) for j in range(3)] for i in range(3)]
        )
    return _enumerate_triangular(R, ints, bound, limit)


def _lll_rows(vecs, ints, delta=None):
    """In-place LLL reduction of the row vectors `vecs` (floats or mpmath
    reals, possibly spanning hundreds of orders of magnitude), applying the
    same unimodular row operations to the integer coordinate rows `ints`.
    Only `ints` is updated; callers needing the reduced images rebuild them
    from the reduced coordinates.

    The reduction itself runs in exact integer/Fraction arithmetic on a
    scaled-integer proxy of `vecs`.  Any unimodular transform is a valid
    change of basis for the true lattice, so rounding the proxy can only
    cost reduction quality, never correctness; high-precision arithmetic
    therefore never enters the LLL loop (where it used to dominate the
    principality tests at large regulator)."""
    import mpmath

    dnum, dden = (99, 100) if delta is None else delta
    n = len(vecs)
    mags = [abs(mpmath.mpf(v)) for row in vecs for v in row]
    big = max(mags)
    if big == 0:
        return
    small = min(m for m in mags if m > 0)
    span = min(int(mpmath.log(big / small, 2)) + 1, 4096)
    shift = 64 + span - int(mpmath.floor(mpmath.log(big, 2)))
    prox = [
        [int(mpmath.nint(mpmath.ldexp(mpmath.mpf(v), shift))) for v in row]
        for row in vecs
    ]

    # Integral LLL (Cohen alg. 2.6.7): all state in plain integers, with
    # d[i] the Gram determinants and lam[i][j] = d[j] * mu[i][j].
    gram = [[sum(a * b for a, b in zip(prox[i], prox[j])) for j in range(n)]
            for i in range(n)]
    d = [1] * (n + 1)
    lam = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, i + 1):
            u = gram[i - 1][j - 1]
            for t in range(1, j):
                u = (d[t] * u - lam[i][t] * lam[j][t]) // d[t - 1]
            if j < i:
                lam[i][j] = u
            else:
                if u <= 0:  # proxy rows collapsed; leave basis as is
                    return
                d[i] = u

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l]:
            q = (2 * lam[k][l] + d[l]) // (2 * d[l])
            ints[k - 1] = [a - q * b
                           for a, b in zip(ints[k - 1], ints[l - 1])]
            lam[k][l] -= q * d[l]
            for i in range(1, l):
                lam[k][i] -= q * lam[l][i]

    k = 2
    while k <= n:
        red(k, k - 1)
        if dden * d[k] * d[k - 2] < dnum * d[k - 1] ** 2 - dden * lam[k][k - 1] ** 2:
            ints[k - 1], ints[k - 2] = ints[k - 2], ints[k - 1]
            for j in range(1, k - 1):
                lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
            lb = lam[k][k - 1]
            b = (d[k - 2] * d[k] + lb * lb) // d[k - 1]
            for i in range(k + 1, n + 1):
                t = lam[i][k]
                lam[i][k] = (d[k] * lam[i][k - 1] - lb * t) // d[k - 1]
                lam[i][k - 1] = (b * t + lb * lam[i][k]) // d[k]
            d[k - 1] = b
            k = max(2, k - 1)
        else:
            for l in range(k - 2, 0, -1):
                red(k, l)
            k += 1


def _enumerate_triangular(R, basis_rows, bound, limit):
    out = []
    b3 = math.sqrt(bound) / R[2, 2]
    for x3 in range(0, int(b3) + 2):
        # partial norm after fixing x3
        rem3 = bound - (x3 * R[2, 2]) ** 2
        if rem3 < 0:
            continue
        c2 = -x3 * R[1, 2] / R[1, 1]
        h2 = math.sqrt(rem3) / R[1, 1]
        for x2 in range(int(math.floor(c2 - h2)) - 1, int(math.ceil(c2 + h2)) + 2):
            q2 = (x2 * R[1, 1] + x3 * R[1, 2]) ** 2
            rem2 = rem3 - q2
            if rem2 < 0:
                continue
            c1 = -(x2 * R[0, 1] + x3 * R[0, 2]) / R[0, 0]
            h1 = math.sqrt(rem2) / R[0, 0]
            lo = int(math.floor(c1 - h1)) - 1
            hi = int(math.ceil(c1 + h1)) + 2
            xs = np.arange(lo, hi)
            q1 = (xs * R[0, 0] + x2 * R[0, 1] + x3 * R[0, 2]) ** 2
            good = xs[q1 <= rem2 + 1e-9]
            for x1 in good:
                if x3 == 0 and (x2 < 0 or (x2 == 0 and x1 <= 0)):
                    continue
                out.append((int(x1), int(x2), int(x3)))
                if len(out) > limit:  # pragma: no cover
                    raise ArithmeticError("short vector enumeration too large")
    if not out:
        return np.zeros((0, 3), dtype=np.int64)
    coords = np.asarray(out, dtype=np.int64)
    if all(abs(int(v)) < 2 ** 40 for row in basis_rows for v in row):
        return coords @ np.asarray(basis_rows, dtype=np.int64)
    # LLL on a strongly skewed lattice can leave basis entries beyond
    # int64; fall back to exact Python integers
    res = [
        [sum(int(c) * int(b) for c, b in zip(cv, col))
         for col in zip(*basis_rows)]
        for cv in out
    ]
    return np.asarray(res, dtype=object)


def sqrt_in_ring(ring, emb, beta):
    """Exact square root of beta in the ring, or None.

    Tries every sign/branch combination of the numerical square roots of
    the embeddings of beta, solves for integer coordinates, and verifies
    gamma^2 = beta exactly.
    """
    import mpmath
    import itertools

    with mpmath.workdps(emb.dps):
        vals = emb.embed(beta)
        roots0 = [mpmath.sqrt(mpmath.mpc(v)) for v in vals]
        n_real = emb.r1
        for signs in itertools.product((1, -1), repeat=3 if n_real == 3 else 2):
            if n_real == 3:
                target = [signs[i] * roots0[i] for i in range(3)]
            else:
                # complex pair: conjugate root determined by the chosen one
                target = [signs[0] * roots0[0], signs[1] * roots0[1]]
                target.append(mpmath.conj(target[1]))
            mm = mpmath.matrix(3, 3)
            rhs = mpmath.matrix(3, 1)
            rows = emb.basis_images
            if n_real == 3:
                full_rows = rows
            else:
                full_rows = [rows[0], rows[1], tuple(mpmath.conj(v) for v in rows[1])]
            for i in range(3):
                for j in range(3):
                    mm[i, j] = full_rows[i][j]
                rhs[i] = target[i]
            try:
                sol = mpmath.lu_solve(mm, rhs)
            except Exception:  # pragma: no cover
                continue
            cand = tuple(int(mpmath.nint(sol[i].real)) for i in range(3))
            if ring.mul(cand, cand) == tuple(beta):
                return cand
    return None
