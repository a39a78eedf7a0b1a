"""Integral binary cubic forms and their GL2(Z) reduction theory.

A form f = (a, b, c, d) stands for a x^3 + b x^2 y + c x y^2 + d y^3.  Classes
of irreducible forms under the substitution action of GL2(Z) correspond to
cubic rings (Delone-Faddeev), and maximal irreducible classes to cubic fields.

Reduction strategy:

* disc > 0: the Hessian covariant P x^2 + Q xy + R y^2 (P = b^2 - 3ac,
  Q = bc - 9ad, R = c^2 - 3bd) is positive definite.  We Gauss-reduce it, pick
  the lexicographically smaller of the two reduced Hessians coming from the
  proper and improper side, and take the lexicographic minimum of the finitely
  many forms in the class whose Hessian equals that canonical Hessian.

* disc < 0: the form factors over R as (linear) x (positive definite
  quadratic); normalizing the quadratic factor of a x^3 + ... to
  x^2 + u x y + v y^2 (u = b/a + t, v = -d/(a t), t the real root), the class
  has exactly one representative with a > 0, 0 < u < 1 and v > 1.  (The
  boundaries u in {0, 1} and v = 1 would force the real root rational, which
  irreducibility rules out, and the relevant quadratic has no extra
  automorphs, so uniqueness is strict.)  All comparisons are decided exactly
  by isolating the real root with rational interval bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class ReducibleFormError(ValueError):
    """Raised when an operation requires an irreducible form."""


def disc(f):
    """Discriminant 18abcd + b^2 c^2 - 4 a c^3 - 4 b^3 d - 27 a^2 d^2."""
    a, b, c, d = f
    return (
        18 * a * b * c * d
        + b * b * c * c
        - 4 * a * c ** 3
        - 4 * b ** 3 * d
        - 27 * a * a * d * d
    )


def hessian(f):
    """Coefficients (P, Q, R) of the Hessian covariant.

    disc of the Hessian is -3 disc(f), so it is positive definite exactly
    when disc(f) > 0 (with P > 0 after sign normalization).
    """
    a, b, c, d = f
    return (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)


def act(g, f):
    """Substitution action: (g.f)(x, y) = f(p x + q y, r x + s y)."""
    (p, q), (r, s) = g
    a, b, c, d = f
    a2 = a * p ** 3 + b * p * p * r + c * p * r * r + d * r ** 3
    b2 = (
        3 * a * p * p * q
        + b * (p * p * s + 2 * p * q * r)
        + c * (2 * p * r * s + q * r * r)
        + 3 * d * r * r * s
    )
    c2 = (
        3 * a * p * q * q
        + b * (2 * p * q * s + q * q * r)
        + c * (p * s * s + 2 * q * r * s)
        + 3 * d * r * s * s
    )
    d2 = a * q ** 3 + b * q * q * s + c * q * s * s + d * s ** 3
    return (a2, b2, c2, d2)


def content(f):
    return math.gcd(math.gcd(abs(f[0]), abs(f[1])), math.gcd(abs(f[2]), abs(f[3])))


def _integer_roots_monic_cubic(p2, p1, p0):
    """All integer roots of z^3 + p2 z^2 + p1 z + p0, exactly."""

    def val(z):
        return ((z + p2) * z + p1) * z + p0

    bound = 1 + max(abs(p2), abs(p1), abs(p0))
    # split into monotone pieces at the (real) critical points
    crit = []
    disc_d = p2 * p2 - 3 * p1
    if disc_d >= 0:
        s = math.isqrt(disc_d)
        crit = sorted({(-p2 - s) // 3, (-p2 + s) // 3})
    pts = sorted({-bound, bound, *[min(max(t, -bound), bound) for t in crit],
                  *[min(max(t + 1, -bound), bound) for t in crit]})
    roots = []
    for lo, hi in zip(pts, pts[1:]):
        vlo, vhi = val(lo), val(hi)
        for z, v in ((lo, vlo), (hi, vhi)):
            if v == 0 and z not in roots:
                roots.append(z)
        if vlo * vhi < 0:
            a, b = lo, hi
            while b - a > 1:
                m = (a + b) // 2
                vm = val(m)
                if vm == 0:
                    if m not in roots:
                        roots.append(m)
                    break
                if (vm > 0) == (vhi > 0):
                    b = m
                else:
                    a = m
    return sorted(roots)


def is_irreducible(f):
    """Irreducibility over Q.

    A cubic form is reducible iff it has a rational projective zero:
    a = 0 (zero at (1:0)) or f(x, 1) has a rational root, equivalently the
    monic resolvent z^3 + b z^2 + ac z + a^2 d has an integer root z = a t.
    """
    a, b, c, d = f
    if a == 0 or d == 0:
        return False
    return not _integer_roots_monic_cubic(b, a * c, a * a * d)


# --------------------------------------------------------------------------
# Exact sign arithmetic in Q(rho), rho the single real root of a monic cubic
# --------------------------------------------------------------------------


class _RealRoot:
    """The unique real root rho of an irreducible monic integer cubic with
    negative discriminant, with exact rational interval isolation."""

    def __init__(self, p2, p1, p0):
        self.p = (p2, p1, p0)
        # float seed, then certified rational bracket
        coeffs = [1.0, float(p2), float(p1), float(p0)]
        try:
            import numpy as np

            rts = np.roots(coeffs)
            real = [r.real for r in rts if abs(r.imag) < 1e-6 * (1 + abs(r))]
            seed = real[0] if real else 0.0
        except Exception:
            seed = 0.0
        w = Fraction(1)
        s = Fraction(seed).limit_denominator(10 ** 6)
        lo, hi = s - w, s + w
        while not (self._h(lo) < 0 < self._h(hi)):
            w *= 2
            lo, hi = s - w, s + w
            if w > Fraction(10) ** 30:  # pragma: no cover
                raise ArithmeticError("root bracketing failed")
        self.lo, self.hi = lo, hi

    def _h(self, z):
        p2, p1, p0 = self.p
        return ((z + p2) * z + p1) * z + p0

    def _refine(self):
        m = (self.lo + self.hi) / 2
        if self._h(m) < 0:
            self.lo = m
        else:
            self.hi = m

    def sign_quadratic(self, c0, c1, c2):
        """Exact sign of c0 + c1 rho + c2 rho^2 (rationals; not all zero
        unless identically zero, since rho has degree 3)."""
        if c1 == 0 and c2 == 0:
            return (c0 > 0) - (c0 < 0)
        for _ in range(10000):
            lo, hi = self.lo, self.hi
            vals = [c0 + c1 * z + c2 * z * z for z in (lo, hi)]
            if c2 != 0:
                vtx = -c1 / (2 * c2)
                if lo < vtx < hi:
                    vals.append(c0 + c1 * vtx + c2 * vtx * vtx)
            if min(vals) > 0:
                return 1
            if max(vals) < 0:
                return -1
            self._refine()
        raise ArithmeticError("sign not decided")  # pragma: no cover


class _NegDiscCovariant:
    """Exact comparisons for u = b/a + t and v = -d/(a t) of a form with
    a > 0 and disc < 0, via rho = a t."""

    def __init__(self, f):
        a, b, c, d = f
        self.f = f
        self.root = _RealRoot(b, a * c, a * a * d)
        self.sign_t = 1 if d < 0 else -1  # t = -d/(a v'), v' > 0

    def u_cmp(self, r: Fraction):
        """sign(u - r); u - r = (b - r a + rho)/a."""
        a, b, _c, _d = self.f
        return self.root.sign_quadratic(Fraction(b) - r * a, 1, 0)

    def v_cmp(self, r: Fraction):
        """sign(v - r); with rho = a t we have v = -d/rho, so
        sign(v - r) = sign(-d - r rho) * sign(rho)."""
        _a, _b, _c, d = self.f
        s = self.root.sign_quadratic(Fraction(-d), -r, 0)
        return s * self.sign_t


def _neg_reduce(f, max_steps=20000):
    """The unique representative with a > 0, 0 < u < 1, v > 1 (disc < 0)."""
    a, b, c, d = f
    if a < 0:
        a, b, c, d = -a, -b, -c, -d
    for _ in range(max_steps):
        if a < 0:
            a, b, c, d = -a, -b, -c, -d
        cov = _NegDiscCovariant((a, b, c, d))
        # translate u into (-1, 1]: u + 2m
        # float estimate of u then exact adjustment
        lo, hi = cov.root.lo, cov.root.hi
        uf = float(b) / a + float((lo + hi) / 2) / a
        m = -math.floor((uf + 1) / 2)
        for _ in range(64):
            # want -1 < u + 2m < 1
            if cov.u_cmp(Fraction(-1 - 2 * m)) <= 0:
                m += 1
            elif cov.u_cmp(Fraction(1 - 2 * m)) >= 0:
                m -= 1
            else:
                break
        else:  # pragma: no cover
            raise ArithmeticError("translation step diverged")
        if m:
            a, b, c, d = (
                a,
                b + 3 * a * m,
                c + 2 * b * m + 3 * a * m * m,
                d + c * m + b * m * m + a * m ** 3,
            )
            cov = _NegDiscCovariant((a, b, c, d))
        if cov.v_cmp(Fraction(1)) < 0:
            # invert: f(-y, x)
            a, b, c, d = d, -c, b, -a
            continue
        if cov.u_cmp(Fraction(0)) < 0:
            a, b, c, d = a, -b, c, -d
        return (a, b, c, d)
    raise ArithmeticError("reduction did not terminate")  # pragma: no cover


# --------------------------------------------------------------------------
# disc > 0: Hessian reduction
# --------------------------------------------------------------------------


def _gauss_reduce_posdef(P, Q, R):
    """Gauss-reduce a positive definite (P, Q, R); returns (form, transform)
    with the convention -P < Q <= P <= R and Q >= 0 when P == R."""
    g = [[1, 0], [0, 1]]

    def apply_t(m):
        nonlocal P, Q, R, g
        # (x, y) -> (x + m y, y): P' = P, Q' = Q + 2 m P, R' = P m^2 + Q m + R
        R = P * m * m + Q * m + R
        Q = Q + 2 * m * P
        g = [[g[0][0], g[0][0] * m + g[0][1]], [g[1][0], g[1][0] * m + g[1][1]]]

    def apply_s():
        nonlocal P, Q, R, g
        P, Q, R = R, -Q, P
        g = [[g[0][1], -g[0][0]], [g[1][1], -g[1][0]]]

    for _ in range(10000):
        m = (-Q + P) // (2 * P)
        if m:
            apply_t(m)
        if P > R:
            apply_s()
            continue
        if Q == -P:
            apply_t(1)
        if P == R and Q < 0:
            apply_s()
        return (P, Q, R), g
    raise ArithmeticError("Gauss reduction did not terminate")  # pragma: no cover


def _vectors_of_value(P, Q, R, target):
    """All integer (x, y) with P x^2 + Q x y + R y^2 == target (pos def)."""
    out = []
    dd = 4 * P * R - Q * Q
    ymax = math.isqrt(4 * P * target // dd) + 1
    for y in range(-ymax, ymax + 1):
        # P x^2 + Q y x + (R y^2 - target) = 0
        disc_x = Q * Q * y * y - 4 * P * (R * y * y - target)
        if disc_x < 0:
            continue
        s = math.isqrt(disc_x)
        if s * s != disc_x:
            continue
        for sg in (s, -s) if s else (0,):
            num = -Q * y + sg
            if num % (2 * P) == 0:
                x = num // (2 * P)
                if (x, y) not in out:
                    out.append((x, y))
    return out


def _automorphs(P, Q, R):
    """All g in GL2(Z) with H(g.(x,y)) = H, H = (P, Q, R) pos def."""
    cols1 = _vectors_of_value(P, Q, R, P)
    cols2 = _vectors_of_value(P, Q, R, R)
    out = []
    for (p, r) in cols1:
        for (q, s) in cols2:
            if abs(p * s - q * r) != 1:
                continue
            # cross coefficient must match Q
            if 2 * P * p * q + Q * (p * s + q * r) + 2 * R * r * s == Q:
                out.append(((p, q), (r, s)))
    return out


def _pos_reduce(f):
    """Canonical representative for disc > 0 via the Hessian."""
    J = ((1, 0), (0, -1))
    sides = []
    for base in (f, act(J, f)):
        H = hessian(base)
        (P, Q, R), g = _gauss_reduce_posdef(*H)
        g_t = ((g[0][0], g[0][1]), (g[1][0], g[1][1]))
        sides.append(((P, Q, R), act(g_t, base)))
    hcan = min(h for h, _ in sides)
    cands = []
    for h, form in sides:
        if h != hcan:
            continue
        for gaut in _automorphs(*hcan):
            cands.append(act(gaut, form))
            cands.append(tuple(-x for x in act(gaut, form)))
    return min(cands)


def reduce_form(f):
    """Canonical GL2(Z)-class representative of an irreducible form."""
    f = tuple(int(x) for x in f)
    if not is_irreducible(f):
        raise ReducibleFormError(f"form {f} is reducible over Q")
    if disc(f) > 0:
        return _pos_reduce(f)
    return _neg_reduce(f)


def is_domain_representative(f):
    """Whether f lies in the enumeration domain (cheap integer tests only).

    For disc < 0 this is exact per-class-unique membership; for disc > 0 it
    is the Hessian box plus sign normalization, unique away from Hessian
    boundary cases (callers deduplicate those through reduce_form).
    """
    a, b, c, d = f
    D = disc(f)
    if D == 0 or a <= 0:
        return False
    if D < 0:
        # u > 0, u < 1, v > 1 in integer form
        if not (a * d - b * c < 0):
            return False
        e = a - b
        if not (e ** 3 + b * e * e + a * c * e + a * a * d > 0):
            return False
        return d * d + a * c - b * d - a * a > 0
    P, Q, R = hessian(f)
    if not (abs(Q) <= P <= R):
        return False
    return b > 0 or (b == 0 and d > 0)


@dataclass(frozen=True)
class BinaryCubicForm:
    """Thin wrapper used at API boundaries; internals pass plain tuples."""

    a: int
    b: int
    c: int
    d: int

    @property
    def coeffs(self):
        return (self.a, self.b, self.c, self.d)

    def disc(self):
        return disc(self.coeffs)

    def reduced(self):
        return BinaryCubicForm(*reduce_form(self.coeffs))

    def is_irreducible(self):
        return is_irreducible(self.coeffs)

    def __str__(self):
        return f"({self.a},{self.b},{self.c},{self.d})"
