"""Integral ideal arithmetic in cubic orders via Hermite normal form.

An ideal is stored as the HNF basis (3 rows) of its coordinate lattice in
the ring basis {1, w, t}.  Primes above p are found from the F_p-points of
the multiplication table: ring homomorphisms O -> F_p are the solutions
(x, y) of

    x y = -ad,   x^2 = -ac - bx + ay,   y^2 = -bd - dx + cy   (mod p)

and each kernel (p, w - x, t - y) is a degree-one prime.  The leftover
factor (if any) is recovered from the radical dimension: inert primes are
pO itself, and the residue-degree-two prime of a 12-split p is the
annihilator of the degree-one maximal ideal in O/pO.  Ramification indices
follow from norms plus a pO subset P^2 test in the ambiguous 1^1 2^1 case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg


@dataclass(frozen=True)
class Ideal:
    ring: object
    hnf: tuple  # 3 rows, tuple of tuples

    @classmethod
    def from_rows(cls, ring, rows):
        h = linalg.hnf([list(r) for r in rows])
        if len(h) != 3:
            raise ValueError("ideal lattice is not full rank")
        return cls(ring, tuple(tuple(r) for r in h))

    @classmethod
    def from_elements(cls, ring, elements):
        """O-ideal generated by the given elements."""
        rows = []
        basis = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        for g in elements:
            for e in basis:
                rows.append(list(ring.mul(g, e)))
        return cls.from_rows(ring, rows)

    @classmethod
    def whole_ring(cls, ring):
        return cls(ring, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    @classmethod
    def principal(cls, ring, alpha):
        return cls.from_elements(ring, [alpha])

    def norm(self):
        return abs(self.hnf[0][0] * self.hnf[1][1] * self.hnf[2][2])

    def contains(self, v):
        return linalg.solve_left([list(r) for r in self.hnf], list(v)) is not None

    def contains_ideal(self, other):
        return all(self.contains(r) for r in other.hnf)

    def mul(self, other):
        rows = []
        for u in self.hnf:
            for v in other.hnf:
                rows.append(list(self.ring.mul(u, v)))
        return Ideal.from_rows(self.ring, rows)

    def mul_element(self, alpha):
        return Ideal.from_rows(
            self.ring, [list(self.ring.mul(u, alpha)) for u in self.hnf]
        )

    def add(self, other):
        return Ideal.from_rows(self.ring, list(self.hnf) + list(other.hnf))

    def pow(self, n):
        out = Ideal.whole_ring(self.ring)
        base = self
        while n:
            if n & 1:
                out = out.mul(base)
            base = base.mul(base)
            n >>= 1
        return out

    def basis_rows(self):
        return [list(r) for r in self.hnf]


def valuation(ideal, prime, cap=64):
    """v_P(ideal) by P-power membership (exact; powers are cached)."""
    v = 0
    power = prime
    while v < cap:
        if not power.contains_ideal(ideal):
            return v
        v += 1
        power = power.mul(prime)
    raise ArithmeticError("valuation cap exceeded")


def element_valuations(ring, alpha, primes):
    """Valuations of the principal ideal (alpha) at the given primes."""
    ia = Ideal.principal(ring, alpha)
    return [valuation(ia, P) for P in primes]


@dataclass(frozen=True)
class PrimeIdeal:
    ideal: Ideal
    p: int
    e: int
    f: int

    def norm(self):
        return self.p ** self.f


def _fp_points(form, p):
    """All (x, y) in F_p^2 defining a homomorphism O -> F_p."""
    a, b, c, d = (v % p for v in form)
    g = np.indices((p, p)).reshape(2, -1)
    x, y = g[0].astype(np.int64), g[1].astype(np.int64)
    ok = (x * y + a * d) % p == 0
    ok &= (x * x + a * c + b * x - a * y) % p == 0
    ok &= (y * y + b * d + d * x - c * y) % p == 0
    return list(zip(x[ok].tolist(), y[ok].tolist()))


def primes_above(ring, p):
    """Prime ideals above p in a p-maximal cubic ring, with (e, f)."""
    from .rings import _nullspace_mod_p  # radical helper shares conventions

    pts = _fp_points(ring.form, p)
    degree_one = []
    for x, y in pts:
        rows = [[p, 0, 0], [-x, 1, 0], [-y, 0, 1]]
        degree_one.append(Ideal.from_rows(ring, rows))
    k = len(pts)
    if k == 3:
        return [PrimeIdeal(i, p, 1, 1) for i in degree_one]
    if k == 0:
        return [PrimeIdeal(Ideal.whole_ring(ring).mul_element((p, 0, 0)), p, 1, 3)]
    rad = ring.radical_mod_p(p)
    if k == 1:
        if len(rad) == 2:
            return [PrimeIdeal(degree_one[0], p, 3, 1)]
        # unramified 1 + 2 split: the f = 2 prime is the annihilator of the
        # degree-one maximal ideal inside O/pO, lifted together with pO
        m1 = degree_one[0]
        ann_rows = _annihilator_mod_p(ring, m1, p)
        rows = [[p, 0, 0], [0, p, 0], [0, 0, p]] + ann_rows
        p2 = Ideal.from_rows(ring, rows)
        return [
            PrimeIdeal(degree_one[0], p, 1, 1),
            PrimeIdeal(p2, p, 1, 2),
        ]
    # k == 2: types 1^1 + 2^1; exactly one of the primes is ramified
    p_ideal = Ideal.whole_ring(ring).mul_element((p, 0, 0))
    out = []
    for ideal in degree_one:
        ramified = ideal.mul(ideal).contains_ideal(p_ideal)
        out.append(PrimeIdeal(ideal, p, 2 if ramified else 1, 1))
    assert sorted(pr.e for pr in out) == [1, 2], (ring.form, p)
    return out


def _annihilator_mod_p(ring, m1, p):
    """Basis lifts of {v in O/pO : v * m1 = 0 mod p}."""
    rows_m = [[x % p for x in r] for r in m1.hnf]
    # v * m_j = 0 for each basis row m_j of the ideal mod p; as a linear
    # system in v: stack the 3x3 right-multiplication maps
    cols = []
    for i in range(3):
        e = [0, 0, 0]
        e[i] = 1
        img = [ring.mul(tuple(e), tuple(mj)) for mj in rows_m]
        cols.append([x % p for row in img for x in row])
    # solve sum_i v_i cols[i] = 0 mod p via nullspace of the 3x9 system
    mat = [[cols[i][j] for j in range(9)] for i in range(3)]
    basis = _nullspace_rect_mod_p(mat, p)
    return [list(v) for v in basis]


def _nullspace_rect_mod_p(mat, p):
    """Left nullspace {v : v . mat = 0 mod p} of a 3 x n matrix."""
    nrows = len(mat)
    ncols = len(mat[0])
    # gaussian elimination on the transpose
    at = [[mat[i][j] % p for i in range(nrows)] for j in range(ncols)]
    piv_cols = []
    r = 0
    m = [row[:] for row in at]
    for col in range(nrows):
        piv = None
        for i in range(r, len(m)):
            if m[i][col] % p:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][col], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] % p:
                f = m[i][col]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        piv_cols.append(col)
        r += 1
    free = [j for j in range(nrows) if j not in piv_cols]
    basis = []
    for fc in free:
        v = [0] * nrows
        v[fc] = 1
        for i, pc in enumerate(piv_cols):
            v[pc] = (-m[i][fc]) % p
        basis.append(tuple(v))
    return basis
