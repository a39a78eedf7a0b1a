"""Cubic rings attached to binary cubic forms (Delone-Faddeev).

For f = (a, b, c, d) the ring has Z-basis {1, w, t} with

    w*t = -a*d,   w^2 = -a*c - b*w + a*t,   t^2 = -b*d - d*w + c*t,

whose discriminant equals disc(f).  If r is a root of f(x, 1) then the
embeddings send w -> a*r and t -> a*r^2 + b*r + c.

Maximality at p is decided by a Round-2 style test: compute the radical of
R/pR as the kernel of the iterated Frobenius, lift it to the ideal
I_p = pR + rad, and check whether the multiplier ring {x : x I_p <= I_p}
inside (1/p)R is strictly larger than R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import linalg
from .forms import disc as form_disc


@dataclass
class CubicRing:
    """Multiplication data for the cubic ring of a form."""

    form: tuple
    mw: list = field(repr=False)  # action of w on basis rows [1, w, t]
    mt: list = field(repr=False)  # action of t
    discriminant: int = 0

    @classmethod
    def from_form(cls, f):
        a, b, c, d = f
        mw = [[0, 1, 0], [-a * c, -b, a], [-a * d, 0, 0]]
        mt = [[0, 0, 1], [-a * d, 0, 0], [-b * d, -d, c]]
        return cls(form=tuple(f), mw=mw, mt=mt, discriminant=form_disc(f))

    # elements are tuples (x0, x1, x2) meaning x0 + x1 w + x2 t

    def mul_matrix(self, x):
        """Matrix of multiplication by x (rows act on row vectors)."""
        x0, x1, x2 = x
        m = [[x0 if i == j else 0 for j in range(3)] for i in range(3)]
        for i in range(3):
            for j in range(3):
                m[i][j] += x1 * self.mw[i][j] + x2 * self.mt[i][j]
        return m

    def mul(self, x, y):
        m = self.mul_matrix(x)
        return tuple(
            y[0] * m[0][j] + y[1] * m[1][j] + y[2] * m[2][j] for j in range(3)
        )

    def pow(self, x, n):
        r = (1, 0, 0)
        b = x
        while n:
            if n & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            n >>= 1
        return r

    def norm(self, x):
        return linalg.det3(self.mul_matrix(x))

    def trace(self, x):
        a, b, c, d = self.form
        return 3 * x[0] - b * x[1] + c * x[2]

    def char_poly(self, x):
        """Monic characteristic polynomial z^3 + c2 z^2 + c1 z + c0 of x."""
        m = self.mul_matrix(x)
        tr = m[0][0] + m[1][1] + m[2][2]
        # sum of principal 2x2 minors
        s2 = (
            m[0][0] * m[1][1] - m[0][1] * m[1][0]
            + m[0][0] * m[2][2] - m[0][2] * m[2][0]
            + m[1][1] * m[2][2] - m[1][2] * m[2][1]
        )
        return (-linalg.det3(m), s2, -tr)

    def trace_form_det(self):
        basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        g = [
            [self.trace(self.mul(bi, bj)) for bj in basis]
            for bi in basis
        ]
        return linalg.det3(g)

    # ---------------- maximality ----------------

    def frobenius_matrix(self, p):
        rows = []
        for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            v = self.pow(e, p)
            rows.append([x % p for x in v])
        return rows

    def radical_mod_p(self, p):
        """Basis (mod p) of the radical of R/pR."""
        k = 1
        while p ** k < 3:
            k += 1
        m = self.frobenius_matrix(p)
        for _ in range(k - 1):
            m = [[sum(m[i][t] * m[t][j] for t in range(3)) % p for j in range(3)] for i in range(3)]
        return _nullspace_mod_p(m, p)

    def is_maximal_at(self, p):
        rad = self.radical_mod_p(p)
        if not rad:
            return True
        # I_p = pR + lifts of radical
        gen = [[p, 0, 0], [0, p, 0], [0, 0, p]] + [list(v) for v in rad]
        u = linalg.hnf(gen)
        det_u = u[0][0] * u[1][1] * u[2][2]
        adj = linalg.adj3(u)
        n = p * det_u
        # congruence rows: columns of the 9x3 system L(v) = 0 mod n
        cols = []
        for i in range(3):
            e = [0, 0, 0]
            e[i] = 1
            m = self.mul_matrix(tuple(e))
            w = linalg.mat_mul(u, m)  # images of the I_p basis under mult by e_i
            t = linalg.mat_mul(w, adj)
            cols.append([t[r][cidx] for r in range(3) for cidx in range(3)])
        rows = cols + [[n if j == i else 0 for j in range(9)] for i in range(9)]
        ker = linalg.kernel_basis(rows, 9)
        sol = [k[:3] for k in ker]
        h = linalg.hnf(sol)
        if len(h) < 3:
            return False  # degenerate; cannot happen for pZ^3 <= sol
        idx = h[0][0] * h[1][1] * h[2][2]
        return idx == p ** 3

    def is_maximal(self, disc_factors=None):
        """Maximal at every prime; disc_factors may pass the factorization."""
        if disc_factors is None:
            import sympy

            disc_factors = sympy.factorint(abs(self.discriminant))
        for p, e in disc_factors.items():
            if e >= 2 and not self.is_maximal_at(p):
                return False
        return True

    def embeddings(self, roots):
        """Embedding images of the basis for given roots of f(x, 1)."""
        a, b, c, _d = self.form
        return [[1.0, a * r, a * r * r + b * r + c] for r in roots]


def _nullspace_mod_p(m, p):
    """Nullspace basis of {v : v . m = 0 mod p} for a 3x3 matrix."""
    # row-reduce m^T acting on the right; work with v as row vectors
    a = [[m[i][j] % p for j in range(3)] for i in range(3)]
    # we solve v * a = 0; gaussian elim on columns of a <-> rows of a^T
    at = [[a[j][i] for j in range(3)] for i in range(3)]
    # now solve at . v^T = 0 (standard right-nullspace of at)
    mat = [row[:] for row in at]
    piv_cols = []
    r = 0
    for ccol in range(3):
        piv = None
        for i in range(r, 3):
            if mat[i][ccol] % p:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = pow(mat[r][ccol], -1, p)
        mat[r] = [(x * inv) % p for x in mat[r]]
        for i in range(3):
            if i != r and mat[i][ccol] % p:
                fct = mat[i][ccol]
                mat[i] = [(x - fct * y) % p for x, y in zip(mat[i], mat[r])]
        piv_cols.append(ccol)
        r += 1
    free = [j for j in range(3) if j not in piv_cols]
    basis = []
    for fcol in free:
        v = [0, 0, 0]
        v[fcol] = 1
        for i, pc in enumerate(piv_cols):
            v[pc] = (-mat[i][fcol]) % p
        basis.append(tuple(x % p for x in v))
    return basis


def ring_of(f):
    return CubicRing.from_form(tuple(f))
