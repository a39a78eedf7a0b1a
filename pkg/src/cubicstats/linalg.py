"""Exact integer linear algebra: HNF, SNF, kernels.

Everything here works on small dense matrices represented as lists of lists
of Python ints (rows).  Determinism matters more than asymptotics: the survey
contract requires byte-identical output across runs, so all pivoting rules are
fixed and no randomness is used.
"""

from __future__ import annotations


def mat_copy(a):
    return [row[:] for row in a]


def mat_mul(a, b):
    n, k = len(a), len(b[0])
    m = len(b)
    out = [[0] * k for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(m):
            att = ai[t]
            if att:
                bt = b[t]
                for j in range(k):
                    oi[j] += att * bt[j]
    return out


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def hnf(rows):
    """Row-style Hermite normal form (echelon, positive pivots, reduced above).

    Returns a new list of nonzero rows; input is not modified.
    """
    a = [row[:] for row in rows if any(row)]
    if not a:
        return []
    ncols = len(a[0])
    out = []
    col = 0
    while col < ncols and a:
        # rows with nonzero entry in this column
        live = [r for r in a if r[col] != 0]
        rest = [r for r in a if r[col] == 0]
        if not live:
            a = rest
            col += 1
            continue
        # euclidean elimination within the column
        while len(live) > 1:
            live.sort(key=lambda r: (abs(r[col]), r))
            piv = live[0]
            newlive = [piv]
            for r in live[1:]:
                q = r[col] // piv[col]
                rr = [x - q * y for x, y in zip(r, piv)]
                if rr[col] != 0:
                    newlive.append(rr)
                elif any(rr):
                    rest.append(rr)
            live = newlive
        piv = live[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        # reduce previously fixed rows above the pivot
        for r in out:
            q = r[col] // piv[col]
            if q:
                for j in range(ncols):
                    r[j] -= q * piv[j]
        out.append(piv)
        a = rest
        col += 1
    return out


def det3(m):
    (a, b, c), (d, e, f), (g, h, i) = m
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def adj3(m):
    """Adjugate of a 3x3 integer matrix (m * adj = det * I)."""
    (a, b, c), (d, e, f), (g, h, i) = m
    return [
        [e * i - f * h, c * h - b * i, b * f - c * e],
        [f * g - d * i, a * i - c * g, c * d - a * f],
        [d * h - e * g, b * g - a * h, a * e - b * d],
    ]


def snf_with_right_transform(rows, ncols):
    """Smith normal form of the row lattice.

    Returns (divisors, V) where divisors is the length-ncols list
    [d_1, ..., d_r, 0, ..., 0] with d_1 | d_2 | ... and V is a unimodular
    ncols x ncols matrix such that for any vector x (as a row), the class of
    x in Z^ncols / rowspace is given coordinate-wise by (x·V) mod divisors
    (entry i taken mod d_i, with d_i = 0 meaning a free Z coordinate).
    """
    a = [row[:] for row in rows if any(row)]
    v = identity(ncols)
    n = len(a)
    if n == 0:
        return [0] * ncols, v

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def addmul_col(dst, src, q):
        # col_dst += q * col_src
        for r in a:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    def neg_col(i):
        for r in a:
            r[i] = -r[i]
        for r in v:
            r[i] = -r[i]

    t = 0
    rank = min(n, ncols)
    while t < rank:
        # find pivot: smallest |entry| in the remaining block, fixed tie-break
        best = None
        for i in range(t, n):
            for j in range(t, ncols):
                x = a[i][j]
                if x and (best is None or abs(x) < abs(best[2])):
                    best = (i, j, x)
        if best is None:
            break
        bi, bj, _ = best
        a[t], a[bi] = a[bi], a[t]
        if bj != t:
            swap_cols(t, bj)
        # clear row t and column t
        while True:
            # column t below pivot
            dirty = False
            for i in range(t + 1, n):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        dirty = True
            # row t right of pivot
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    addmul_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break
        if a[t][t] == 0:
            break
        if a[t][t] < 0:
            for j in range(ncols):
                a[t][j] = -a[t][j]
        # divisibility condition: fold any remaining entry not divisible
        fixed = True
        for i in range(t + 1, n):
            for j in range(t + 1, ncols):
                if a[i][j] % a[t][t]:
                    # add column j to column t, restart pivot at t
                    addmul_col(t, j, 1)
                    a[t], a[i] = a[i], a[t]
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            t += 1

    divisors = [0] * ncols
    for i in range(min(n, ncols)):
        divisors[i] = abs(a[i][i])
    return divisors, v


def snf_divisors(rows, ncols):
    d, _ = snf_with_right_transform(rows, ncols)
    return d


def kernel_basis(rows, ncols):
    """Basis of the left-null space {x : x . A = 0} over Z for A given as rows? No:
    returns a basis of the integer kernel of the map Z^n -> Z^ncols sending the
    i-th standard vector to rows[i]; i.e. integer combinations of the rows that
    vanish.
    """
    n = len(rows)
    # HNF of [A | I]; rows with zero A-part give kernel combinations.
    aug = [list(rows[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    h = hnf(aug)
    out = []
    for r in h:
        if not any(r[:ncols]):
            out.append(r[ncols:])
    return out


def solve_left(rows, target):
    """Solve x . A = target over Z where A is given by rows; None if unsolvable."""
    n = len(rows)
    if n == 0:
        return None if any(target) else []
    ncols = len(rows[0])
    aug = [list(rows[i]) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    h = hnf(aug)
    # reduce target against echelon rows
    t = list(target) + [0] * n
    for r in h:
        # pivot column of r within A-part
        pc = next((j for j in range(ncols) if r[j] != 0), None)
        if pc is None:
            continue
        if t[pc] % r[pc]:
            return None
        q = t[pc] // r[pc]
        if q:
            t = [x - q * y for x, y in zip(t, r)]
    if any(t[:ncols]):
        return None
    return [-x for x in t[ncols:]]


def lattice_index(rows, ncols):
    """Index of the row lattice in Z^ncols (0 if not full rank)."""
    d = snf_divisors(rows, ncols)
    idx = 1
    for x in d:
        if x == 0:
            return 0
        idx *= x
    return idx
