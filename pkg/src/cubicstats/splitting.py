"""Splitting types of rational primes in cubic fields.

For a maximal form f and a prime p, the structure of A = O/pO determines how
p splits.  The radical of A is the kernel of the iterated Frobenius, and on
the etale quotient A/rad the number of fixed points of Frobenius counts the
primes above p:

    dim rad = 0:  unramified; r = dim ker(Frob - 1) gives
                  111 (r=3), 12 (r=2) or 3 (r=1)
    dim rad = 1:  one ramified prime of type 2^1 plus a 1^1
    dim rad = 2:  totally ramified, 3^1

A splitting type is a sorted tuple of (e, f) pairs; its length is r_p.  The
cache/report rendering is "e^f+e^f+..." with pairs in sorted order.
"""

from __future__ import annotations

from . import rings
from .rings import _nullspace_mod_p

# sorted (e, f) multisets; names follow the usual shorthand
TYPE_111 = ((1, 1), (1, 1), (1, 1))
TYPE_12 = ((1, 1), (1, 2))
TYPE_3 = ((1, 3),)
TYPE_121 = ((1, 1), (2, 1))
TYPE_13 = ((3, 1),)

ALL_TYPES = (TYPE_111, TYPE_12, TYPE_3, TYPE_121, TYPE_13)


def splitting_type(f, p, ring=None):
    """Splitting multiset of p in the cubic field of the maximal form f."""
    R = ring if ring is not None else rings.ring_of(f)
    rad = R.radical_mod_p(p)
    if len(rad) == 2:
        return TYPE_13
    if len(rad) == 1:
        return TYPE_121
    frob = R.frobenius_matrix(p)
    for i in range(3):
        frob[i][i] = (frob[i][i] - 1) % p
    r = len(_nullspace_mod_p(frob, p))
    return (TYPE_3, TYPE_12, TYPE_111)[r - 1]


def r_p(f, p, ring=None):
    """Number of primes above p."""
    return len(splitting_type(f, p, ring=ring))


def nu_s(f, s_primes, ring=None):
    """nu_S = total number of primes above the primes in S."""
    if ring is None:
        ring = rings.ring_of(f)
    return sum(len(splitting_type(f, p, ring=ring)) for p in s_primes)


def format_type(st):
    return "+".join(f"{e}^{fd}" for e, fd in st)


def parse_type(text):
    pairs = []
    for part in text.split("+"):
        e, fd = part.split("^")
        pairs.append((int(e), int(fd)))
    return tuple(sorted(pairs))


def is_ramified(st):
    return any(e > 1 for e, _ in st)


class LocalConditionSet:
    """Conditions of the form 'the splitting type at p lies in a given set'.

    Conditions may be given per prime either as a set of splitting types or
    as a set of allowed r_p values (int entries).
    """

    def __init__(self, conditions):
        self.conditions = {}
        for p, allowed in dict(conditions).items():
            if isinstance(allowed, int):
                allowed = {allowed}
            self.conditions[int(p)] = set(allowed)

    def matches(self, f, ring=None):
        if ring is None:
            ring = rings.ring_of(f)
        for p, allowed in self.conditions.items():
            st = splitting_type(f, p, ring=ring)
            if st not in allowed and len(st) not in allowed:
                return False
        return True

    def __repr__(self):
        return f"LocalConditionSet({self.conditions!r})"


def idempotent_count_bruteforce(f, p):
    """Number of idempotents of O/pO by exhausting all p^3 elements with
    numpy; equals 2^(number of primes above p).  Oracle for small p."""
    import numpy as np

    R = rings.ring_of(f)
    n = p ** 3
    grid = np.indices((p, p, p)).reshape(3, n).T.astype(np.int64)
    x0, x1, x2 = grid[:, 0], grid[:, 1], grid[:, 2]
    mw = np.array(R.mw, dtype=np.int64)
    mt = np.array(R.mt, dtype=np.int64)
    # square each element: y = x * x with x acting through its matrix
    out = np.zeros_like(grid)
    eye = np.eye(3, dtype=np.int64)
    for j in range(3):
        mj = x0[:, None] * eye[:, j] + x1[:, None] * mw[:, j] + x2[:, None] * mt[:, j]
        out[:, j] = (grid * mj).sum(axis=1) % p
    return int(((out == grid).all(axis=1)).sum())
