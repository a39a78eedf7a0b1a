"""Relaxed 2-Selmer groups and 2-torsion in even K-groups.

For a cubic field K and a finite set S of rational primes, the relaxed
2-Selmer group Sel_2^S(K) consists of the classes in K*/(K*)^2 whose
valuation at every prime outside S is even.  It sits in the short exact
sequence

    1 -> U_S / U_S^2 -> Sel_2^S(K) -> Cl(O_K)_S[2] -> 1

with U_S the S-units.  Dirichlet gives U_S = {+-1} x Z^(r1+r2-1+nu_S)
where nu_S counts the primes of K above S, so dim U_S/U_S^2 =
r1 + r2 + nu_S and

    |Sel_2^S(K)| = 2^(nu_S + 3) |Cl_S[2]|   (totally real)
                 = 2^(nu_S + 2) |Cl_S[2]|   (complex).

That is the "formula" route.  The "exact sequence" route takes actual
S-unit generators and measures their span in K*/(K*)^2 directly:
quadratic residue characters at degree-one primes away from S separate
classes mod squares, and any element of the character kernel is tested
for being an honest square by reconstructing a root from the archimedean
embeddings and squaring exactly in the ring.  A kernel element that
really is a square means the generating set was not 2-saturated, which
is reported as an error rather than silently absorbed.

The 2-ranks of the even K-groups K_2n(O_K) come from the Rognes-Weibel
style formula at the prime 2: with S = {2}, r_p the number of places of
K above 2 and r1 the number of real places,

    n = 0 mod 4:  dim Cl_S[2] + r_p - 1
    n = 1 mod 4:  dim Cl_S[2] + r1 + r_p - 1
    n = 2, 3 mod 4:  dim Cl+_S[2] + r_p - 1

(the narrow S-quotient in the last row).
"""

from dataclasses import dataclass

from sympy import nextprime

from . import classgroup


class SaturationError(classgroup.CertificationError):
    """S-unit generators could not be certified independent mod squares."""


@dataclass(frozen=True)
class SelmerData:
    dim: int
    route: str

    @property
    def size(self):
        return 1 << self.dim


@dataclass(frozen=True)
class KRank:
    n_mod_4: int
    rank: int

    @property
    def card(self):
        return 1 << self.rank


def _character_primes(form, skip):
    """Yield (q, r) with q an odd prime not dividing `skip` and r a root
    of the form's dehomogenization mod q; each gives a degree-one prime
    and hence a quadratic character on elements coprime to it."""
    a, b, c, d = form
    q = 2
    while True:
        q = int(nextprime(q))
        if skip % q == 0:
            continue
        for r in range(q):
            if (((a * r + b) * r + c) * r + d) % q == 0:
                yield q, r


def mod_squares_dim(fd, gens, max_chars=120):
    """F2-dimension of the subgroup of K*/(K*)^2 generated by -1 and the
    given ring elements, certified by quadratic characters."""
    elems = [(-1, 0, 0)] + [tuple(g) for g in gens]
    a, b, c, _ = fd.form
    norms = 1
    for g in elems:
        norms *= abs(fd.ring.norm(g))
    masks = [0] * len(elems)
    ncols = 0
    chars = _character_primes(fd.form, 2 * a * abs(fd.disc) * norms)
    while ncols < max_chars:
        q, r = next(chars)
        w_im = (a * r) % q
        t_im = ((a * r + b) * r + c) % q
        bit = 1 << ncols
        for i, g in enumerate(elems):
            v = (g[0] + g[1] * w_im + g[2] * t_im) % q
            if pow(v, (q - 1) // 2, q) == q - 1:
                masks[i] |= bit
        ncols += 1
        rank, kernel = _f2_rank_kernel(masks)
        if rank == len(elems):
            return rank
    # could not separate: decide whether a kernel element is a real square
    _, kernel = _f2_rank_kernel(masks)
    for combo in kernel:
        prod = (1, 0, 0)
        for i in range(len(elems)):
            if combo >> i & 1:
                prod = fd.ring.mul(prod, elems[i])
        from . import embeddings

        if embeddings.sqrt_in_ring(fd.ring, fd.emb, list(prod)) is not None:
            raise SaturationError(
                "S-unit generators not 2-saturated: square relation found"
            )
    raise SaturationError(
        "quadratic characters exhausted without separating S-units"
    )


def _f2_rank_kernel(masks):
    """Row rank over F2 and kernel combinations (as bitmasks over rows)."""
    rows = [(m, 1 << i) for i, m in enumerate(masks)]
    basis = []
    kernel = []
    for m, combo in rows:
        for bm, bc in basis:
            low = bm & -bm
            if m & low:
                m ^= bm
                combo ^= bc
        if m:
            basis.append((m, combo))
        else:
            kernel.append(combo)
    return len(basis), kernel


def selmer_size_formula(fd, s_primes):
    s = tuple(sorted(s_primes))
    nu = fd.nu[s]
    c = 3 if fd.totally_real else 2
    return (1 << (nu + c)) * fd.cl_s[s].two_torsion


def selmer_size_exact_sequence(fd, s_primes):
    s = tuple(sorted(s_primes))
    gens = classgroup.sunit_generators(fd, s)
    dim = mod_squares_dim(fd, gens)
    return (1 << dim) * fd.cl_s[s].two_torsion


def selmer_data(fd, s_primes, route="formula"):
    if route == "formula":
        size = selmer_size_formula(fd, s_primes)
    else:
        size = selmer_size_exact_sequence(fd, s_primes)
    return SelmerData(dim=size.bit_length() - 1, route=route)


def k_rank(fd, n):
    """2-rank of K_2n(O_K) for n > 0."""
    if n <= 0:
        raise ValueError("n must be positive")
    s = (2,)
    r_p = len(fd.fb.by_p[2])
    r1 = 3 if fd.totally_real else 1
    m = n % 4
    if m == 0:
        rank = fd.cl_s[s].two_rank + r_p - 1
    elif m == 1:
        rank = fd.cl_s[s].two_rank + r1 + r_p - 1
    else:
        rank = fd.cl_plus_s[s].two_rank + r_p - 1
    return KRank(n_mod_4=m, rank=rank)
