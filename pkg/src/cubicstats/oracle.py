"""Unconditional class-group oracle by exhaustive ideal enumeration.

Every ideal class of a number field contains an integral ideal of norm at
most the Minkowski bound, so listing all integral ideals up to that bound
and partitioning them by equivalence gives the class group without any
analytic input.  Equivalence of I and R is decided through principality of
the integral ideal I * R~, where R~ = N(R) R^{-1} is the "conjugate" ideal
(its prime exponents follow from (p) = prod Q^{e_Q} and N(P) P^{-1} =
P^{e f - 1} prod_{Q != P} Q^{e_Q f}).

Principality itself is decided by exhaustive short-element search.  A
generator g of J can be translated by units so that its archimedean logs
land anywhere in a fundamental domain of the unit log lattice; covering
that domain by balls of radius r0 and enumerating, for each ball center t,
all lattice points of the ideal with skewed norm sum_v w_v e^{-2 t_v}
|s_v(x)|^2 <= 3 e^{2 r0} therefore finds a generator whenever one exists.
A negative answer is a proof, not a heuristic.  The same search with the
ring itself and target norm 1 certifies completeness of the unit group:
any missing unit would show up in some ball.

The narrow class group is presented on top of the plain partition: class
representatives plus one Z/2 generator per real place, with the sign
vector of the witness generator a*d recorded in every Cayley relation
R_i R_j = R_k (g), together with the unit sign rows.  That fixes the
extension 1 -> {+-1}^{r1}/sgn(U) -> Cl+ -> Cl -> 1 including its group
structure, not only its order.
"""

from __future__ import annotations

import math

import numpy as np

from . import embeddings, forms, ideals
from . import rings as rings_mod
from .classgroup import (
    AbelianGroupData,
    CertificationError,
    UnitGroup,
    _TORSION,
    _canon,
    compute_field,
    group_from_rows,
    minkowski_bound,
)
from .enumerate import _primes_upto

DEFAULT_THRESHOLD = 20000


class ResourceLimitError(RuntimeError):
    """Raised when a field is above the oracle's discriminant threshold."""


# --------------------------------------------------------------------------
# certified norm-form solving (the principality engine)
# --------------------------------------------------------------------------


def _per_place_logs(emb, u):
    full = emb.log_vector(u)
    return np.array(
        [float(x) for x in full[: emb.r1]]
        + [float(x) / 2 for x in full[emb.r1 :]]
    )


class _GridSearcher:
    """Enumerates, up to unit translation, every element of a given ideal
    lattice with prescribed absolute norm; complete by the covering
    argument in the module docstring."""

    def __init__(self, ring, emb, units, r0=1.5, margin=1.2):
        self.ring = ring
        self.emb = emb
        nplaces = emb.r1 + emb.r2
        self.gram0 = emb.t2_gram()
        bvecs = [_per_place_logs(emb, g) for g in units.gens]
        steps = [max(1, math.ceil(np.linalg.norm(b) / r0)) for b in bvecs]
        cell = [np.linalg.norm(b) / n for b, n in zip(bvecs, steps)]
        # triangle inequality, not quadrature: the basis is not orthogonal
        r_eff = 0.5 * sum(cell)
        self.bound = 3.0 * math.exp(2.0 * r_eff) * margin
        self.offsets = [np.zeros(nplaces)]
        if bvecs:
            self.offsets = []
            for idx in np.ndindex(*steps):
                t = np.zeros(nplaces)
                for j, b in enumerate(bvecs):
                    t = t + ((idx[j] + 0.5) / steps[j]) * b
                self.offsets.append(t)

    def solutions(self, rows, target, first_only=False):
        """All x in the row lattice with |N(x)| == target, one per unit
        orbit at least, one per +- pair at most.  With first_only a single
        witness is returned as soon as one is found; a [] answer always
        means the full grid was scanned (certified none)."""
        c = math.log(target) / 3.0
        out = []
        seen = set()
        for off in self.offsets:
            # skewed norms of solutions are <= bound by construction, and
            # the target factor was absorbed into the centering c
            vecs = embeddings.fincke_pohst_skewed(
                self.emb, c + off, rows, self.bound
            )
            for raw in sorted(vecs.tolist()):
                alpha = _canon(tuple(raw))
                if alpha in seen:
                    continue
                seen.add(alpha)
                if abs(self.ring.norm(alpha)) == target:
                    out.append(alpha)
                    if first_only:
                        return out
        return out


def certify_units(ring, emb, seeds):
    """Unit group certified complete by exhaustive search: rebuild the
    grid and re-enumerate norm-(+-1) elements until nothing new shows up."""
    ug = UnitGroup(ring, emb)
    for u in seeds:
        if abs(ring.norm(u)) != 1:
            raise CertificationError(f"bad unit seed {u}")
        ug.add(u)
    ident = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    if not ug.full_rank:
        # independent bootstrap: short-vector search for units
        bound = 3.0 * abs(ring.discriminant) ** (1 / 3)
        while not ug.full_rank:
            for raw in embeddings.fincke_pohst(
                emb.t2_gram(), ident, bound
            ).tolist():
                alpha = tuple(raw)
                if abs(ring.norm(alpha)) == 1:
                    ug.add(alpha)
            bound *= 2.0
            if bound > 1e9:
                raise CertificationError("unit bootstrap failed")
    for _ in range(20):
        grid = _GridSearcher(ring, emb, ug)
        grew = False
        for alpha in grid.solutions(ident, 1):
            if tuple(alpha) in _TORSION:
                continue
            grew = ug.add(alpha) or grew
        if not grew:
            return ug
    raise CertificationError("unit certification did not stabilize")


# --------------------------------------------------------------------------
# the oracle proper
# --------------------------------------------------------------------------


class OracleField:
    """Class-group invariants of one cubic field, the exhaustive way."""

    def __init__(
        self,
        form,
        s_sets=((), (2,), (2, 3)),
        threshold=DEFAULT_THRESHOLD,
        seed_units="main",
    ):
        form = tuple(form)
        d = forms.disc(form)
        if abs(d) > threshold:
            raise ResourceLimitError(
                f"|disc| = {abs(d)} above oracle threshold {threshold}"
            )
        self.form = form
        self.disc = d
        self.ring = rings_mod.CubicRing.from_form(form)
        self.emb = embeddings.Embeddings(form)
        self.absd = abs(d)
        if seed_units == "main":
            seeds = compute_field(form, s_sets=s_sets).units.gens
        else:
            seeds = list(seed_units or [])
        self.units = certify_units(self.ring, self.emb, seeds)
        self.grid = _GridSearcher(self.ring, self.emb, self.units)
        self.s_all = sorted({p for s in s_sets for p in s})

        bmk = minkowski_bound(self.absd, self.emb.r2)
        self.primes = []
        self.by_p = {}
        for p in sorted(set(_primes_upto(max(int(bmk), 2))) | set(self.s_all)):
            above = ideals.primes_above(self.ring, p)
            if p not in self.s_all and not any(P.norm() <= bmk for P in above):
                continue
            self.by_p[p] = above
            # conjugation needs every prime above p, not only the small ones
            self.primes.extend(above)
        self.index = {id(P): i for i, P in enumerate(self.primes)}
        self._pow_cache = {}
        self._witness_cache = {}

        small = [
            i for i, P in enumerate(self.primes) if P.norm() <= bmk
        ]
        vecs = [tuple([0] * len(self.primes))]
        for i in small:
            ni = self.primes[i].norm()
            ext = []
            for v in vecs:
                nv = ni
                k = 1
                base = self._vec_norm(v)
                while base * nv <= bmk:
                    w = list(v)
                    w[i] = k
                    ext.append(tuple(w))
                    k += 1
                    nv *= ni
            vecs.extend(ext)
        # canonical order: by norm, then exponents
        self.ideal_vecs = sorted(
            vecs, key=lambda v: (self._vec_norm(v), v)
        )

        self.reps = []
        self._witness = {}  # (i, j) -> sign bits of the Cayley witness
        self._partition()
        self._present(s_sets)

    # ---- exponent-vector plumbing ----

    def _vec_norm(self, vec):
        return math.prod(
            P.norm() ** e for P, e in zip(self.primes, vec) if e
        )

    def _conj(self, vec):
        """Exponents of prod N(P)^{e_P} P^{-e_P} as an integral ideal."""
        out = [0] * len(self.primes)
        for i, e in enumerate(vec):
            if not e:
                continue
            P = self.primes[i]
            for Q in self.by_p[P.p]:
                j = self.index[id(Q)]
                out[j] += e * Q.e * P.f
            out[self.index[id(P)]] -= e
        return out

    def _power(self, i, k):
        key = (i, k)
        if key not in self._pow_cache:
            self._pow_cache[key] = self.primes[i].ideal.pow(k)
        return self._pow_cache[key]

    def _hnf_of(self, vec):
        acc = None
        for i, e in enumerate(vec):
            if not e:
                continue
            q = self._power(i, e)
            acc = q if acc is None else acc.mul(q)
        return acc if acc is not None else ideals.Ideal.whole_ring(self.ring)

    # ---- principality with sign witness ----

    def _short_alpha(self, ideal_obj, nrm):
        bound = 3.0 * (nrm * nrm * self.absd) ** (1 / 3) * 1.3
        while True:
            vecs = embeddings.fincke_pohst(
                self.grid.gram0, ideal_obj.basis_rows(), bound
            )
            best = None
            for raw in sorted(vecs.tolist()):
                alpha = _canon(tuple(raw))
                na = abs(self.ring.norm(alpha))
                if na and (best is None or na < best[0]):
                    best = (na, alpha)
            if best is not None:
                return best[1]
            bound *= 2.0

    def _principal_witness(self, vec):
        """Sign bits of a generator of prod P^{vec} (as a tuple), or None
        if the ideal is certified non-principal."""
        key = tuple(vec)
        if key in self._witness_cache:
            return self._witness_cache[key]
        w = self._principal_witness_uncached(vec)
        self._witness_cache[key] = w
        return w

    def _principal_witness_uncached(self, vec):
        nrm = self._vec_norm(vec)
        if nrm == 1:
            return tuple([0] * self.emb.r1)
        J = self._hnf_of(vec)
        alpha = self._short_alpha(J, nrm)
        na = abs(self.ring.norm(alpha))
        if na == nrm:
            return self.emb.sign_bits(alpha)
        # J2 = (alpha) J^{-1} is integral, small, and inverse to J in Cl
        conj_hnf = self._hnf_of(self._conj(vec))
        prod = ideals.Ideal.principal(self.ring, alpha).mul(conj_hnf)
        rows = [[x // nrm for x in r] for r in prod.basis_rows()]
        for r, s in zip(rows, prod.basis_rows()):
            assert all(x * nrm == y for x, y in zip(r, s))
        target = na // nrm
        sols = self.grid.solutions(rows, target, first_only=True)
        if not sols:
            return None
        delta = sols[0]
        sa = self.emb.sign_bits(alpha)
        sd = self.emb.sign_bits(delta)
        return tuple((x + y) % 2 for x, y in zip(sa, sd))

    def _equiv(self, vec, rep):
        """Witness sign bits if prod P^vec ~ prod P^rep, else None."""
        joint = [a + c for a, c in zip(vec, self._conj(rep))]
        return self._principal_witness(joint)

    # ---- partition and presentation ----

    def _partition(self):
        self.rep_vecs = []
        for vec in self.ideal_vecs:
            for r in self.rep_vecs:
                if self._equiv(list(vec), list(r)) is not None:
                    break
            else:
                self.rep_vecs.append(list(vec))

    def _present(self, s_sets):
        h = len(self.rep_vecs)
        r1 = self.emb.r1
        plain_rows = []
        narrow_rows = []
        for i in range(h):
            for j in range(i, h):
                prod = [a + b for a, b in zip(self.rep_vecs[i], self.rep_vecs[j])]
                for k in range(h):
                    w = self._equiv(prod, self.rep_vecs[k])
                    if w is not None:
                        break
                else:
                    raise CertificationError(
                        "product class missed every representative"
                    )
                row = [0] * h
                row[i] += 1
                row[j] += 1
                row[k] -= 1
                plain_rows.append(list(row))
                narrow_rows.append(list(row) + list(w))
        for j in range(r1):
            narrow_rows.append(
                [0] * h + [2 if i == j else 0 for i in range(r1)]
            )
        for u in list(self.units.gens) + [(-1, 0, 0)]:
            narrow_rows.append([0] * h + list(self.emb.sign_bits(u)))

        self.cl = group_from_rows(plain_rows, h)
        self.cl_plus = group_from_rows(narrow_rows, h + r1)
        if self.cl is None or self.cl.order != h:
            raise CertificationError(
                "Cayley presentation order mismatch"
            )

        # classes (with witnesses) of the primes above each S
        self.cl_s = {}
        self.cl_plus_s = {}
        for s in s_sets:
            extra_p = []
            extra_n = []
            for p in s:
                for P in self.by_p[p]:
                    vec = [0] * len(self.primes)
                    vec[self.index[id(P)]] = 1
                    for k in range(h):
                        w = self._equiv(vec, self.rep_vecs[k])
                        if w is not None:
                            break
                    else:
                        raise CertificationError(
                            f"class of prime above {p} not found"
                        )
                    row = [0] * h
                    row[k] = 1
                    extra_p.append(list(row))
                    extra_n.append(list(row) + list(w))
            self.cl_s[tuple(s)] = group_from_rows(plain_rows + extra_p, h)
            self.cl_plus_s[tuple(s)] = group_from_rows(
                narrow_rows + extra_n, h + r1
            )


def oracle_class_group(form, **kw):
    return OracleField(form, **kw).cl


def oracle_narrow_class_group(form, **kw):
    return OracleField(form, **kw).cl_plus
