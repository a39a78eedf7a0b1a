"""Exact local masses and predicted averages, in rational arithmetic.

The mass of a rank-n etale Q_p-algebra R is
(p-1)/p * p^(-v_p(disc R)) / |Aut R|; summing over cubic algebras with r
components gives the closed forms

    mu_p(r=1) = (p^3 - p^2 + 3p - 3)/(3 p^3)
    mu_p(r=2) = (p^2 + p - 2)/(2 p^2)
    mu_p(r=3) = (p - 1)/(6 p)

whose total is 1 - 1/p^3.  Adjoining a Q_p component (the tilde operation)
scales a single algebra's mass by 2^-(r-1) and the all-algebras mass by
(1/2)(1 + (p^2+4)/(4(p^2+p+1))).  Everything downstream (class group, Selmer
and K-group averages, field-count predictions, the positive-proportion
floor) is assembled from these rational building blocks; mass_tame_bruteforce
re-derives the masses for p > 3 by listing tame local fields directly.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def mass_total(p):
    """Total mass of rank-3 etale Q_p-algebras."""
    return 1 - Fraction(1, p ** 3)


def mass_sigma_r(p, r):
    """Mass of the rank-3 etale Q_p-algebras with exactly r components."""
    if r == 1:
        return Fraction(p ** 3 - p * p + 3 * p - 3, 3 * p ** 3)
    if r == 2:
        return Fraction(p * p + p - 2, 2 * p * p)
    if r == 3:
        return Fraction(p - 1, 6 * p)
    raise ValueError(f"r must be 1, 2 or 3, got {r}")


def mass_tilde(p):
    """Mass of { R + Q_p : R rank-3 etale }, i.e. sum 2^-(r-1) mu_p(r)."""
    return Fraction(5 * p ** 3 - p * p + 4 * p - 8, 8 * p ** 3)


def tilde_ratio_single(r):
    """mu(tilde R)/mu(R) for a single algebra with r components."""
    return Fraction(1, 2 ** (r - 1))


def tilde_ratio_all(p):
    """mu(tilde Sigma)/mu(Sigma) over all rank-3 algebras."""
    return mass_tilde(p) / mass_total(p)


def local_factor(p):
    """(p^2+4)/(4(p^2+p+1)); tilde_ratio_all = (1 + local_factor)/2."""
    return Fraction(p * p + 4, 4 * (p * p + p + 1))


# --------------------------------------------------------------------------
# brute-force tame masses (p > 3: every cubic etale algebra is tame)
# --------------------------------------------------------------------------


def _tame_field_catalog(p):
    """Tame local fields of degree <= 3 over Q_p as tuples
    (label, degree, components, disc exponent, |Aut|); totally ramified
    degree-e extensions come in gcd(e, p-1) isomorphism classes, each with
    automorphism group of order gcd(e, p-1)."""
    if p <= 3:
        raise ValueError("wild primes p <= 3 are outside the tame catalog")
    cat = []
    for f in (1, 2, 3):
        cat.append((("u", f, 0), f, 0, f))
    for e in (2, 3):
        g = math.gcd(e, p - 1)
        for j in range(g):
            cat.append((("r", e, j), e, e - 1, g))
    return cat


def mass_tame_bruteforce(p, tilde=False):
    """Masses by r computed from the local-field catalog; returns
    {r: mass}.  With tilde=True, each algebra is replaced by its tilde
    (one extra Q_p component) before taking automorphisms."""
    cat = _tame_field_catalog(p)
    out = {1: Fraction(0), 2: Fraction(0), 3: Fraction(0)}
    for k in (1, 2, 3):
        for combo in itertools.combinations_with_replacement(cat, k):
            if sum(item[1] for item in combo) != 3:
                continue
            mult = {}
            for item in combo:
                mult[item] = mult.get(item, 0) + 1
            if tilde:
                u1 = (("u", 1, 0), 1, 0, 1)
                mult[u1] = mult.get(u1, 0) + 1
            aut = 1
            for item, m in mult.items():
                aut *= item[3] ** m * math.factorial(m)
            dexp = sum(item[2] for item in combo)
            out[k] += Fraction(p - 1, p) * Fraction(1, p ** dexp) / aut
    return out


# --------------------------------------------------------------------------
# predicted averages (exact rationals)
# --------------------------------------------------------------------------


def _r_infinity(totally_real, narrow):
    """The archimedean exponent: 2 for Cl_S of totally real fields, 1 for
    complex fields (where narrow and ordinary coincide), 0 for narrow
    totally real."""
    if not totally_real:
        return 1
    return 0 if narrow else 2


def predict_cl_avg(totally_real, narrow, s_primes):
    """Average |Cl(K)_S[2]| (or narrow variant) over the signature family."""
    s_primes = sorted(set(s_primes))
    c = _r_infinity(totally_real, narrow)
    prod = Fraction(1)
    for p in s_primes:
        prod *= 1 + local_factor(p)
    return 1 + Fraction(1, 2 ** (len(s_primes) + c)) * prod


def predict_cl_avg_conditioned(totally_real, narrow, r_values):
    """Average |Cl(K)_S[2]| with a fixed local algebra at each p in S;
    r_values lists the number of primes above each p."""
    r = sum(rv - 1 for rv in r_values)
    c = _r_infinity(totally_real, narrow)
    return 1 + Fraction(1, 2 ** (r + c))


def predict_fixed_nu(totally_real, narrow, s, s_size):
    """Average of 2^s |Cl(K)_S[2]| over fields with nu_S(K) = s."""
    if not (s_size <= s <= 3 * s_size):
        raise ValueError(f"nu_S = {s} impossible for |S| = {s_size}")
    c = _r_infinity(totally_real, narrow)
    return 2 ** s + Fraction(2 ** s_size, 2 ** c)


def predict_2nu_avg(s_primes):
    """Average of 2^nu_S over either signature family."""
    s_primes = sorted(set(s_primes))
    prod = Fraction(1)
    for p in s_primes:
        prod *= 2 - Fraction(1, p * p + p + 1)
    return 2 ** len(s_primes) * prod


def predict_2nu_cl_avg(totally_real, narrow, s_primes):
    """Average of 2^nu_S |Cl(K)_S[2]| (or the narrow variant)."""
    s_primes = sorted(set(s_primes))
    c = _r_infinity(totally_real, narrow)
    return Fraction(2 ** len(s_primes), 2 ** c) + predict_2nu_avg(s_primes)


def predict_selmer_avg(totally_real, s_primes):
    """Average |Sel_2^S(K)| over the signature family."""
    s_primes = sorted(set(s_primes))
    shift = 3 if totally_real else 2
    return 2 ** (len(s_primes) + 1) + 2 ** shift * predict_2nu_avg(s_primes)


def predict_kgroup_avg(totally_real, n_mod_4):
    """Average |K_{2n}(O_K)[2]| for n > 0 in the given residue class."""
    s = [2]
    if n_mod_4 % 4 == 0:
        return Fraction(1, 2) * predict_2nu_cl_avg(totally_real, False, s)
    if n_mod_4 % 4 == 1:
        r1 = 3 if totally_real else 1
        return 2 ** (r1 - 1) * predict_2nu_cl_avg(totally_real, False, s)
    return Fraction(1, 2) * predict_2nu_cl_avg(totally_real, True, s)


def predict_cor13_floor(s_primes):
    """Lower bound for the proportion of totally real fields with trivial
    Cl(K)^+_S[2] (equivalently Cl^+_S = Cl_S, equivalently S-units of all
    signatures)."""
    s_primes = sorted(set(s_primes))
    prod = Fraction(1)
    for p in s_primes:
        prod *= 1 + local_factor(p)
    return 1 - Fraction(1, 2 ** len(s_primes)) * prod


_ZETA3 = None


def _zeta3():
    global _ZETA3
    if _ZETA3 is None:
        import mpmath

        with mpmath.workdps(40):
            _ZETA3 = float(mpmath.zeta(3))
    return _ZETA3


def predict_field_count(X, totally_real, conditions=None):
    """Asymptotic count of cubic fields with |disc| <= X in a signature
    family; conditions maps p -> r_p to impose a splitting constraint."""
    m = 6 if totally_real else 2
    val = X / (2 * m * _zeta3())
    for p, r in (conditions or {}).items():
        val *= float(mass_sigma_r(p, r) / mass_total(p))
    return val


def predict_quartic_field_count(X, real_places, conditions=None):
    """Asymptotic count of nowhere-overramified S4-quartic fields with i
    real places (i in {0, 2, 4}); predictions only, nothing enumerates
    quartics here."""
    n_i = {0: 8, 2: 4, 4: 24}[real_places]
    val = X / (2 * n_i * _zeta3())
    for p, r in (conditions or {}).items():
        val *= float(mass_sigma_r(p, r) / mass_total(p))
    return val
