"""Elements with prescribed signs at the real places.

* ordering_separation: signs prescribed, nothing else.
* positive_approximation: totally positive solution of a CRT system.
* strong_ordering_separation: prescribed signs and a local square at a
  finite set of primes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from sympy import primerange

from .errors import InternalError
from .field_core import signs, upper_bound_at
from .ideals import congruence_modulus, crt, factorable_translate, ord_at
from .local_invariants import is_local_square


@dataclass(frozen=True)
class SignPattern:
    """Real places (by index) at which the element must be negative."""

    field: object
    negatives: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "negatives", frozenset(self.negatives))
        r = self.field.r1
        bad = [i for i in self.negatives if not 0 <= i < r]
        if bad:
            raise ValueError(f"real place indices {bad} out of range (field has {r})")

    def target(self):
        return tuple(-1 if i in self.negatives else 1 for i in range(self.field.r1))

    def matches(self, x):
        return signs(x) == self.target()


def _pattern(K, I):
    return I if isinstance(I, SignPattern) else SignPattern(K, frozenset(I))


def eta(K, i):
    """(theta - a)(theta - b) for the isolating interval (a, b) of the i-th real root."""
    cache = K._eta_cache
    if i not in cache:
        lo, hi = K.real_places[i].isolating_interval
        th = K.gen
        cache[i] = (th - lo) * (th - hi)
    return cache[i]


def ordering_separation(K, I=()):
    """Element negative exactly at the real places listed in I."""
    pat = _pattern(K, I)
    if K.degree == 1:
        rho = K(-1) if pat.negatives else K.one
    else:
        rho = K.one
        for i in sorted(pat.negatives):
            rho = rho * eta(K, i)
    if not pat.matches(rho):
        raise InternalError("ordering_separation produced the wrong signs")
    return rho


def _totally_positive(x):
    return all(s > 0 for s in signs(x))


def _meets(x, data):
    for P, k, lam in data:
        diff = x - lam
        if not diff.is_zero() and ord_at(diff, P) < k:
            return False
    return True


def positive_approximation(data, shrink=True):
    """Totally positive alpha in O_K with ord_P(alpha - lam) >= k for each (P, k, lam)."""
    data = [(P, k, lam if not isinstance(lam, int) else P.K(lam)) for P, k, lam in data]
    beta = crt(data)
    K = beta.K
    if K.r1 == 0:
        alpha = beta
    elif K.degree == 2 and (near := _positive_translate(beta, data)) is not None:
        alpha = near
    else:
        m = {}
        for P, k, _ in data:
            m[P.p] = max(m.get(P.p, 0), -(-k // P.e))
        s = 1
        for p, mp in m.items():
            s *= p ** mp
        bound = max(upper_bound_at(-beta, pl) for pl in K.real_places)
        t = 1
        while t * s <= bound:
            t *= 2
        alpha = beta + 2 * t * s
    if shrink and K.r1 and K.degree <= 2:
        alpha = _shrink(alpha, data)
    if not (_meets(alpha, data) and (K.r1 == 0 or _totally_positive(alpha))):
        raise InternalError("positive_approximation failed its own check")
    return alpha


def _positive_translate(beta, data, radius=6):
    # short totally positive element of beta + prod P^k, preferring an easy norm
    return factorable_translate(beta, congruence_modulus(data), _totally_positive, radius)


def _shrink(alpha, data, primes=tuple(int(p) for p in primerange(2, 50))):
    # divide out small rational square factors while every constraint survives
    changed = True
    while changed:
        changed = False
        m, coords = alpha.integral_coords()
        g = 0
        for c in coords:
            g = abs(c) if g == 0 else gcd(g, abs(c))
        for ell in primes:
            if m % ell == 0 or g % (ell * ell):
                continue
            cand = alpha * Fraction(1, ell * ell)
            if _meets(cand, data):
                alpha = cand
                changed = True
                break
    return alpha


def strong_ordering_separation(K, I=(), S=()):
    """Element with the signs of pattern I that is a local square at every P in S."""
    pat = _pattern(K, I)
    a1 = ordering_separation(K, pat)
    S = list(S)
    if not S:
        return a1
    den = a1.denominator()
    a1 = a1 * (den * den)
    data = [(P, 1 + ord_at(K(4), P) + ord_at(a1, P), a1) for P in S]
    a2 = positive_approximation(data)
    rho = a1 * a2
    if not pat.matches(rho) or not all(is_local_square(rho, P) for P in S):
        raise InternalError("strong_ordering_separation failed its own check")
    return rho


__all__ = [
    "SignPattern",
    "eta",
    "ordering_separation",
    "positive_approximation",
    "strong_ordering_separation",
]
