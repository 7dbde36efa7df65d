"""Prime ideals of quadratic (and rational) integer rings.

Primes above p are read off from the factorisation of the minimal
polynomial g of the integral basis element omega modulo p (Dedekind's
criterion applies since O_K = Z[omega]).  Valuations are computed from
norms: after removing the largest power of p dividing an integral
element, at most one prime above p can still divide it.
"""

from __future__ import annotations

import heapq
import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from sympy import Poly, Symbol, discriminant, factorint, isprime, nextprime
from sympy.ntheory import sqrt_mod

from .errors import DuplicateModulus, InfiniteValuation, NotPrime, ParseError, UnsupportedDegree
from .field_core import FieldElt, format_element, from_integral_coords, parse_element


def vp(n, p):
    """p-adic valuation of a nonzero integer."""
    n = abs(n)
    if n == 0:
        raise InfiniteValuation("valuation of 0")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp_rational(q, p):
    q = Fraction(q)
    return vp(q.numerator, p) - vp(q.denominator, p)


def _omega_norm(K, a, b):
    t, n = K.omega_trace_norm
    return a * a + t * a * b + n * b * b


def _g_eval(K, x, mod=None):
    t, n = K.omega_trace_norm
    v = x * x - t * x + n
    return v % mod if mod else v


@dataclass(frozen=True, eq=False)
class PrimeIdeal:
    """A finite place of K.

    ``r`` is the root of omega's minimal polynomial mod p defining the prime
    (P = (p, omega - r)); it is None for inert primes and over Q.
    """

    K: object
    p: int
    r: int | None
    e: int
    f: int
    _key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        # sympy may hand back gmpy2 integers, which do not mix with Fraction
        object.__setattr__(self, "p", int(self.p))
        if self.r is not None:
            object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "_key", (id(self.K), self.p, self.r))

    def __eq__(self, other):
        return isinstance(other, PrimeIdeal) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    @property
    def norm(self):
        return self.p ** self.f

    @property
    def under(self):
        return self.p

    @property
    def residue_degree(self):
        return self.f

    @property
    def ram_index(self):
        return self.e

    @property
    def is_dyadic(self):
        return self.p == 2

    @property
    def sort_key(self):
        return (self.norm, self.p, -1 if self.r is None else self.r)

    @property
    def kind(self):
        if self.K.degree == 1:
            return "rational"
        if self.e == 2:
            return "ramified"
        return "inert" if self.f > 1 else "split"

    @property
    def generator(self):
        """Second generator g of P = (p, g), or None when P = (p)."""
        if self.r is None:
            return None
        return self.K.omega - self.r

    @property
    def uniformizer(self):
        return _uniformizer(self)

    def ideal(self):
        if self.r is None:
            return Ideal.from_elements(self.K, [self.K(self.p)])
        return Ideal.from_elements(self.K, [self.K(self.p), self.generator])

    def __str__(self):
        if self.r is None:
            return f"({self.p})"
        return f"({self.p}, {format_element(self.generator)})"

    __repr__ = __str__


@lru_cache(maxsize=None)
def _uniformizer(P):
    if P.r is None:
        return P.K(P.p)
    g = P.generator
    if ord_at(g, P) == 1:
        return g
    return g + P.p


_PRIMES_CACHE = {}


def primes_above(K, p):
    """The primes of O_K above the rational prime p, ordered by r."""
    key = (id(K), p)
    if key in _PRIMES_CACHE:
        return _PRIMES_CACHE[key]
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if K.degree > 2:
        out = [_inert_prime_high_degree(K, p)]
        _PRIMES_CACHE[key] = out
        _KNOWN_PRIMES.add(int(p))
        return out
    if K.degree == 1:
        out = [PrimeIdeal(K, p, None, 1, 1)]
    else:
        if p == 2:
            roots = [r for r in range(2) if _g_eval(K, r) % 2 == 0]
        else:
            t, _ = K.omega_trace_norm
            disc = K.disc_K
            inv2 = pow(2, -1, p)
            if disc % p == 0:
                roots = [t * inv2 % p]
            else:
                s = sqrt_mod(disc % p, p)
                roots = [] if s is None else sorted({(t + s) * inv2 % p, (t - s) * inv2 % p})
        if not roots:
            out = [PrimeIdeal(K, p, None, 1, 2)]
        elif len(roots) == 1:
            out = [PrimeIdeal(K, p, roots[0], 2, 1)]
        else:
            out = [PrimeIdeal(K, p, r, 1, 1) for r in roots]
    _PRIMES_CACHE[key] = out
    _KNOWN_PRIMES.add(int(p))
    return out


def _inert_prime_high_degree(K, p):
    """pO_K for p inert in a field Z[theta] with p not dividing disc(f).

    This is the only prime ideal supported beyond degree 2: such a prime is
    principal, and valuations are read off the power-basis coordinates.
    """
    f = [int(c) for c in K.def_poly]
    if any(Fraction(c) != c0 for c, c0 in zip(f, K.def_poly)) or f[-1] != 1:
        raise UnsupportedDegree("need a monic integral defining polynomial")
    x = Symbol("x")
    poly = Poly(list(reversed(f)), x)
    if discriminant(poly) % p == 0:
        raise UnsupportedDegree(f"{p} divides disc(f); prime ideals unavailable in degree {K.degree}")
    factors = Poly(list(reversed(f)), x, modulus=p).factor_list()[1]
    if len(factors) != 1 or factors[0][1] != 1:
        raise UnsupportedDegree(f"{p} is not inert; prime ideals unavailable in degree {K.degree}")
    return PrimeIdeal(K, p, None, 1, K.degree)


def _vp_fraction(c, p):
    return vp(c.numerator, p) - vp(c.denominator, p)


def dyadic_primes(K):
    return primes_above(K, 2)


def _ord_integral(K, coords, P):
    p = P.p
    if K.degree == 1:
        return vp(coords[0], p)
    a, b = coords
    k = vp(gcd(a, b), p)
    a //= p ** k
    b //= p ** k
    kind = P.kind
    if kind == "inert":
        return k
    if kind == "ramified":
        return 2 * k + vp(_omega_norm(K, a, b), p)
    # split
    if (a + b * P.r) % p == 0:
        return k + vp(_omega_norm(K, a, b), p)
    return k


def ord_at(x, P):
    """Exact P-adic valuation of the nonzero element x."""
    if not isinstance(x, FieldElt):
        x = P.K(x)
    if x.is_zero():
        raise InfiniteValuation("valuation of 0")
    if x.K.degree > 2:
        # P = pO with Z[theta] p-maximal: content valuation of the coordinates
        return min(_vp_fraction(c, P.p) for c in x.c if c)
    m, coords = x.integral_coords()
    return _ord_integral(x.K, coords, P) - P.e * (vp(m, P.p) if m % P.p == 0 else 0)


@dataclass(frozen=True)
class IdealFactorization:
    element: FieldElt
    factors: tuple

    def exponent(self, P):
        for Q, e in self.factors:
            if Q == P:
                return e
        return 0

    def odd_support(self):
        return [P for P, e in self.factors if e % 2]

    def __iter__(self):
        return iter(self.factors)


_FACTOR_CACHE = {}


_KNOWN_PRIMES = set()


def _strip_known(n):
    """Divide out rational primes already met in this session."""
    found = []
    for p in sorted(_KNOWN_PRIMES):
        if n % p == 0:
            found.append(p)
            while n % p == 0:
                n //= p
            if n == 1:
                break
    return found, n


def _prime_factors(n):
    n = abs(n)
    if n <= 1:
        return []
    found, n = _strip_known(n)
    if n > 1:
        new = [int(p) for p in factorint(n)]
        _KNOWN_PRIMES.update(new)
        found.extend(new)
    return found


def cheap_prime_factors(n, effort=10**5):
    """Prime factors of n if they can be found cheaply, else None.

    Cheap means: known primes, trial division up to `effort`, then a
    cofactor that is 1 or a probable prime.
    """
    n = abs(int(n))
    if n <= 1:
        return []
    found, n = _strip_known(n)
    if n == 1:
        return found
    part = factorint(n, limit=effort, use_rho=False, use_pm1=False, use_ecm=False)
    for q in part:
        if not isprime(q):
            return None
    new = [int(q) for q in part]
    _KNOWN_PRIMES.update(new)
    return found + new


def factor_principal(x):
    """Prime factorisation of the fractional ideal (x)."""
    if x.is_zero():
        raise InfiniteValuation("cannot factor the zero ideal")
    hit = _FACTOR_CACHE.get(x)
    if hit is not None:
        return hit
    K = x.K
    K.require_degree(2)
    N = Fraction(x.norm())
    m, _ = x.integral_coords()
    cand = set(_prime_factors(N.numerator)) | set(_prime_factors(N.denominator)) | set(_prime_factors(m))
    factors = []
    for p in sorted(cand):
        for P in primes_above(K, p):
            e = ord_at(x, P)
            if e:
                factors.append((P, e))
    res = IdealFactorization(x, tuple(factors))
    if len(_FACTOR_CACHE) > 200000:
        _FACTOR_CACHE.clear()
    _FACTOR_CACHE[x] = res
    return res


def _crt_power_basis(K, data):
    # every prime here is pO, so the congruence is coordinatewise mod p^k
    cols = [[] for _ in range(K.degree)]
    for P, k, lam in data:
        lam = lam if isinstance(lam, FieldElt) else K(lam)
        mod = P.p ** k
        for i, c in enumerate(lam.c):
            cols[i].append((c.numerator * pow(c.denominator, -1, mod) % mod, mod))
    out = []
    for col in cols:
        A, M = _int_crt(col)
        out.append(_centered(A, M))
    return K(*out)


# ---------------------------------------------------------------------------
# local images used by crt and the residue machinery


def hensel_root(P, N):
    """Root of omega's minimal polynomial modulo p^N lifting P.r (split primes)."""
    K, p = P.K, P.p
    mod = p ** N
    t, _ = K.omega_trace_norm
    rho = P.r
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        m = p ** prec
        deriv = (2 * rho - t) % m
        rho = (rho - _g_eval(K, rho) * pow(deriv, -1, m)) % m
    return rho % mod


def split_image(x, P, N):
    """Image of a P-integral x in Z/p^N under the embedding K -> Q_p for split P."""
    K, p = P.K, P.p
    m, coords = x.integral_coords()
    if K.degree == 1:
        a = coords[0]
        v = vp(m, p) if m % p == 0 else 0
        if v:
            assert a % p ** v == 0
            a //= p ** v
            m //= p ** v
        return a * pow(m, -1, p ** N) % p ** N
    a, b = coords
    v = vp(m, p) if m % p == 0 else 0
    prec = N + v
    rho = hensel_root(P, prec)
    num = (a + b * rho) % p ** prec
    if v:
        if num % p ** v:
            raise ValueError(f"{x} is not integral at {P}")
        num //= p ** v
        m //= p ** v
    mod = p ** N
    return num * pow(m, -1, mod) % mod


def pair_image(x, p, M):
    """Integral-basis coordinates of x modulo p^M, x having p-free denominator."""
    m, coords = x.integral_coords()
    if m % p == 0:
        raise ValueError(f"{x} has p in its denominator")
    mod = p ** M
    inv = pow(m, -1, mod)
    return tuple(c * inv % mod for c in coords)


def _int_crt(residues):
    """Combine [(value, modulus)] with pairwise coprime moduli."""
    x, M = 0, 1
    for a, m in residues:
        t = ((a - x) * pow(M, -1, m)) % m
        x += M * t
        M *= m
    return x, M


def _centered(v, M):
    v %= M
    return v - M if v > M // 2 else v


def _qf(x):
    # positive definite: sum of |sigma(x)|^2 over the embeddings
    return 2 * x.norm() if x.K.d < 0 else (x * x).trace()


def reduced_basis(I):
    """Lagrange-Gauss reduced Z-basis (b1, b2) of a quadratic-field ideal, b1 shortest."""
    b1, b2 = I.basis()
    q1, q2 = _qf(b1), _qf(b2)
    if q1 > q2:
        b1, b2, q1, q2 = b2, b1, q2, q1
    while True:
        mu = round(Fraction(_qf(b1 + b2) - q1 - q2) / (2 * q1))
        if mu == 0:
            return b1, b2
        b2 = b2 - b1 * mu
        q2 = _qf(b2)
        if q2 >= q1:
            return b1, b2
        b1, b2, q1, q2 = b2, b1, q2, q1


def _reduce_mod_ideal(x, I):
    """Short representative of x + I (Babai rounding on a reduced basis)."""
    b1, b2 = reduced_basis(I)
    _, (p1, q1) = b1.integral_coords()
    _, (p2, q2) = b2.integral_coords()
    m, (a, b) = x.integral_coords()
    det = p1 * q2 - p2 * q1
    u = round(Fraction(a * q2 - b * p2, det * m))
    v = round(Fraction(p1 * b - q1 * a, det * m))
    return x - b1 * u - b2 * v


def congruence_modulus(data):
    """The ideal prod P^k of a list of (P, k, lam) congruences."""
    K = data[0][0].K
    mod = Ideal(K, 1, 0, 1)
    for P, k, _ in data:
        mod = mod * P.ideal() ** k
    return mod


def short_translates(x, I, radius):
    """x + i*b1 + j*b2 for |i|, |j| <= radius, shortest first, on a reduced basis of I."""
    b1, b2 = reduced_basis(I)
    x = _reduce_mod_ideal(x, I)
    out = [x + b1 * i + b2 * j for i in range(-radius, radius + 1) for j in range(-radius, radius + 1)]
    out.sort(key=_qf)
    return out


def factorable_translate(x, I, accept=None, radius=6):
    """Short y = x mod I with accept(y) whose norm factors cheaply.

    Falls back to the shortest accepted translate; None if nothing in the box is accepted.
    """
    first = None
    for y in short_translates(x, I, radius):
        if y.is_zero() or (accept is not None and not accept(y)):
            continue
        if first is None:
            first = y
        n = y.norm()
        if cheap_prime_factors(n.numerator) is not None and cheap_prime_factors(n.denominator) is not None:
            return y
    return first


def crt(data):
    """beta in O_K with ord_P(beta - lam) >= k for every (P, k, lam) in data."""
    data = list(data)
    if not data:
        raise ValueError("crt needs at least one congruence")
    K = data[0][0].K
    seen = set()
    for P, k, lam in data:
        if P in seen:
            raise DuplicateModulus(f"prime {P} listed twice")
        seen.add(P)
        if k < 1:
            raise ValueError("exponents must be >= 1")
        if not isinstance(lam, FieldElt):
            lam = K(lam)
        if not lam.is_zero() and ord_at(lam, P) < 0:
            raise ValueError(f"target {lam} has negative valuation at {P}")
    if K.degree > 2:
        return _crt_power_basis(K, data)
    by_p = {}
    for P, k, lam in data:
        lam = lam if isinstance(lam, FieldElt) else K(lam)
        by_p.setdefault(P.p, []).append((P, k, lam))

    a_res, b_res = [], []
    for p, items in by_p.items():
        if K.degree == 1:
            (P, k, lam), = items
            mod = p ** k
            a_res.append((0 if lam.is_zero() else split_image(lam, P, k), mod))
            continue
        kind = items[0][0].kind
        if kind == "split":
            Kp = max(k for _, k, _ in items)
            mod = p ** Kp
            if len(items) == 1:
                P, k, lam = items[0]
                t1 = 0 if lam.is_zero() else split_image(lam, P, k)
                A, B = t1, 0
            else:
                (P1, k1, l1), (P2, k2, l2) = items
                t1 = 0 if l1.is_zero() else split_image(l1, P1, k1)
                t2 = 0 if l2.is_zero() else split_image(l2, P2, k2)
                r1, r2 = hensel_root(P1, Kp), hensel_root(P2, Kp)
                B = (t1 - t2) * pow(r1 - r2, -1, mod) % mod
                A = (t1 - B * r1) % mod
        else:
            (P, k, lam), = items
            M = k if kind == "inert" else (k + 1) // 2
            mod = p ** M
            A, B = (0, 0) if lam.is_zero() else pair_image(lam, p, M)
        a_res.append((A, mod))
        b_res.append((B, mod))
    A, M = _int_crt(a_res)
    A = _centered(A, M)
    if K.degree == 1:
        return K(A)
    B, _ = _int_crt(b_res)
    B = _centered(B, M)
    beta = from_integral_coords(K, (A, B))
    return _reduce_mod_ideal(beta, congruence_modulus(data))


# ---------------------------------------------------------------------------
# enumeration of primes by norm


class PrimeCursor:
    """Caller-owned cursor over the primes of K in nondecreasing norm."""

    def __init__(self, K):
        self.K = K
        self._gen = _primes_by_norm(K)
        self.position = 0

    def __iter__(self):
        return self

    def __next__(self):
        self.position += 1
        return next(self._gen)


def _primes_by_norm(K):
    heap = []
    counter = itertools.count()
    p = 1
    while True:
        p = int(nextprime(p))
        for P in primes_above(K, p):
            heapq.heappush(heap, (P.sort_key, next(counter), P))
        while heap and heap[0][0][0] <= p:
            yield heapq.heappop(heap)[2]


def next_prime_outside(S, cursor):
    S = set(S)
    for P in cursor:
        if P not in S:
            return P


def primes_up_to_norm(K, bound):
    out = []
    for P in PrimeCursor(K):
        if P.norm > bound:
            return out
        out.append(P)


# ---------------------------------------------------------------------------
# prime ideal text format


def parse_prime(K, text):
    s = text.strip()
    m = re.fullmatch(r"\(\s*(\d+)\s*(?:,(.*))?\)", s)
    if not m:
        raise ParseError(f"cannot parse prime ideal {text!r}")
    p = int(m.group(1))
    cands = primes_above(K, p)
    if m.group(2) is None:
        if len(cands) != 1:
            raise ParseError(f"({p}) is not prime in {K}")
        return cands[0]
    g = parse_element(K, m.group(2))
    hits = [P for P in cands if P.ideal().contains(g)]
    if len(hits) != 1:
        raise ParseError(f"{text!r} does not determine a unique prime")
    P = hits[0]
    if not P.ideal() == Ideal.from_elements(K, [K(p), g]):
        raise ParseError(f"{text!r} is not a prime ideal")
    return P


# ---------------------------------------------------------------------------
# integral ideals as Z-lattices


def _egcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


class Ideal:
    """Nonzero integral ideal with Hermite basis {n1, s + n2*omega}.

    Over Q only n1 is meaningful (the ideal n1*Z).
    """

    __slots__ = ("K", "n1", "s", "n2")

    def __init__(self, K, n1, s=0, n2=1):
        self.K, self.n1, self.s, self.n2 = K, n1, s % n1 if n1 else s, n2

    @classmethod
    def from_vectors(cls, K, vecs):
        if K.degree == 1:
            g = 0
            for v in vecs:
                g = gcd(g, v[0])
            return cls(K, g)
        n1 = 0
        w = None
        for x, y in vecs:
            if w is None:
                if y == 0:
                    n1 = gcd(n1, x)
                else:
                    w = (x, y)
                continue
            if y == 0:
                n1 = gcd(n1, x)
                continue
            g, u, v = _egcd(w[1], y)
            new_w = (u * w[0] + v * x, g)
            other = (y // g) * w[0] - (w[1] // g) * x
            n1 = gcd(n1, other)
            w = new_w
        if w is None or n1 == 0:
            raise ValueError("vectors do not span a full-rank lattice")
        x, y = w
        if y < 0:
            x, y = -x, -y
        return cls(K, n1, x, y)

    @classmethod
    def from_elements(cls, K, gens):
        vecs = []
        for g in gens:
            m, c = g.integral_coords()
            if m != 1:
                raise ValueError(f"{g} is not integral")
            vecs.append(c)
            if K.degree == 2:
                m2, c2 = (g * K.omega).integral_coords()
                vecs.append(c2)
        return cls.from_vectors(K, vecs)

    def basis(self):
        K = self.K
        if K.degree == 1:
            return [K(self.n1)]
        return [K(self.n1), from_integral_coords(K, (self.s, self.n2))]

    def norm(self):
        return self.n1 * self.n2 if self.K.degree == 2 else self.n1

    def contains(self, x):
        m, c = x.integral_coords()
        if m != 1:
            return False
        if self.K.degree == 1:
            return c[0] % self.n1 == 0
        a, b = c
        if b % self.n2:
            return False
        return (a - (b // self.n2) * self.s) % self.n1 == 0

    def __mul__(self, other):
        K = self.K
        vecs = []
        for x in self.basis():
            for y in other.basis():
                vecs.append((x * y).integral_coords()[1])
        return Ideal.from_vectors(K, vecs)

    def __pow__(self, k):
        out = Ideal(self.K, 1, 0, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return (isinstance(other, Ideal) and other.K is self.K
                and (self.n1, self.s, self.n2) == (other.n1, other.s, other.n2))

    def __hash__(self):
        return hash((id(self.K), self.n1, self.s, self.n2))

    def __repr__(self):
        return f"Ideal[{self.n1}, {self.s}+{self.n2}w]"


def ideal_of(x):
    """The principal ideal generated by the integral element x."""
    return Ideal.from_elements(x.K, [x])
