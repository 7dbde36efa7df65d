"""Local invariants: square classes, Hilbert symbols, Hasse invariants and
anisotropic dimensions over the completions of a field of degree <= 2.

Finite residue rings O/P^N are modelled concretely (integers mod p^N for
split or rational primes, integral-basis coordinate pairs mod p^M for
inert and ramified primes).  Dyadic symbols are decided by an exhaustive
search for primitive zeros in such a ring; the precision used is large
enough for Hensel lifting.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import legendre_symbol

from .errors import DegenerateForm, InfiniteValuation
from .field_core import FieldElt, RealPlace, sign_at
from .ideals import PrimeIdeal, dyadic_primes, ord_at, split_image, vp

_LOCK = threading.RLock()


@dataclass(frozen=True)
class ComplexPlace:
    field: object
    index: int = 0

    def __str__(self):
        return f"complex place {self.index}"


def complex_places(K):
    return [ComplexPlace(K, i) for i in range(K.r2)]


def infinite_places(K):
    return list(K.real_places) + complex_places(K)


def _elt(K, x):
    return x if isinstance(x, FieldElt) else K(x)


# ---------------------------------------------------------------------------
# residue rings


class ResidueRing:
    """O_K / P^N, or a slightly finer quotient for ramified P (N rounded up to even).

    Elements are encoded as integers 0 .. size-1.
    """

    def __init__(self, P, N):
        self.P = P
        self.p = p = P.p
        self.kind = P.kind
        if self.kind in ("rational", "split"):
            self.M = N
            self.paired = False
        elif self.kind == "inert":
            self.M = N
            self.paired = True
        else:
            self.M = (N + 1) // 2
            self.paired = True
        self.N = 2 * self.M if self.kind == "ramified" else self.M
        self.m = p ** self.M
        self.size = self.m * self.m if self.paired else self.m
        idx = np.arange(self.size, dtype=np.int64)
        if self.paired:
            t, n = P.K.omega_trace_norm
            self._t, self._n = t, n
            a, b = idx // self.m, idx % self.m
            if self.kind == "inert":
                unit = (a % p != 0) | (b % p != 0)
            else:
                unit = (a * a + t * a * b + n * b * b) % p != 0
        else:
            unit = idx % p != 0
        self.unit_mask = unit
        self._add = None
        self._squares = None

    # ---- encoding
    def encode(self, x):
        """Image of a P-integral element."""
        K = self.P.K
        x = _elt(K, x)
        if not self.paired:
            return split_image(x, self.P, self.M)
        m, (a, b) = x.integral_coords()
        p = self.p
        k = vp(m, p) if m % p == 0 else 0
        if k:
            q = p ** k
            if a % q or b % q:
                raise ValueError(f"{x} is not integral at {self.P}")
            a //= q
            b //= q
            m //= q
        inv = pow(m, -1, self.m)
        return (a * inv % self.m) * self.m + (b * inv % self.m)

    def mul(self, i, j):
        if not self.paired:
            return (np.asarray(i, dtype=np.int64) * j) % self.m
        m = self.m
        i = np.asarray(i, dtype=np.int64)
        j = np.asarray(j, dtype=np.int64)
        a, b = i // m, i % m
        c, d = j // m, j % m
        bd = b * d
        re = (a * c - self._n * bd) % m
        im = (a * d + b * c + self._t * bd) % m
        return re * m + im

    @property
    def add_table(self):
        if self._add is None:
            idx = np.arange(self.size, dtype=np.int64)
            if self.paired:
                m = self.m
                a, b = idx // m, idx % m
                tbl = ((a[:, None] + a[None, :]) % m) * m + (b[:, None] + b[None, :]) % m
            else:
                tbl = (idx[:, None] + idx[None, :]) % self.m
            self._add = tbl.astype(np.int32)
        return self._add

    @property
    def squares(self):
        if self._squares is None:
            idx = np.arange(self.size, dtype=np.int64)
            self._squares = self.mul(idx, idx)
        return self._squares

    def unit_square_set(self):
        return set(np.unique(self.squares[self.unit_mask]).tolist())


_RINGS = {}


def residue_ring(P, N):
    key = (P, N if P.kind != "ramified" else (N + 1) // 2)
    with _LOCK:
        R = _RINGS.get(key)
        if R is None:
            R = _RINGS[key] = ResidueRing(P, N)
        return R


def _reach(ring, state, vals):
    out = np.zeros(ring.size, dtype=bool)
    src = np.nonzero(state)[0]
    if len(src) and len(vals):
        out[ring.add_table[np.ix_(src, vals)].ravel()] = True
    return out


def has_primitive_zero(ring, coeff_codes):
    """True iff sum c_i x_i^2 = 0 has a solution in the ring with some x_i a unit."""
    sq = ring.squares
    reach_any = np.zeros(ring.size, dtype=bool)
    reach_any[0] = True
    reach_prim = np.zeros(ring.size, dtype=bool)
    for c in coeff_codes:
        vals = ring.mul(np.full(ring.size, c, dtype=np.int64), sq)
        v_unit = np.unique(vals[ring.unit_mask])
        v_all = np.unique(vals)
        reach_prim = _reach(ring, reach_prim, v_all) | _reach(ring, reach_any, v_unit)
        reach_any = _reach(ring, reach_any, v_all)
    return bool(reach_prim[0])


# ---------------------------------------------------------------------------
# local field data at a finite prime


def _inverse_pi_power(P, k):
    """pi^-k as a global element, via pi^-1 = conj(pi)/N(pi)."""
    pi = P.uniformizer
    if P.K.degree == 1:
        return P.K(Fraction(1, P.p ** k))
    return (pi.conjugate() / pi.norm()) ** k if k else P.K.one


class LocalField:
    """Data at a finite prime: uniformizer, unit parts, residues, square classes."""

    def __init__(self, P):
        P.K.require_degree(2)
        self.P = P
        self.K = P.K
        self.p = P.p
        self.q = P.norm
        self.e = P.e * (1 if P.p == 2 else 0)  # ord_P(2)
        self.pi = P.uniformizer
        self._pi_inv = _inverse_pi_power(P, 1)
        self._u = None
        self.dyadic = P.p == 2
        if self.dyadic:
            self.ring = residue_ring(P, 2 * self.e + 3)
            self._unit_squares = self.ring.unit_square_set()
            self._sq_arr = np.array(sorted(self._unit_squares), dtype=np.int64)
            self._coset_min = {}
        else:
            self.ring = None

    def ord(self, x):
        return ord_at(x, self.P)

    def unit_part(self, x, v=None):
        """x / pi^v with v = ord(x)."""
        x = _elt(self.K, x)
        if v is None:
            v = self.ord(x)
        if v == 0:
            return x
        if v > 0:
            return x * self._pi_inv ** v
        return x * self.pi ** (-v)

    def normalize(self, x):
        """(x / pi^(2k), v mod 2) with v = ord(x), k = floor(v/2)."""
        v = self.ord(x)
        k = v // 2
        return self.unit_part(x, 2 * k) if k else _elt(self.K, x), v % 2

    def residue_code(self, x):
        """Image of a P-unit in the residue field, as an int (inert: a + b*p)."""
        P, p = self.P, self.p
        x = _elt(self.K, x)
        if P.kind in ("rational", "split"):
            return split_image(x, P, 1)
        m, (a, b) = x.integral_coords()
        k = vp(m, p) if m % p == 0 else 0
        if k:
            a //= p ** k
            b //= p ** k
            m //= p ** k
        inv = pow(m, -1, p)
        a, b = a * inv % p, b * inv % p
        if P.kind == "ramified":
            return (a + b * P.r) % p
        return a + b * p

    def chi(self, x):
        """Quadratic residue character of a P-unit (odd P only)."""
        c = self.residue_code(x)
        p = self.p
        if self.P.kind == "inert":
            t, n = self.K.omega_trace_norm
            a, b = c % p, c // p
            c = (a * a + t * a * b + n * b * b) % p
        if c % p == 0:
            raise ValueError("chi of a non-unit")
        return int(legendre_symbol(c % p, p))

    @property
    def u(self):
        """Smallest-norm lift of the first non-residue of the residue field."""
        if self._u is None:
            if self.dyadic:
                self._u = self._dyadic_u()
            else:
                p = self.p
                if self.P.kind == "inert":
                    omega = self.K.omega
                    cand = (a + b * omega for b in range(1, p) for a in range(p))
                else:
                    cand = (self.K(a) for a in range(2, p))
                self._u = next(c for c in cand if self.chi(c) == -1)
        return self._u

    def _dyadic_u(self):
        # a unit that is not a local square
        for x in self._small_integral():
            if not x.is_zero() and self.ord(x) == 0 and not self.is_square(x):
                return x
        raise AssertionError("no non-square unit found")

    def _small_integral(self):
        K = self.K
        B = 1
        while True:
            for a in range(-B, B + 1):
                for b in range(-B, B + 1) if K.degree == 2 else (0,):
                    if max(abs(a), abs(b)) == B:
                        yield K(a) if K.degree == 1 else a + b * K.omega
            B += 1

    def is_square(self, x):
        x = _elt(self.K, x)
        if x.is_zero():
            raise InfiniteValuation("0 has no square class")
        v = self.ord(x)
        if v % 2:
            return False
        u = self.unit_part(x, v)
        if not self.dyadic:
            return self.chi(u) == 1
        return self.ring.encode(u) in self._unit_squares

    def square_class_key(self, x):
        """Hashable key that determines the local square class of x."""
        y, par = self.normalize(x)
        if not self.dyadic:
            return (par, self.chi(self.unit_part(y, par)))
        code = self.ring.encode(y)
        c = self._coset_min.get(code)
        if c is None:
            # canonical representative of the coset code * (unit squares)
            c = int(self.ring.mul(np.int64(code), self._sq_arr).min())
            self._coset_min[code] = c
        return (par, c)

    def square_class_rep(self, x):
        """Representative among {1, u, pi, u*pi} (non-dyadic only)."""
        par, ch = self.square_class_key(x)
        rep = self.K.one
        if ch == -1:
            rep = rep * self.u
        if par:
            rep = rep * self.pi
        return rep

    def hilbert(self, a, b):
        if self.dyadic:
            ka, kb = self.square_class_key(a), self.square_class_key(b)
            key = (self.P, ka, kb)
            with _LOCK:
                hit = _DYADIC_CACHE.get(key)
            if hit is None:
                ring = self.ring
                codes = [ring.encode(1), ring.encode(-self.normalize(a)[0]), ring.encode(-self.normalize(b)[0])]
                hit = 1 if has_primitive_zero(ring, codes) else -1
                with _LOCK:
                    _DYADIC_CACHE[key] = hit
                    _DYADIC_CACHE[(self.P, kb, ka)] = hit
            return hit
        al, be = self.ord(a), self.ord(b)
        ua, ub = self.unit_part(a, al), self.unit_part(b, be)
        s = -1 if (al * be * ((self.q - 1) // 2)) % 2 else 1
        if be % 2:
            s *= self.chi(ua)
        if al % 2:
            s *= self.chi(ub)
        return s


_DYADIC_CACHE = {}
_LOCAL_FIELDS = {}


def local_field(P):
    with _LOCK:
        L = _LOCAL_FIELDS.get(P)
    if L is None:
        L = LocalField(P)
        with _LOCK:
            _LOCAL_FIELDS[P] = L
    return L


@dataclass(frozen=True)
class LocalSquareClass:
    place: PrimeIdeal
    rep: FieldElt

    @classmethod
    def of(cls, x, P):
        return cls(P, local_field(P).square_class_rep(x))

    def __mul__(self, other):
        return LocalSquareClass.of(self.rep * other.rep, self.place)

    def __eq__(self, other):
        L = local_field(self.place)
        return self.place == other.place and L.square_class_key(self.rep) == L.square_class_key(other.rep)

    def __hash__(self):
        return hash((self.place, local_field(self.place).square_class_key(self.rep)))


# ---------------------------------------------------------------------------
# public operations


_POWER_BASIS_SQUARES = {}


def _unit_squares_power_basis(K, p, N):
    """Squares of units in (Z/p^N)[x]/(f), as coordinate tuples (p inert)."""
    key = (id(K), p, N)
    if key not in _POWER_BASIS_SQUARES:
        mod = p ** N
        out = set()
        for coords in itertools.product(range(mod), repeat=K.degree):
            if all(c % p == 0 for c in coords):
                continue
            y = K(*coords) ** 2
            out.add(tuple(int(c) % mod for c in y.c))
        _POWER_BASIS_SQUARES[key] = out
    return _POWER_BASIS_SQUARES[key]


def _is_square_inert_power_basis(x, P):
    # P = pO with Z[theta] p-maximal; u is a square iff it is one mod p^(2e+1)
    K, p = P.K, P.p
    v = ord_at(x, P)
    if v % 2:
        return False
    u = x * Fraction(1, p ** v) if v >= 0 else x * p ** (-v)
    N = 3 if p == 2 else 1
    mod = p ** N
    red = tuple(c.numerator * pow(c.denominator, -1, mod) % mod for c in u.c)
    return red in _unit_squares_power_basis(K, p, N)


def is_local_square(x, P):
    if P.K.degree > 2:
        return _is_square_inert_power_basis(_elt(P.K, x), P)
    return local_field(P).is_square(x)


def hilbert(a, b, v):
    """Hilbert symbol (a, b)_v at a real, complex or finite place."""
    if isinstance(v, ComplexPlace):
        K = v.field
    elif isinstance(v, RealPlace):
        K = v.field
    else:
        K = v.K
    a, b = _elt(K, a), _elt(K, b)
    if a.is_zero() or b.is_zero():
        raise InfiniteValuation("Hilbert symbol of zero")
    if isinstance(v, ComplexPlace):
        return 1
    if isinstance(v, RealPlace):
        return -1 if sign_at(a, v) < 0 and sign_at(b, v) < 0 else 1
    return local_field(v).hilbert(a, b)


def _coeffs(q):
    cs = list(getattr(q, "coeffs", q))
    for c in cs:
        if (c.is_zero() if isinstance(c, FieldElt) else c == 0):
            raise DegenerateForm("zero coefficient")
    return cs


def hasse(q, v):
    """prod_{i<j} (a_i, a_j)_v."""
    cs = _coeffs(q)
    s = 1
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            s *= hilbert(cs[i], cs[j], v)
    return s


def _product(K, cs):
    out = K.one
    for c in cs:
        out = out * c
    return out


def _isotropic_by_invariants(n, D, s, P):
    """Isotropy of a form with dim n, unsigned determinant D and Hasse s at P."""
    K = P.K
    L = local_field(P)
    if n <= 1:
        return False
    if n == 2:
        return L.is_square(-D)
    if n == 3:
        return hilbert(K(-1), -D, P) == s
    if n == 4:
        return (not L.is_square(D)) or s == hilbert(K(-1), K(-1), P)
    return True


def local_adim_from_invariants(n, D, s, P):
    """Anisotropic dimension at a finite prime from (dim, unsigned det, Hasse)."""
    K = P.K
    while n >= 2 and _isotropic_by_invariants(n, D, s, P):
        D = -D
        s = s * hilbert(K(-1), D, P)
        n -= 2
    return n


def local_adim(q, v):
    cs = _coeffs(q)
    n = len(cs)
    if isinstance(v, ComplexPlace):
        return n % 2
    if isinstance(v, RealPlace):
        return abs(sum(sign_at(c if isinstance(c, FieldElt) else v.field(c), v) for c in cs))
    K = v.K
    cs = [_elt(K, c) for c in cs]
    return local_adim_from_invariants(n, _product(K, cs), hasse(cs, v), v)


def search_isotropic(cs, P, N=None):
    """Brute-force isotropy oracle: primitive zero of the diagonal form mod P^N.

    Coefficients are first normalised to valuation 0 or 1; N defaults to
    2e + 2 + (max normalised valuation), which is Hensel-sufficient.
    """
    L = local_field(P)
    norm = [L.normalize(_elt(P.K, c)) for c in cs]
    if N is None:
        N = 2 * L.e + 2 + max(par for _, par in norm)
    ring = residue_ring(P, N)
    return has_primitive_zero(ring, [ring.encode(y) for y, _ in norm])


def places_for_reciprocity(a, b):
    """Real places and every prime where (a, b) can be nontrivial."""
    from .ideals import factor_principal

    K = a.K
    K.require_degree(2)
    fin = set(dyadic_primes(K))
    for x in (a, b):
        fin.update(P for P, _ in factor_principal(x))
    return list(K.real_places) + complex_places(K) + sorted(fin, key=lambda P: P.sort_key)


__all__ = [
    "ComplexPlace",
    "LocalField",
    "LocalSquareClass",
    "ResidueRing",
    "complex_places",
    "has_primitive_zero",
    "hasse",
    "hilbert",
    "infinite_places",
    "is_local_square",
    "local_adim",
    "local_adim_from_invariants",
    "local_field",
    "places_for_reciprocity",
    "residue_ring",
    "search_isotropic",
]
