"""Independent reference computations used by the test suite.

Nothing here calls into the package's algorithms except for structural
data (the prime's defining root r, the field's d).  The point is to have a
second, deliberately naive route to each answer.
"""

from fractions import Fraction
from math import gcd, isqrt

import numpy as np


def omega_tn(d):
    """(t, n) with omega^2 = t*omega - n."""
    return (1, (1 - d) // 4) if d % 4 == 1 else (0, -d)


def field_disc(d):
    return d if d % 4 == 1 else 4 * d


# ---------------------------------------------------------------------------
# class numbers by counting reduced binary quadratic forms


def class_number_imag(d):
    """h(Q(sqrt(d))) for d < 0, counting reduced forms of discriminant D."""
    D = field_disc(d)
    h = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if c == a and b < 0:
                continue
            if gcd(gcd(a, abs(b)), c) != 1:
                continue
            h += 1
        a += 1
    return h


def fundamental_unit_brute(d, limit=10**6):
    """Smallest unit > 1 of Q(sqrt(d)), d > 0, as power-basis coordinates (c0, c1)."""
    D = field_disc(d)
    for y in range(1, limit):
        for s in (-4, 4):
            x2 = D * y * y + s
            x = isqrt(x2)
            if x * x == x2:
                # (x + y sqrt(D))/2
                if D == 4 * d:
                    return (Fraction(x, 2), Fraction(y))
                return (Fraction(x, 2), Fraction(y, 2))
    raise RuntimeError("unit not found")


# ---------------------------------------------------------------------------
# local residue rings, built by brute force


class NaiveRing:
    """O/P^N for the quadratic field Q(sqrt(d)) (or Q when d is None)."""

    def __init__(self, d, p, kind, r, N):
        self.d, self.p, self.kind = d, p, kind
        if d is None or kind == "split":
            self.shape = (p ** N,)
            self.mod = p ** N
            self.rho = None
            if d is not None:
                t, n = omega_tn(d)
                # brute-force lift of r to a root of x^2 - t x + n mod p^N
                cands = [x for x in range(r, self.mod, p) if (x * x - t * x + n) % self.mod == 0]
                self.rho = cands[0]
        else:
            M = N if kind == "inert" else -(-N // 2)
            self.mod = p ** M
            self.shape = (self.mod, self.mod)
            self.t, self.n = omega_tn(d)

    def image(self, a, b=0):
        """Image of the integral element a + b*omega."""
        if len(self.shape) == 1:
            v = a if self.rho is None else a + b * self.rho
            return (v % self.mod,)
        return (a % self.mod, b % self.mod)

    def elements(self):
        if len(self.shape) == 1:
            for x in range(self.mod):
                yield (x,)
        else:
            for a in range(self.mod):
                for b in range(self.mod):
                    yield (a, b)

    def mul(self, x, y):
        if len(self.shape) == 1:
            return ((x[0] * y[0]) % self.mod,)
        a, b = x
        c, e = y
        bd = b * e
        return ((a * c - self.n * bd) % self.mod, (a * e + b * c + self.t * bd) % self.mod)

    def is_unit(self, x):
        p = self.p
        if len(self.shape) == 1:
            return x[0] % p != 0
        a, b = x
        if self.kind == "inert":
            return a % p != 0 or b % p != 0
        return (a * a + self.t * a * b + self.n * b * b) % p != 0


def primitive_zero_by_rolling(ring, coeffs):
    """Exhaustive primitive-zero search using cyclic shifts of boolean arrays."""
    elems = list(ring.elements())
    any_r = np.zeros(ring.shape, dtype=bool)
    any_r[(0,) * len(ring.shape)] = True
    prim_r = np.zeros(ring.shape, dtype=bool)
    for c in coeffs:
        unit_vals, all_vals = set(), set()
        for x in elems:
            v = ring.mul(c, ring.mul(x, x))
            all_vals.add(v)
            if ring.is_unit(x):
                unit_vals.add(v)
        new_any = np.zeros(ring.shape, dtype=bool)
        new_prim = np.zeros(ring.shape, dtype=bool)
        axes = tuple(range(len(ring.shape)))
        for v in all_vals:
            new_any |= np.roll(any_r, v, axis=axes)
            new_prim |= np.roll(prim_r, v, axis=axes)
        for v in unit_vals:
            new_prim |= np.roll(any_r, v, axis=axes)
        any_r, prim_r = new_any, new_prim
        if prim_r.all():
            return True
    return bool(prim_r[(0,) * len(ring.shape)])


def local_uniformizer_coords(d, p, kind, r):
    """Integral-basis coordinates (a, b) of a small element of valuation 1 at P."""
    if d is None or kind == "inert":
        return (p, 0)
    t, n = omega_tn(d)
    for B in range(1, 50):
        for a in range(-B, B + 1):
            for b in range(-B, B + 1):
                if max(abs(a), abs(b)) != B:
                    continue
                N = a * a + t * a * b + n * b * b
                if N == 0 or N % p or (N // p) % p == 0:
                    continue
                if kind == "split" and (a + b * r) % p:
                    continue
                return (a, b)
    raise RuntimeError("no uniformizer")


def is_unit_coords(d, p, kind, r, a, b):
    if d is None:
        return a % p != 0
    t, n = omega_tn(d)
    if kind == "split":
        return (a + b * r) % p != 0
    if kind == "inert":
        return a % p != 0 or b % p != 0
    return (a * a + t * a * b + n * b * b) % p != 0


# ---------------------------------------------------------------------------
# quadratic characters used for fingerprints


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def residue_char(x, d, p, kind, r):
    """Quadratic character at P (odd, x a P-unit) from power-basis coordinates."""
    c0, c1 = (x.c + (Fraction(0), Fraction(0)))[:2]
    if d is None:
        v = c0.numerator * pow(c0.denominator, -1, p)
        return legendre(v, p)
    # convert to omega-coordinates: x = c0 + c1*sqrt(d)
    if d % 4 == 1:
        a, b = c0 - c1, 2 * c1
    else:
        a, b = c0, c1
    den = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
    A, B = int(a * den), int(b * den)
    inv = pow(den, -1, p)
    if kind == "split":
        return legendre((A + B * r) * inv, p)
    t, n = omega_tn(d)
    N = (A * A + t * A * B + n * B * B) * inv * inv
    return legendre(N, p)


# ---------------------------------------------------------------------------
# Hilbert symbol over Q_p from the classical closed formulas


def _split_p(x, p):
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x


def hilbert_qp(a, b, p):
    """(a, b)_p for nonzero integers a, b; p = -1 means the real place."""
    if p == -1:
        return -1 if a < 0 and b < 0 else 1
    al, u = _split_p(a, p)
    be, w = _split_p(b, p)
    if p != 2:
        s = (-1) ** (al * be * ((p - 1) // 2))
        if be % 2:
            s *= legendre(u, p)
        if al % 2:
            s *= legendre(w, p)
        return s

    def eps(x):
        return ((x - 1) // 2) % 2

    def om(x):
        return ((x * x - 1) // 8) % 2

    e = eps(u) * eps(w) + al * om(w) + be * om(u)
    return -1 if e % 2 else 1


# ---------------------------------------------------------------------------
# bounded search for zeros of a diagonal form (meet in the middle)


class SearchInfeasible(Exception):
    pass


def _real_sign(c0, c1, d, s):
    # sign of c0 + s*c1*sqrt(d), d > 0 not a square
    x, y = c0, s * c1
    if x >= 0 and y >= 0:
        return 1 if (x or y) else 0
    if x <= 0 and y <= 0:
        return -1
    lhs, rhs = x * x, y * y * d
    if lhs == rhs:
        return 0
    return (1 if x > 0 else -1) if lhs > rhs else (1 if y > 0 else -1)


def definite_somewhere(d, coeffs):
    """True if all coefficients share a sign at some real embedding."""
    if d is None:
        places = [[1 if c[0] > 0 else -1 for c in coeffs]]
    elif d < 0:
        return False
    else:
        places = [[_real_sign(c[0], c[1], d, s) for c in coeffs] for s in (1, -1)]
    return any(len(set(sg)) == 1 for sg in places)


def _hash_primes(d, avoid, count=2, start=2**31 - 1):
    from sympy import prevprime
    from sympy.ntheory import sqrt_mod
    out, p = [], start
    while len(out) < count:
        p = prevprime(p)
        if avoid % p == 0:
            continue
        if d is None:
            out.append((p, None))
        elif legendre(d, p) == 1:
            out.append((p, sqrt_mod(d % p, p)))
    return out


def _box_reps(d, H):
    """Integral-basis points with |coords| <= H, one of each pair +-x (zero included)."""
    if d is None:
        return [(u, 0) for u in range(0, H + 1)]
    return [(u, v) for u in range(0, H + 1) for v in range(-H, H + 1) if u > 0 or v >= 0]


def _exact_value(d, coeffs, xs):
    # sum a_i x_i^2 in power-basis coordinates
    t0, t1 = Fraction(0), Fraction(0)
    for (c0, c1), (u, v) in zip(coeffs, xs):
        if d is None:
            y0, y1 = Fraction(u), Fraction(0)
        elif d % 4 == 1:
            y0, y1 = u + Fraction(v, 2), Fraction(v, 2)
        else:
            y0, y1 = Fraction(u), Fraction(v)
        s0, s1 = y0 * y0 + (d or 0) * y1 * y1, 2 * y0 * y1
        t0 += c0 * s0 + (d or 0) * c1 * s1
        t1 += c0 * s1 + c1 * s0
    return t0, t1


def bounded_zero_search(d, coeffs, height=50, chunk=256):
    """A nonzero zero of <a_1..a_n> with integral-basis coordinates of height <= height, or None.

    coeffs are power-basis pairs (c0, c1) meaning c0 + c1*sqrt(d) (c1 = 0 over Q).
    Forms definite at a real place have no zero at all and are answered directly;
    otherwise dims 2..4 are searched completely by meet in the middle with
    hashing modulo two split primes and exact verification of every hit.
    """
    n = len(coeffs)
    coeffs = [(Fraction(c[0]), Fraction(c[1]) if len(c) > 1 else Fraction(0)) for c in coeffs]
    if n <= 1 or definite_somewhere(d, coeffs):
        return None
    if n > 4:
        raise SearchInfeasible(f"dim {n} indefinite form")
    avoid = 2 * (abs(d) if d else 1)
    for c0, c1 in coeffs:
        avoid *= c0.denominator * c1.denominator
    reps = _box_reps(d, height)
    U = np.array([r[0] for r in reps], dtype=np.int64)
    V = np.array([r[1] for r in reps], dtype=np.int64)
    primes = _hash_primes(d, avoid)
    # per coordinate: a_i * x^2 mod p, for both primes
    vals = []
    for c0, c1 in coeffs:
        per = []
        for p, s in primes:
            inv2 = pow(2, -1, p)
            a = (c0.numerator * pow(c0.denominator, -1, p) + (c1.numerator * pow(c1.denominator, -1, p) * (s or 0))) % p
            w = 0 if d is None else ((1 + s) * inv2 % p if d % 4 == 1 else s)
            x = (U + V * w) % p
            per.append(x * x % p * a % p)
        vals.append(per)
    (p1, _), (p2, _) = primes

    def key(k1, k2):
        return k1 * p2 + k2

    def pair_keys(i, j, rows, neg):
        # keys of vals[i][rows] + vals[j][:] (or their negation), flattened row-major
        out = []
        for (pp, _), a, b in zip(primes, vals[i], vals[j]):
            t = (a[rows, None] + b[None, :]) % pp
            out.append((pp - t) % pp if neg else t)
        return key(out[0], out[1]).ravel()

    m = len(reps)
    if n == 2:
        left_idx, right_idx = [0], [1]
    elif n == 3:
        left_idx, right_idx = [0, 1], [2]
    else:
        left_idx, right_idx = [0, 1], [2, 3]
    if len(right_idx) == 1:
        (j,) = right_idx
        rk = key((p1 - vals[j][0]) % p1, (p2 - vals[j][1]) % p2)
    else:
        rk = np.concatenate([pair_keys(right_idx[0], right_idx[1], np.arange(r, min(r + chunk, m)), True)
                             for r in range(0, m, chunk)])
    rks = np.sort(rk)

    def right_vecs(k):
        for flat in np.nonzero(rk == k)[0]:
            flat = int(flat)
            yield [reps[flat]] if len(right_idx) == 1 else [reps[flat // m], reps[flat % m]]

    if len(left_idx) == 1:
        blocks = [(None, key(vals[0][0], vals[0][1]))]
    else:
        blocks = ((r, pair_keys(0, 1, np.arange(r, min(r + 16 * chunk, m)), False)) for r in range(0, m, 16 * chunk))
    for start, lk in blocks:
        lks = np.unique(lk)
        pos = np.minimum(np.searchsorted(rks, lks), len(rks) - 1)
        for k in lks[rks[pos] == lks]:
            for h in np.nonzero(lk == k)[0]:
                left = [reps[h]] if start is None else [reps[start + h // m], reps[h % m]]
                for right in right_vecs(k):
                    xs = left + right
                    if all(x == (0, 0) for x in xs):
                        continue
                    if _exact_value(d, coeffs, xs) == (0, 0):
                        return xs
    return None
