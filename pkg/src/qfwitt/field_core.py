"""Exact arithmetic in Q and Q(sqrt(d)), real embeddings by root isolation.

Elements are stored over the power basis {1, t, ..., t^(n-1)} with
Fraction coefficients, where t is a root of the monic defining
polynomial.  For quadratic fields the defining polynomial is x^2 - d,
so t = sqrt(d).

Real places are represented by rational isolating intervals of the
real roots of the defining polynomial.  Signs of elements at a real
place are decided by interval evaluation, refining the interval by
bisection until the image interval excludes zero.
"""

from __future__ import annotations

import re
import threading
from fractions import Fraction
from math import gcd, isqrt

from sympy import factorint

from .errors import InvalidField, ParseError, UnsupportedDegree, ZeroSign

# ---------------------------------------------------------------------------
# rational polynomials (coefficient lists, lowest degree first)


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_rem(a, b):
    a = [Fraction(c) for c in a]
    b = _trim(b)
    while len(_trim(a)) >= len(b):
        a = _trim(a)
        if not a:
            break
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a = _trim(a)
    return _trim(a)


def _derivative(p):
    return [i * p[i] for i in range(1, len(p))]


def sturm_sequence(f):
    seq = [_trim([Fraction(c) for c in f]), _trim(_derivative(f))]
    while True:
        r = _poly_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq, x):
    signs = []
    for p in seq:
        v = poly_eval(p, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def isolate_real_roots(f):
    """Return disjoint rational intervals (a, b), one per real root of the
    squarefree polynomial f, sorted left to right.  Endpoints are never roots."""
    seq = sturm_sequence(f)
    bound = 1 + max(abs(Fraction(c)) for c in f[:-1]) / abs(Fraction(f[-1]))
    bound = Fraction(int(bound) + 1)
    out = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        n = _sign_changes(seq, a) - _sign_changes(seq, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        if poly_eval(f, m) == 0:
            # rational root, only possible for f = x; nudge the split point
            m += (b - a) / 7
        stack.append((a, m))
        stack.append((m, b))
    out.sort()
    return out


def _imul(x, y):
    prods = (x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1])
    return (min(prods), max(prods))


def interval_eval(p, lo, hi):
    """Enclosure of {p(x) : lo <= x <= hi} by interval Horner."""
    acc = (Fraction(0), Fraction(0))
    for c in reversed(p):
        acc = _imul(acc, (lo, hi))
        acc = (acc[0] + c, acc[1] + c)
    return acc


# ---------------------------------------------------------------------------


class RealPlace:
    """A real embedding, given by an isolating interval of a root of f."""

    def __init__(self, field, index, interval):
        self.field = field
        self.index = index
        self._lo, self._hi = interval
        self._lock = threading.Lock()

    @property
    def isolating_interval(self):
        return (self._lo, self._hi)

    @property
    def precision(self):
        return self._hi - self._lo

    def refine(self):
        """Halve the isolating interval."""
        f = self.field.def_poly
        with self._lock:
            lo, hi = self._lo, self._hi
            if lo == hi:
                return
            m = (lo + hi) / 2
            fm = poly_eval(f, m)
            if fm == 0:
                self._lo = self._hi = m
            elif (poly_eval(f, lo) > 0) == (fm > 0):
                self._lo = m
            else:
                self._hi = m

    def enclose(self, x, width=None):
        """Rational interval containing sigma(x); refined to `width` if given."""
        if width is not None:
            while True:
                lo, hi = interval_eval(list(x.c), *self.isolating_interval)
                if hi - lo <= width:
                    return lo, hi
                self.refine()
        return interval_eval(list(x.c), *self.isolating_interval)

    def __repr__(self):
        return f"RealPlace({self.index}, ({self._lo}, {self._hi}))"


# ---------------------------------------------------------------------------


def _is_squarefree(n):
    return all(e == 1 for e in factorint(abs(n)).values())


_FIELD_CACHE = {}
_FIELD_LOCK = threading.Lock()

CUBIC_POLY = (-1, -3, 0, 1)  # x^3 - 3x - 1, totally real


class NumberField:
    """Q, Q(sqrt(d)), or the fixed totally real cubic used for sign tests.

    Use :func:`make_field` rather than the constructor; fields are interned so
    that identity comparison works.
    """

    def __init__(self, def_poly, d=None, name=None):
        self.def_poly = tuple(Fraction(c) for c in def_poly)
        self.degree = len(def_poly) - 1
        self.d = d
        self.name = name
        roots = isolate_real_roots(list(self.def_poly))
        self.real_places = [RealPlace(self, i, iv) for i, iv in enumerate(roots)]
        self.r1 = len(roots)
        self.r2 = (self.degree - self.r1) // 2
        if self.degree == 1:
            self.disc_K = 1
        elif self.degree == 2:
            self.disc_K = d if d % 4 == 1 else 4 * d
        else:
            self.disc_K = None
        self._eta_cache = {}

    # ---- basic elements
    def __call__(self, *coeffs):
        return FieldElt(self, coeffs)

    @property
    def one(self):
        return FieldElt(self, (1,))

    @property
    def zero(self):
        return FieldElt(self, ())

    @property
    def gen(self):
        return FieldElt(self, (0, 1))

    @property
    def omega(self):
        """Second integral basis element (quadratic fields)."""
        if self.degree != 2:
            raise UnsupportedDegree("integral basis only for quadratic fields")
        if self.d % 4 == 1:
            return FieldElt(self, (Fraction(1, 2), Fraction(1, 2)))
        return self.gen

    @property
    def integral_basis(self):
        if self.degree == 1:
            return [self.one]
        return [self.one, self.omega]

    @property
    def omega_trace_norm(self):
        """(t, n) with omega^2 = t*omega - n."""
        d = self.d
        if d % 4 == 1:
            return 1, (1 - d) // 4
        return 0, -d

    @property
    def is_real(self):
        return self.r1 > 0

    def require_degree(self, maxdeg=2):
        if self.degree > maxdeg:
            raise UnsupportedDegree(f"operation not available for degree {self.degree}")

    def parse(self, text):
        return parse_element(self, text)

    def __repr__(self):
        return f"NumberField({self.name})"

    def __str__(self):
        return self.name

    # interned: default identity equality and hashing


def make_field(spec):
    """Build (or fetch) the field described by `spec`.

    Accepted: ``"Q"``, ``"Q(sqrt(d))"`` with d squarefree, d not in {0, 1},
    an integer d, and ``"cubic"`` / ``"x^3-3*x-1"`` for the fixed cubic.
    """
    if isinstance(spec, NumberField):
        return spec
    if isinstance(spec, int):
        d = spec
        key = ("quad", d)
    else:
        s = spec.replace(" ", "")
        if s in ("Q", "QQ"):
            key = ("Q",)
        elif s in ("cubic", "x^3-3*x-1", "x^3-3x-1", "Q(x^3-3*x-1)"):
            key = ("cubic",)
        else:
            m = re.fullmatch(r"Q\(sqrt\((-?\d+)\)\)", s)
            if not m:
                raise InvalidField(f"cannot parse field description {spec!r}")
            key = ("quad", int(m.group(1)))
    with _FIELD_LOCK:
        if key in _FIELD_CACHE:
            return _FIELD_CACHE[key]
        if key[0] == "Q":
            K = NumberField((0, 1), d=None, name="Q")
        elif key[0] == "cubic":
            K = NumberField(CUBIC_POLY, d=None, name="Q(x^3-3*x-1)")
        else:
            d = key[1]
            if d in (0, 1):
                raise InvalidField(f"d = {d} does not define a quadratic field")
            if not _is_squarefree(d):
                raise InvalidField(f"d = {d} is not squarefree")
            K = NumberField((-d, 0, 1), d=d, name=f"Q(sqrt({d}))")
        _FIELD_CACHE[key] = K
        return K


# ---------------------------------------------------------------------------


def _as_fraction(x):
    if type(x) is Fraction:
        n, d = x.numerator, x.denominator
        if type(n) is int and type(d) is int:
            return x
        return Fraction(int(n), int(d))
    if type(x) is int:
        return Fraction(x)
    # gmpy2 / sympy integers and rationals would otherwise leak into Fraction
    x = Fraction(x)
    return Fraction(int(x.numerator), int(x.denominator))


class FieldElt:
    """Element of a NumberField, immutable, canonical power-basis coordinates."""

    __slots__ = ("K", "c", "_hash")

    def __init__(self, K, coeffs):
        c = [_as_fraction(x) for x in coeffs]
        n = K.degree
        if len(c) > n:
            c = _reduce_mod(c, K.def_poly)
        c = c + [Fraction(0)] * (n - len(c))
        self.K = K
        self.c = tuple(c)
        self._hash = None

    # ---- coercion
    def _coerce(self, other):
        if isinstance(other, FieldElt):
            if other.K is not self.K:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElt(self.K, (other,))
        return NotImplemented

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, FieldElt) else other
        if o is NotImplemented:
            return NotImplemented
        return o.K is self.K and o.c == self.c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((id(self.K), self.c))
        return self._hash

    def __bool__(self):
        return any(self.c)

    def is_zero(self):
        return not any(self.c)

    def is_rational(self):
        return not any(self.c[1:])

    # ---- arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElt(self.K, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElt(self.K, [-a for a in self.c])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElt(self.K, [a - b for a, b in zip(self.c, o.c)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElt(self.K, [a * other for a in self.c])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        K = self.K
        if K.degree == 1:
            return FieldElt(K, (self.c[0] * o.c[0],))
        if K.degree == 2:
            a, b = self.c
            x, y = o.c
            d = -K.def_poly[0]
            return FieldElt(K, (a * x + d * b * y, a * y + b * x))
        prod = [Fraction(0)] * (2 * K.degree - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    prod[i + j] += a * b
        return FieldElt(K, prod)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        K = self.K
        if K.degree == 1:
            return FieldElt(K, (1 / self.c[0],))
        if K.degree == 2:
            a, b = self.c
            n = a * a - (-K.def_poly[0]) * b * b
            return FieldElt(K, (a / n, -b / n))
        sol = _solve(_mult_matrix(self), [Fraction(1)] + [Fraction(0)] * (K.degree - 1))
        return FieldElt(K, sol)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.K.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # ---- invariants
    def norm(self):
        K = self.K
        if K.degree == 1:
            return self.c[0]
        if K.degree == 2:
            a, b = self.c
            return a * a - (-K.def_poly[0]) * b * b
        return _det(_mult_matrix(self))

    def trace(self):
        K = self.K
        if K.degree == 1:
            return self.c[0]
        if K.degree == 2:
            return 2 * self.c[0]
        return sum(_mult_matrix(self)[i][i] for i in range(K.degree))

    def conjugate(self):
        if self.K.degree == 1:
            return self
        if self.K.degree != 2:
            raise UnsupportedDegree("conjugate only in quadratic fields")
        return FieldElt(self.K, (self.c[0], -self.c[1]))

    def denominator(self):
        """Least positive integer m with m*x having integer power-basis coords."""
        m = 1
        for a in self.c:
            m = m * a.denominator // gcd(m, a.denominator)
        return m

    def integral_coords(self):
        """(m, (a, b)) with x = (a + b*omega)/m, a, b, m integers, m > 0 minimal."""
        K = self.K
        if K.degree == 1:
            f = self.c[0]
            return f.denominator, (f.numerator,)
        if K.degree != 2:
            raise UnsupportedDegree("integral basis only for quadratic fields")
        c0, c1 = self.c
        if K.d % 4 == 1:
            a, b = c0 - c1, 2 * c1
        else:
            a, b = c0, c1
        m = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
        return m, (int(a * m), int(b * m))

    def is_integral(self):
        return self.integral_coords()[0] == 1

    # ---- display
    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"FieldElt({self.K.name}, {format_element(self)})"


def from_integral_coords(K, coords, m=1):
    """Element (a + b*omega)/m."""
    if K.degree == 1:
        return FieldElt(K, (Fraction(coords[0], m),))
    a, b = coords
    return (FieldElt(K, (a,)) + K.omega * b) * Fraction(1, m)


def _reduce_mod(c, f):
    n = len(f) - 1
    c = list(c)
    for k in range(len(c) - 1, n - 1, -1):
        lead = c[k]
        if lead:
            for i in range(n):
                c[k - n + i] -= lead * f[i]
        c[k] = Fraction(0)
    return c[:n]


def _mult_matrix(x):
    K = x.K
    cols = []
    basis_pow = K.one
    for _ in range(K.degree):
        cols.append((x * basis_pow).c)
        basis_pow = basis_pow * K.gen
    n = K.degree
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def _solve(M, rhs):
    n = len(M)
    A = [list(row) + [rhs[i]] for i, row in enumerate(M)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [v / pv for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                fct = A[r][col]
                A[r] = [a - fct * b for a, b in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


def _det(M):
    n = len(M)
    A = [list(r) for r in M]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det *= A[col][col]
        for r in range(col + 1, n):
            fct = A[r][col] / A[col][col]
            A[r] = [a - fct * b for a, b in zip(A[r], A[col])]
    return det


# ---------------------------------------------------------------------------
# signs at real places


def sign_at(x, place):
    """Exact sign (+1 or -1) of the image of x under the real place."""
    if x.is_zero():
        raise ZeroSign("sign of zero is undefined")
    if x.is_rational():
        return 1 if x.c[0] > 0 else -1
    coeffs = list(x.c)
    while True:
        lo, hi = interval_eval(coeffs, *place.isolating_interval)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        place.refine()


def signs(x):
    return tuple(sign_at(x, s) for s in x.K.real_places)


def upper_bound_at(x, place):
    """A rational number >= sigma(x)."""
    return place.enclose(x)[1]


# ---------------------------------------------------------------------------
# global squares


def rational_sqrt(q):
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def is_global_square(x):
    """A square root of x in its field, or None."""
    if x.is_zero():
        raise ValueError("is_global_square of zero")
    K = x.K
    if K.degree == 1:
        r = rational_sqrt(x.c[0])
        return None if r is None else K(r)
    if K.degree != 2:
        raise UnsupportedDegree("global square test only for degree <= 2")
    a, b = x.c
    d = K.d
    if b == 0:
        r = rational_sqrt(a)
        if r is not None:
            return K(r)
        r = rational_sqrt(a / d)
        if r is not None:
            return K(0, r)
        return None
    n = rational_sqrt(a * a - d * b * b)
    if n is None:
        return None
    for cand in ((a + n) / 2, (a - n) / 2):
        u = rational_sqrt(cand)
        if u:
            y = K(u, b / (2 * u))
            if y * y == x:
                return y
    return None


def same_square_class(x, y):
    return is_global_square(x * y) is not None


def _square_part(q):
    """Largest rational s > 0 with s^2 dividing q (as a rational)."""
    q = Fraction(q)
    s = Fraction(1)
    for n, sign in ((q.numerator, 1), (q.denominator, -1)):
        for p, e in ((int(p), e) for p, e in factorint(abs(n)).items()):
            s *= Fraction(p) ** (sign * (e // 2))
    return s


def strip_rational_squares(x):
    """x divided by the largest rational square dividing its content."""
    if x.is_zero():
        return x
    nums = [a.numerator for a in x.c if a]
    dens = [a.denominator for a in x.c if a]
    g = 0
    for v in nums:
        g = gcd(g, v)
    lcm_d = 1
    for v in dens:
        lcm_d = lcm_d * v // gcd(lcm_d, v)
    content = Fraction(g, lcm_d)
    s = _square_part(content)
    return x * (1 / (s * s))


# ---------------------------------------------------------------------------
# text syntax: polynomials in t with rational coefficients


def format_element(x):
    den = x.denominator()
    nums = [int(a * den) for a in x.c]
    terms = []
    for k, n in enumerate(nums):
        if n == 0:
            continue
        if k == 0:
            body = str(abs(n))
        else:
            mono = "t" if k == 1 else f"t^{k}"
            body = mono if abs(n) == 1 else f"{abs(n)}*{mono}"
        terms.append(("-" if n < 0 else "+", body))
    if not terms:
        return "0"
    s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sgn, body in terms[1:]:
        s += sgn + body
    if den == 1:
        return s
    if len(terms) == 1:
        return f"{s}/{den}"
    return f"({s})/{den}"


_TOKEN = re.compile(r"\s*(?:(\d+)|(t)|([-+*/^()]))")


def parse_element(K, text, line=None):
    """Parse a rational-coefficient polynomial in t into an element of K."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} in {text!r}", line, pos + 1)
        tokens.append((m.group(1) or m.group(2) or m.group(3), m.start(1) if m.group(1) else pos))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    tokens.append(("", len(text)))
    idx = 0

    def peek():
        return tokens[idx][0]

    def take(expected=None):
        nonlocal idx
        tok, col = tokens[idx]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r} in {text!r}", line, col + 1)
        idx += 1
        return tok

    def expr():
        if peek() in "+-" and peek():
            sign = -1 if take() == "-" else 1
            val = term() * sign
        else:
            val = term()
        while peek() in ("+", "-") and peek():
            op = take()
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = power()
        while peek() in ("*", "/") and peek():
            op = take()
            if peek() in ("+", "-") and peek():
                sgn = -1 if take() == "-" else 1
                rhs = power() * sgn
            else:
                rhs = power()
            if op == "*":
                val = val * rhs
            else:
                if rhs.is_zero():
                    raise ParseError(f"division by zero in {text!r}", line)
                val = val / rhs
        return val

    def power():
        base = atom()
        if peek() == "^":
            take()
            tok = take()
            if not tok.isdigit():
                raise ParseError(f"exponent must be a non-negative integer in {text!r}", line)
            base = base ** int(tok)
        return base

    def atom():
        tok, col = tokens[idx]
        if tok.isdigit():
            take()
            return K(int(tok))
        if tok == "t":
            take()
            if K.degree == 1:
                raise ParseError("t is not defined over Q", line, col + 1)
            return K.gen
        if tok == "(":
            take()
            v = expr()
            take(")")
            return v
        if tok in ("+", "-"):
            take()
            v = atom()
            return -v if tok == "-" else v
        raise ParseError(f"unexpected token {tok!r} in {text!r}", line, col + 1)

    value = expr()
    if peek() != "":
        raise ParseError(f"trailing input in {text!r}", line, tokens[idx][1] + 1)
    return value
