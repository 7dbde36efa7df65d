"""Class groups, S-class groups, S-units and S-singular elements of quadratic fields.

The class group is computed from a factor base of primes below the
Minkowski bound.  Relations come from factoring small elements; the
relation lattice is then certified complete by testing every nontrivial
class of the current quotient for principality.  Everything here is
desk scale: class numbers are expected to be tiny.
"""

from __future__ import annotations

import math
import threading
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .errors import InternalError, UnsupportedDegree
from .field_core import from_integral_coords
from .ideals import (
    Ideal,
    reduced_basis,
    PrimeCursor,
    PrimeIdeal,
    factor_principal,
    next_prime_outside,
    primes_above,
    primes_up_to_norm,
)
from .linalg import gf2_rank, integer_kernel, row_basis, smith_normal_form

CF_STEP_LIMIT = 10_000
PROBE_LIMIT = 10_000

# ---------------------------------------------------------------------------
# units


_UNIT_CACHE = {}


def fundamental_unit(K):
    """Fundamental unit of a real quadratic field, from the continued fraction of omega."""
    if K.degree != 2 or K.d < 0:
        raise UnsupportedDegree("fundamental unit only for real quadratic fields")
    if K in _UNIT_CACHE:
        return _UNIT_CACHE[K]
    D = K.d
    P, Q = (1, 2) if D % 4 == 1 else (0, 1)
    root = isqrt(D)
    t, n = K.omega_trace_norm
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    for _ in range(CF_STEP_LIMIT):
        a = (P + root) // Q
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        # N(h - k*omega)
        nrm = h * h - t * h * k + n * k * k
        if abs(nrm) == 1:
            eps = from_integral_coords(K, (h, -k))
            if abs(_float_embed(eps, 1)) < 1:
                eps = eps.conjugate()
            _UNIT_CACHE[K] = eps
            return eps
        P = a * Q - P
        Q = (D - P * P) // Q
    raise InternalError(f"continued fraction period of {K} exceeds {CF_STEP_LIMIT}")


def _float_embed(x, i):
    """Floating image of x at the i-th real place of a real quadratic field."""
    a, b = x.c
    s = math.sqrt(x.K.d)
    return float(a) + float(b) * (s if i == 1 else -s)


def torsion_generator(K):
    """Generator of mu(K) modulo squares."""
    if K.degree == 2 and K.d == -1:
        return K.gen
    return K(-1)


# ---------------------------------------------------------------------------
# principality


def reduce_ideal(I):
    """(gamma, J) with I = gamma * J and N(J) small (at most the reduction floor)."""
    K = I.K
    gamma = K.one
    J = I
    while True:
        nJ = J.norm()
        if nJ == 1:
            return gamma, J
        beta = reduced_basis(J)[0]
        nb = beta.norm()
        J2 = Ideal.from_elements(K, [beta.conjugate() * b * Fraction(1, nJ) for b in J.basis()])
        if J2.norm() >= nJ:
            return gamma, J
        gamma = gamma * beta * Fraction(nJ, 1) / nb
        J = J2


def is_principal(I):
    """A generator of the integral ideal I, or None if I is not principal."""
    K = I.K
    K.require_degree(2)
    if K.degree == 1:
        return K(I.n1)
    gamma, I = reduce_ideal(I)
    g = _small_generator(I)
    return None if g is None else gamma * g


def _small_generator(I):
    K = I.K
    T = I.norm()
    b1, b2 = I.basis()
    A = int(b1.norm())
    C = int(b2.norm())
    B = int((b1 * b2.conjugate()).trace())
    targets = [T]
    if K.d > 0:
        eps = fundamental_unit(K)
        R = math.sqrt(T * abs(_float_embed(eps, 1))) * (1 + 1e-9) + 1
        width = I.n2 * abs(_float_embed(K.omega, 1) - _float_embed(K.omega, 0))
        W = int(2 * R / width) + 2
        targets.append(-T)
    else:
        disc = 4 * A * C - B * B
        W = isqrt(4 * A * T // disc) + 2
    best = None
    for w in range(0, W + 1):
        for ws in ((w, -w) if w else (0,)):
            for tgt in targets:
                # A u^2 + B ws u + C ws^2 - tgt = 0
                qd = B * B * ws * ws - 4 * A * (C * ws * ws - tgt)
                if qd < 0:
                    continue
                r = isqrt(qd)
                if r * r != qd:
                    continue
                for num in (-B * ws + r, -B * ws - r):
                    if num % (2 * A) == 0:
                        u = num // (2 * A)
                        g = b1 * u + b2 * ws
                        if not g.is_zero():
                            best = g
                            break
                if best is not None:
                    return best
    return None


# ---------------------------------------------------------------------------
# finite abelian groups given by generators and relations


class AbelianGroupPresentation:
    """Z^k modulo the row lattice of relation_matrix."""

    def __init__(self, generators, relation_matrix):
        self.generators = list(generators)
        k = len(self.generators)
        self.relation_matrix = [list(r) for r in relation_matrix]
        if k == 0:
            self._divisors = []
            self._V = []
            self.elementary_divisors = []
            return
        rows = self.relation_matrix or [[0] * k]
        D, _, V = smith_normal_form(rows)
        diag = [D[i][i] if i < len(D) else 0 for i in range(k)]
        if any(x == 0 for x in diag):
            raise InternalError("relation lattice is not of full rank")
        self._divisors = diag
        self._V = V
        self.elementary_divisors = [x for x in diag if x != 1]

    @property
    def order(self):
        out = 1
        for x in self.elementary_divisors:
            out *= x
        return out

    @property
    def exponent(self):
        out = 1
        for x in self.elementary_divisors:
            out = out * x // math.gcd(out, x)
        return out

    @property
    def two_rank(self):
        return sum(1 for x in self.elementary_divisors if x % 2 == 0)

    def reduce(self, vec):
        """Canonical coordinates of the class of the exponent vector `vec`."""
        k = len(self.generators)
        if k == 0:
            return ()
        y = [sum(vec[i] * self._V[i][j] for i in range(k)) for j in range(k)]
        return tuple(y[j] % self._divisors[j] for j in range(k) if self._divisors[j] != 1)

    def is_trivial_class(self, vec):
        return not any(self.reduce(vec))

    def two_torsion_bits(self, coords):
        """F_2 coordinates in the 2-torsion subgroup, or None if not 2-torsion."""
        bits = 0
        pos = 0
        for c, d in zip(coords, self.elementary_divisors):
            if (2 * c) % d:
                return None
            if d % 2 == 0:
                if c:
                    bits |= 1 << pos
                pos += 1
        return bits

    def __repr__(self):
        return f"AbelianGroup{tuple(self.elementary_divisors)}"


def _enumerate_subgroup(group, gens):
    """BFS over the subgroup generated by exponent vectors `gens`.

    Returns {class coords: nonnegative exponent-vector representative}.
    """
    k = len(group.generators)
    zero = tuple([0] * k)
    table = {group.reduce(zero): zero}
    queue = deque([zero])
    while queue:
        v = queue.popleft()
        for g in gens:
            w = tuple(a + b for a, b in zip(v, g))
            key = group.reduce(w)
            if key not in table:
                table[key] = w
                queue.append(w)
    return table


# ---------------------------------------------------------------------------


def minkowski_bound(K):
    if K.degree == 1:
        return 1.0
    D = abs(K.disc_K)
    if K.d < 0:
        return 2 / math.pi * math.sqrt(D)
    return math.sqrt(D) / 2


class ClassGroup:
    """Class group of K over a factor base, with a class-of-ideal oracle."""

    def __init__(self, K):
        K.require_degree(2)
        self.K = K
        bound = minkowski_bound(K)
        self.factor_base = [P for P in primes_up_to_norm(K, int(bound))] if K.degree == 2 else []
        self._index = {P: i for i, P in enumerate(self.factor_base)}
        self._ideal_cache = {}
        self._class_cache = {}
        self.group = self._compute()
        k = len(self.factor_base)
        unit_vecs = [tuple(int(i == j) for j in range(k)) for i in range(k)]
        self.elements = _enumerate_subgroup(self.group, unit_vecs)
        if len(self.elements) != self.group.order:
            raise InternalError("factor base does not generate the class group")

    # ---- construction
    def _compute(self):
        K, fb = self.K, self.factor_base
        k = len(fb)
        if k == 0:
            return AbelianGroupPresentation([], [])
        rels = []
        for p in sorted({P.p for P in fb}):
            v = [0] * k
            for P in primes_above(K, p):
                if P in self._index:
                    v[self._index[P]] = P.e
            if sum(v) and all(P in self._index for P in primes_above(K, p)):
                rels.append(v)
        rels.extend(self._sieve_relations(k))
        while True:
            basis = row_basis(rels, k)
            if len(basis) < k:
                rels.extend(self._sieve_relations(k, scale=len(rels) + 2))
                continue
            G = AbelianGroupPresentation(fb, basis)
            unit_vecs = [tuple(int(i == j) for j in range(k)) for i in range(k)]
            table = _enumerate_subgroup(G, unit_vecs)
            new = []
            for coords, vec in table.items():
                if any(coords) and is_principal(self.ideal_of_vector(vec)) is not None:
                    new.append(list(vec))
                    break
            if not new:
                return G
            rels = basis + new

    def _sieve_relations(self, k, scale=1):
        K = self.K
        B = 6 * scale
        out = []
        for b in range(0, B + 1):
            for a in range(-B, B + 1):
                if b == 0 and a <= 0:
                    continue
                x = from_integral_coords(K, (a, b))
                if x.is_zero():
                    continue
                fac = factor_principal(x)
                if all(P in self._index for P, _ in fac):
                    v = [0] * k
                    for P, e in fac:
                        v[self._index[P]] = e
                    if any(v):
                        out.append(v)
        return out

    # ---- ideals and classes
    def ideal_of_vector(self, vec):
        vec = tuple(vec)
        hit = self._ideal_cache.get(vec)
        if hit is None:
            I = Ideal(self.K, 1, 0, 1)
            for P, e in zip(self.factor_base, vec):
                if e:
                    I = I * P.ideal() ** e
            hit = self._ideal_cache[vec] = I
        return hit

    def class_vector(self, I):
        """Nonnegative factor-base exponent vector x with I ~ prod FB^x."""
        if isinstance(I, PrimeIdeal):
            key = I
            if I in self._index:
                v = [0] * len(self.factor_base)
                v[self._index[I]] = 1
                return tuple(v)
            I = I.ideal()
        else:
            key = I
        if key in self._class_cache:
            return self._class_cache[key]
        G = self.group
        for coords, vec in self.elements.items():
            if is_principal(I * self.ideal_of_vector(vec)) is not None:
                neg = tuple((-c) % d for c, d in zip(coords, G.elementary_divisors))
                out = self.elements[neg]
                self._class_cache[key] = out
                return out
        raise InternalError(f"no class found for {I}")

    def class_of(self, I):
        return self.group.reduce(self.class_vector(I))


_CG_CACHE = {}
_CG_LOCK = threading.Lock()


def _class_group_obj(K):
    with _CG_LOCK:
        cg = _CG_CACHE.get(K)
        if cg is None:
            if K.degree > 2:
                raise UnsupportedDegree("class groups only for degree <= 2")
            cg = ClassGroup(K) if K.degree == 2 else _TrivialClassGroup(K)
            _CG_CACHE[K] = cg
        return cg


class _TrivialClassGroup:
    def __init__(self, K):
        self.K = K
        self.factor_base = []
        self.group = AbelianGroupPresentation([], [])
        self.elements = {(): ()}

    def class_vector(self, I):
        return ()

    def class_of(self, I):
        return ()

    def ideal_of_vector(self, vec):
        return Ideal(self.K, 1, 0, 1)


def class_group(K):
    return _class_group_obj(K).group


def s_class_group(K, S):
    """C_K modulo the subgroup generated by the classes of the finite primes in S."""
    cg = _class_group_obj(K)
    G = cg.group
    if not cg.factor_base:
        return G
    rows = [list(r) for r in G.relation_matrix] + [list(cg.class_vector(P)) for P in S]
    return AbelianGroupPresentation(cg.factor_base, row_basis(rows, len(cg.factor_base)))


# ---------------------------------------------------------------------------
# S-units and S-singular elements


def _conjugate_prime(P):
    if P.kind == "split":
        return next(Q for Q in primes_above(P.K, P.p) if Q != P)
    return P


def generator_of_product(K, exps):
    """Generator of prod P^e over (P, e) in exps (exponents may be negative).

    Uses P^-1 = conj(P) / N(P).
    """
    I = Ideal(K, 1, 0, 1)
    denom = 1
    for P, e in exps:
        if e > 0:
            I = I * P.ideal() ** e
        elif e < 0:
            I = I * _conjugate_prime(P).ideal() ** (-e)
            denom *= P.norm ** (-e)
    g = is_principal(I)
    if g is None:
        return None
    return g * Fraction(1, denom)


def s_units_mod_squares(K, S):
    """F_2-basis of U_S / U_S^2 as a list of field elements."""
    K.require_degree(2)
    S = list(S)
    out = [torsion_generator(K)]
    if K.degree == 2 and K.d > 0:
        out.append(fundamental_unit(K))
    if K.degree == 1:
        out.extend(K(P.p) for P in S)
        return out
    cg = _class_group_obj(K)
    G = cg.group
    s = len(S)
    if G.order == 1:
        lattice = [[int(i == j) for j in range(s)] for i in range(s)]
    else:
        t = len(G.elementary_divisors)
        cols = [G.reduce(cg.class_vector(P)) for P in S]
        # x in Z^s with sum x_P c_P = 0 in G: kernel of [C | diag(d)]
        M = [[cols[j][i] for j in range(s)] + [G.elementary_divisors[i] if m == i else 0 for m in range(t)]
             for i in range(t)]
        ker = integer_kernel(M)
        lattice = row_basis([v[:s] for v in ker], s)
    for vec in lattice:
        g = generator_of_product(K, list(zip(S, vec)))
        if g is None:
            raise InternalError("S-unit lattice vector is not principal")
        out.append(g)
    return out


@dataclass
class SingularBasis:
    field: object
    S: list
    basis: list
    unit_part_size: int
    class_part_size: int
    class_primes: list = field(default_factory=list)

    def __len__(self):
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)


def singular_group_basis(K, S):
    """F_2-basis of Sing_S (S-singular elements modulo squares).

    S must contain every dyadic prime; archimedean places are implicit.
    """
    K.require_degree(2)
    S = list(S)
    missing = [P for P in primes_above(K, 2) if P not in S]
    if missing:
        raise ValueError(f"S must contain the dyadic primes; missing {missing}")
    units = s_units_mod_squares(K, S)
    lambdas, class_primes = [], []
    if K.degree == 2:
        CS = s_class_group(K, S)
        m = CS.two_rank
        if m:
            cg = _class_group_obj(K)
            G = cg.group
            cursor = PrimeCursor(K)
            chosen_bits = []
            probes = 0
            while len(class_primes) < m:
                probes += 1
                if probes > PROBE_LIMIT:
                    raise InternalError("could not realise the 2-torsion of C_S by primes")
                b = next_prime_outside(S, cursor)
                bits = CS.two_torsion_bits(CS.reduce(cg.class_vector(b)))
                if not bits:
                    continue
                if gf2_rank(chosen_bits + [bits]) > len(chosen_bits):
                    chosen_bits.append(bits)
                    class_primes.append(b)
            # b^2 * prod_{P in S} P^{m_P} principal
            s_gens = [cg.class_vector(P) for P in S]
            k = len(cg.factor_base)
            table = {}
            queue = deque([(tuple([0] * k), tuple([0] * len(S)))])
            table[G.reduce(tuple([0] * k))] = tuple([0] * len(S))
            while queue:
                v, ex = queue.popleft()
                for i, g in enumerate(s_gens):
                    w = tuple(a + c for a, c in zip(v, g))
                    key = G.reduce(w)
                    if key not in table:
                        ex2 = tuple(e + (j == i) for j, e in enumerate(ex))
                        table[key] = ex2
                        queue.append((w, ex2))
            for b in class_primes:
                cb = G.reduce(cg.class_vector(b))
                target = tuple((-2 * c) % d for c, d in zip(cb, G.elementary_divisors))
                ex = table[target]
                lam = generator_of_product(K, [(b, 2)] + list(zip(S, ex)))
                if lam is None:
                    raise InternalError(f"b^2 not S-principal for b = {b}")
                lambdas.append(lam)
    return SingularBasis(K, S, units + lambdas, len(units), len(lambdas), class_primes)
