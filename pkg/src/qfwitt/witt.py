"""Diagonal quadratic forms and their global invariants.

adim(q) is the maximum of the local anisotropic dimensions over a finite set
of places (real places, one complex place, dyadic primes and the primes
where some coefficient has odd valuation), together with the observation
that an even-dimensional form whose discriminant is not a global square
cannot be hyperbolic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import DegenerateForm, MissingPrimes
from .field_core import FieldElt, format_element, is_global_square, sign_at, strip_rational_squares
from .ideals import dyadic_primes, factor_principal
from .local_invariants import hasse, local_adim


@dataclass(frozen=True)
class DiagonalForm:
    field: object
    coeffs: tuple

    def __post_init__(self):
        K = self.field
        cs = tuple(c if isinstance(c, FieldElt) else K(c) for c in self.coeffs)
        for c in cs:
            if c.is_zero():
                raise DegenerateForm("zero coefficient in a diagonal form")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def of(cls, K, *coeffs):
        """Build from field elements, rationals or strings like "1-t"."""
        def conv(c):
            if isinstance(c, FieldElt):
                return c
            return K.parse(c) if isinstance(c, str) else K(c)
        return cls(K, tuple(conv(c) for c in coeffs))

    @classmethod
    def hyperbolic(cls, K, w=1):
        return cls(K, (K.one, K(-1)) * w)

    @property
    def dim(self):
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def perp(self, other):
        if other.field is not self.field:
            raise ValueError("forms over different fields")
        return DiagonalForm(self.field, self.coeffs + other.coeffs)

    __add__ = perp

    def scale(self, c):
        return DiagonalForm(self.field, tuple(c * a for a in self.coeffs))

    def evaluate(self, xs):
        out = self.field.zero
        for a, x in zip(self.coeffs, xs):
            out = out + a * x * x
        return out

    def __str__(self):
        return "<" + ", ".join(format_element(c) for c in self.coeffs) + ">"


def _as_form(q):
    return q if isinstance(q, DiagonalForm) else DiagonalForm(q[0].K, tuple(q))


def disc(q):
    """Signed discriminant, with rational square factors removed."""
    q = _as_form(q)
    K = q.field
    n = q.dim
    out = K(-1) if (n * (n - 1) // 2) % 2 else K.one
    for a in q.coeffs:
        out = out * a
    return strip_rational_squares(out)


def prime_support(q):
    """Primes at which some coefficient has odd valuation."""
    q = _as_form(q)
    out = set()
    for a in q.coeffs:
        out.update(P for P, e in factor_principal(a) if e % 2)
    return out


def relevant_primes(q):
    q = _as_form(q)
    return set(dyadic_primes(q.field)) | prime_support(q)


def _sorted(primes):
    return sorted(primes, key=lambda P: P.sort_key)


def signature(q, place):
    q = _as_form(q)
    return sum(sign_at(a, place) for a in q.coeffs)


def adim(q):
    q = _as_form(q)
    K = q.field
    n = q.dim
    if n == 0:
        return 0
    K.require_degree(2)
    best = n % 2
    for pl in K.real_places:
        best = max(best, abs(signature(q, pl)))
    for P in _sorted(relevant_primes(q)):
        if best >= n:
            break
        best = max(best, local_adim(q.coeffs, P))
    if n % 2 == 0 and best == 0 and is_global_square(disc(q)) is None:
        best = 2
    return best


def witt_index(q):
    q = _as_form(q)
    return (q.dim - adim(q)) // 2


@dataclass
class WittCertificate:
    dim: int
    signed_disc: FieldElt
    signatures: tuple
    hasse_bits: dict
    adim: int
    witt_index: int
    primes: list = field(default_factory=list)

    def same_class_as(self, other, ignore=("dim", "witt_index")):
        """Compare invariants; the discriminant is compared as a square class."""
        if "dim" not in ignore and self.dim != other.dim:
            return False
        if "witt_index" not in ignore and self.witt_index != other.witt_index:
            return False
        if self.adim != other.adim or self.signatures != other.signatures:
            return False
        if is_global_square(self.signed_disc * other.signed_disc) is None:
            return False
        keys = set(self.hasse_bits) & set(other.hasse_bits)
        return all(self.hasse_bits[P] == other.hasse_bits[P] for P in keys)

    def __eq__(self, other):
        if not isinstance(other, WittCertificate):
            return NotImplemented
        return self.same_class_as(other, ignore=())

    def to_json(self):
        return {
            "dim": self.dim,
            "disc": format_element(self.signed_disc),
            "signatures": list(self.signatures),
            "hasse": {str(P): s for P, s in self.hasse_bits.items()},
            "adim": self.adim,
            "witt_index": self.witt_index,
        }


def certificate(q, prime_set=None):
    q = _as_form(q)
    need = relevant_primes(q)
    if prime_set is None:
        prime_set = need
    else:
        prime_set = set(prime_set)
        missing = need - prime_set
        if missing:
            raise MissingPrimes(f"prime set lacks {[str(P) for P in _sorted(missing)]}")
    K = q.field
    ps = _sorted(prime_set)
    a = adim(q)
    return WittCertificate(
        dim=q.dim,
        signed_disc=disc(q),
        signatures=tuple(signature(q, pl) for pl in K.real_places),
        hasse_bits={P: hasse(q.coeffs, P) for P in ps},
        adim=a,
        witt_index=(q.dim - a) // 2,
        primes=ps,
    )


def forms_equivalent(q1, q2, mode="isometric"):
    q1, q2 = _as_form(q1), _as_form(q2)
    if q1.field is not q2.field:
        raise ValueError("forms over different fields")
    K = q1.field
    if mode == "similar":
        if (q1.dim - q2.dim) % 2:
            return False
        if q1.dim < q2.dim:
            q1 = q1 + DiagonalForm.hyperbolic(K, (q2.dim - q1.dim) // 2)
        elif q2.dim < q1.dim:
            q2 = q2 + DiagonalForm.hyperbolic(K, (q1.dim - q2.dim) // 2)
    elif mode != "isometric":
        raise ValueError(f"unknown mode {mode!r}")
    if q1.dim != q2.dim:
        return False
    if q1.dim == 0:
        return True
    primes = relevant_primes(q1) | relevant_primes(q2)
    return certificate(q1, primes) == certificate(q2, primes)


# ---------------------------------------------------------------------------
# bounded search for isotropic vectors (one-sided check)


def find_isotropic_vector(q, height=3):
    """A nonzero zero of q whose first n-1 coordinates have integral-basis
    coordinates of absolute value <= height, or None.

    The last coordinate is solved for exactly.
    """
    q = _as_form(q)
    K = q.field
    n = q.dim
    if n == 0:
        return None
    basis = K.integral_basis
    rng = range(-height, height + 1)
    elts = [sum((c * b for c, b in zip(cs, basis)), K.zero) for cs in itertools.product(rng, repeat=len(basis))]
    a_last = q.coeffs[-1]
    for xs in itertools.product(elts, repeat=n - 1):
        if all(x.is_zero() for x in xs):
            continue
        v = q.evaluate(list(xs) + [K.zero])
        if v.is_zero():
            return list(xs) + [K.zero]
        y = is_global_square(-v / a_last)
        if y is not None:
            return list(xs) + [y]
    return None


def diagonalize(gram):
    """Diagonal entries of a form congruent to the symmetric matrix `gram`.

    Zero diagonal entries are handled by the usual e_i + e_j trick; a
    degenerate matrix raises DegenerateForm.
    """
    A = [list(r) for r in gram]
    n = len(A)
    if n == 0:
        return []
    out = []
    while A:
        m = len(A)
        if any(A[i][j] != A[j][i] for i in range(m) for j in range(m)):
            raise ValueError("Gram matrix is not symmetric")
        piv = next((i for i in range(m) if not A[i][i].is_zero()), None)
        if piv is None:
            pair = next(((i, j) for i in range(m) for j in range(m) if not A[i][j].is_zero()), None)
            if pair is None:
                raise DegenerateForm("Gram matrix is singular")
            i, j = pair
            # replace e_i by e_i + e_j
            A[i] = [a + b for a, b in zip(A[i], A[j])]
            for r in A:
                r[i] = r[i] + r[j]
            continue
        A[0], A[piv] = A[piv], A[0]
        for r in A:
            r[0], r[piv] = r[piv], r[0]
        a = A[0][0]
        out.append(a)
        rest = []
        for i in range(1, m):
            f = A[i][0] / a
            rest.append([A[i][j] - f * A[0][j] for j in range(1, m)])
        A = rest
    return out


def form_from_strings(K, items):
    return DiagonalForm(K, tuple(K.parse(s) if isinstance(s, str) else s for s in items))


__all__ = [
    "DiagonalForm",
    "WittCertificate",
    "adim",
    "certificate",
    "diagonalize",
    "disc",
    "find_isotropic_vector",
    "form_from_strings",
    "forms_equivalent",
    "prime_support",
    "relevant_primes",
    "signature",
    "witt_index",
]
