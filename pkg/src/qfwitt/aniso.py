"""Construction of the anisotropic part of a diagonal form.

The anisotropic dimension is lowered one step at a time by appending
<-alpha> for a suitable alpha (reduce_high for adim >= 4, reduce_adim3 for
adim 3).  Once it reaches 2, binary_part finds alpha with q similar to
<alpha, -alpha*d> by solving a linear system over F_2 in the group of
S-singular elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .class_group import singular_group_basis
from .errors import InternalError, LoopBudgetExceeded, WrongAdim
from .field_core import format_element, sign_at, strip_rational_squares
from .ideals import PrimeCursor, congruence_modulus, crt, factorable_translate, next_prime_outside, ord_at
from .linalg import bits_to_int, gf2_matvec, gf2_solve
from .local_invariants import hasse, hilbert
from .signs import ordering_separation, positive_approximation, strong_ordering_separation
from .witt import DiagonalForm, adim, disc, forms_equivalent, relevant_primes, signature

ENLARGE_BUDGET = 64


@dataclass
class F2System:
    """(A / B) eps = (v / w) over F_2, one row per real place or prime."""

    rows: list
    rhs: list
    row_labels: list = field(default_factory=list)
    columns: list = field(default_factory=list)

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else len(self.columns)

    def solve(self):
        masks = [bits_to_int(r) for r in self.rows]
        return gf2_solve(masks, self.rhs, self.ncols)

    def check(self, eps):
        masks = [bits_to_int(r) for r in self.rows]
        return gf2_matvec(masks, eps) == [b & 1 for b in self.rhs]

    def render(self):
        lines = []
        for lab, row, b in zip(self.row_labels or [""] * len(self.rows), self.rows, self.rhs):
            lines.append(f"{str(lab):>24} | {' '.join(map(str, row))} | {b}")
        return "\n".join(lines)


@dataclass
class ReductionTrace:
    alphas: list = field(default_factory=list)
    padding: int = 0
    enlarged_primes: list = field(default_factory=list)
    solution_vector: list = field(default_factory=list)
    final_binary_or_unary: object = None
    system: F2System | None = None
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "alphas": [format_element(a) for a in self.alphas],
            "padding": self.padding,
            "enlarged_primes": [str(P) for P in self.enlarged_primes],
            "solution_vector": list(self.solution_vector),
            "final_part": [format_element(c) for c in self.final_binary_or_unary] if self.final_binary_or_unary else [],
            "matrix_shape": [len(self.system.rows), self.system.ncols] if self.system else None,
            "notes": list(self.notes),
        }

    def render(self):
        d = self.to_json()
        out = [f"alphas: {', '.join(d['alphas']) or '-'}", f"padding: {d['padding']}",
               f"enlarged primes: {', '.join(d['enlarged_primes']) or '-'}",
               f"epsilon: {''.join(map(str, d['solution_vector'])) or '-'}"]
        if d["matrix_shape"]:
            out.append(f"system: {d['matrix_shape'][0]} x {d['matrix_shape'][1]}")
        out.extend(self.notes)
        return "\n".join(out)


def _check_adim(q, expected, at_least=False):
    a = adim(q)
    if (a < expected) if at_least else (a != expected):
        raise WrongAdim(f"expected adim {'>= ' if at_least else ''}{expected}, got {a}")
    return a


def reduce_high(q, d=None):
    """alpha with adim(q + <-alpha>) = adim(q) - 1, for adim(q) >= 4."""
    a = _check_adim(q, 4, at_least=True)
    if d is not None and d != a:
        raise WrongAdim(f"expected adim {d}, got {a}")
    K = q.field
    if not K.is_real:
        return K.one
    sig = [signature(q, pl) for pl in K.real_places]
    negatives = [i for i, s in enumerate(sig) if s == -a]
    return ordering_separation(K, negatives)


def _integral_disc(q):
    D = disc(q)
    den = D.denominator()
    return D * (den * den)


def adim3_targets(q, S=None):
    """CRT data for the adim-3 step: disc - 1 mod P (odd ord), pi_P mod P^2 (even ord)."""
    D = _integral_disc(q)
    S = sorted(S if S is not None else relevant_primes(q), key=lambda P: P.sort_key)
    data = []
    for P in S:
        if ord_at(D, P) % 2:
            data.append((P, 1, D - 1))
        else:
            data.append((P, 2, P.uniformizer))
    return data


def reduce_adim3(q):
    """alpha with adim(q + <-alpha>) = 2, for adim(q) = 3."""
    _check_adim(q, 3)
    K = q.field
    S = sorted(relevant_primes(q), key=lambda P: P.sort_key)
    data = adim3_targets(q, S)
    if not K.is_real:
        beta = crt(data)
        if K.degree == 2:
            beta = factorable_translate(beta, congruence_modulus(data)) or beta
        return beta
    negatives = [i for i, pl in enumerate(K.real_places) if signature(q, pl) < 0]
    a1 = strong_ordering_separation(K, negatives, S)
    a2 = positive_approximation(data)
    return a1 * a2


def build_system(q, d, S, basis):
    K = q.field
    rows, rhs, labels = [], [], []
    for pl in K.real_places:
        if sign_at(d, pl) < 0:
            sg = signature(q, pl)
            rows.append([int(sign_at(b, pl) < 0) for b in basis])
            rhs.append(1 if sg == -2 else 0)
            labels.append(f"real place {pl.index}")
    for P in S:
        rows.append([int(hilbert(b, d, P) == -1) for b in basis])
        rhs.append(1 if hasse(q.coeffs, P) == -1 else 0)
        labels.append(str(P))
    return F2System(rows, rhs, labels, list(basis))


def binary_part(q, trace=None):
    """<alpha, -alpha*d> similar to q, for adim(q) = 2."""
    _check_adim(q, 2)
    trace = trace if trace is not None else ReductionTrace()
    K = q.field
    w = (q.dim - 2) // 2
    pad = (-w) % 4
    trace.padding = pad
    if pad:
        q = q + DiagonalForm.hyperbolic(K, pad)
    d = disc(q)
    S = sorted(relevant_primes(q), key=lambda P: P.sort_key)
    cursor = PrimeCursor(K)
    for _ in range(ENLARGE_BUDGET + 1):
        basis = list(singular_group_basis(K, S))
        system = build_system(q, d, S, basis)
        eps = system.solve()
        if eps is not None:
            alpha = K.one
            for b, e in zip(basis, eps):
                if e:
                    alpha = alpha * b
            alpha = strip_rational_squares(alpha)
            trace.solution_vector = eps
            trace.system = system
            out = DiagonalForm(K, (alpha, strip_rational_squares(-alpha * d)))
            trace.final_binary_or_unary = out
            return out
        P = next_prime_outside(S, cursor)
        S.append(P)
        trace.enlarged_primes.append(P)
    raise LoopBudgetExceeded(f"no solution after {ENLARGE_BUDGET} enlargements of S")


def anisotropic_part(q, verify=True):
    """(q_a, w, trace) with q isometric to q_a + w hyperbolic planes and q_a anisotropic."""
    if not isinstance(q, DiagonalForm):
        q = DiagonalForm(q[0].K, tuple(q))
    K = q.field
    n = q.dim
    trace = ReductionTrace()
    d0 = adim(q)
    if d0 == 0:
        qa = DiagonalForm(K, ())
    elif d0 == 1:
        qa = DiagonalForm(K, (disc(q),))
        trace.final_binary_or_unary = qa
    else:
        cur = q
        a = d0
        while a >= 3:
            alpha = reduce_high(cur, a) if a >= 4 else reduce_adim3(cur)
            alpha = strip_rational_squares(alpha)
            cur = cur + DiagonalForm(K, (-alpha,))
            a_new = adim(cur)
            if a_new != a - 1:
                raise InternalError(f"reduction step left adim at {a_new}, expected {a - 1}")
            trace.alphas.append(alpha)
            a = a_new
        tail = binary_part(cur, trace)
        qa = DiagonalForm(K, tuple(trace.alphas)) + tail
    w = (n - qa.dim) // 2
    if verify:
        if adim(qa) != qa.dim:
            raise InternalError("constructed part is not anisotropic")
        if not forms_equivalent(q, qa + DiagonalForm.hyperbolic(K, w), "isometric"):
            raise InternalError("constructed part is not isometric to q modulo hyperbolic planes")
    return qa, w, trace


__all__ = [
    "F2System",
    "ReductionTrace",
    "adim3_targets",
    "anisotropic_part",
    "binary_part",
    "build_system",
    "reduce_adim3",
    "reduce_high",
]
