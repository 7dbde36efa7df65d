"""Decompose the seven-dimensional form over Q(sqrt(-7)) and print every step."""

from qfwitt import DiagonalForm, make_field
from qfwitt.aniso import anisotropic_part
from qfwitt.witt import adim, certificate, disc, form_from_strings, forms_equivalent, relevant_primes

FORM = ["-3-9*t", "-1", "-2-6*t", "1-t", "-6+4*t", "-3+2*t", "4-4*t"]
KNOWN_PART = ["1406", "(-27-19*t)/2", "30903025152-7324337664*t"]


def main():
    K = make_field("Q(sqrt(-7))")
    q = form_from_strings(K, FORM)
    print("q        =", q)
    print("disc     =", disc(q))
    print("primes   =", ", ".join(str(P) for P in sorted(relevant_primes(q), key=lambda P: P.sort_key)))
    print("adim     =", adim(q))

    qa, w, trace = anisotropic_part(q)
    print()
    print(trace.render())
    print()
    print("q_a      =", qa, " witt index", w)

    known = form_from_strings(K, KNOWN_PART)
    same = forms_equivalent(q, known + DiagonalForm.hyperbolic(K, 2), "isometric")
    print("q ~ <1406, (-27-19t)/2, 30903025152-7324337664t> + 2H:", same)
    print("q_a ~ that form:", forms_equivalent(qa, known, "isometric"))
    print("certificate:", certificate(q).to_json())


if __name__ == "__main__":
    main()
