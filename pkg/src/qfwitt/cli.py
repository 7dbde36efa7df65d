"""Command line front end.

Input (file or stdin), one directive per line, '#' starts a comment::

    field Q(sqrt(-7))
    form -3-9*t, -1, -2-6*t, 1-t, -6+4*t, -3+2*t, 4-4*t

A Gram matrix can replace the form line: ``gram 0, 1; 1, 0`` (rows
separated by ';').  It is diagonalised before anything else happens.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .errors import (
    DegenerateForm,
    InternalError,
    InvalidField,
    NotPrime,
    ParseError,
    QFWittError,
    UnsupportedDegree,
)
from .field_core import format_element, make_field, parse_element

EXIT_OK, EXIT_DEGENERATE, EXIT_PARSE, EXIT_FIELD, EXIT_INTERNAL = 0, 1, 2, 3, 4

COMMANDS = ("decompose", "adim", "isotropic", "hilbert", "local-adim", "singular-group")


@dataclass
class JobSpec:
    command: str
    field_spec: str = "Q"
    form: list = field(default_factory=list)
    gram: list | None = None
    args: list = field(default_factory=list)
    verify: bool = False
    trace: bool = False
    json: bool = False


def _split_items(text, sep=","):
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return [s.strip() for s in out]


def parse_input(text):
    """(field_spec, form item strings, gram rows or None)."""
    field_spec, form, gram = None, [], None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "field":
            if not rest:
                raise ParseError("field directive needs a value", lineno)
            field_spec = rest
        elif key == "form":
            items = _split_items(rest)
            if any(not s for s in items):
                raise ParseError("empty coefficient in form", lineno, len(key) + 2)
            form.extend((s, lineno) for s in items)
        elif key == "gram":
            rows = [_split_items(r) for r in rest.split(";")]
            if len({len(r) for r in rows}) != 1 or len(rows) != len(rows[0]):
                raise ParseError("Gram matrix must be square", lineno)
            gram = [[(s, lineno) for s in r] for r in rows]
        else:
            raise ParseError(f"unknown directive {key!r}", lineno, 1)
    if form and gram:
        raise ParseError("give either a form or a Gram matrix, not both")
    return field_spec, form, gram


def build_parser():
    p = argparse.ArgumentParser(prog="qfwitt", description="Witt decomposition of quadratic forms over Q and quadratic fields.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("args", nargs="*", help="hilbert: A B PLACE; local-adim: PLACE; singular-group: primes of S")
    p.add_argument("--input", help="input file (default: stdin)")
    p.add_argument("--field", help="field, overriding the input file (e.g. 'Q(sqrt(2))')")
    p.add_argument("--verify", action="store_true", help="print matching certificates")
    p.add_argument("--trace", action="store_true", help="print the reduction trace")
    p.add_argument("--json", action="store_true", help="JSON output")
    return p


def parse_job(argv, text=None):
    ns = build_parser().parse_intermixed_args(argv)
    needs_input = ns.command not in ("hilbert", "singular-group") or ns.input is not None or (
        ns.command == "singular-group" and not ns.args
    )
    field_spec, form, gram = None, [], None
    if text is None and needs_input:
        if ns.input:
            with open(ns.input) as fh:
                text = fh.read()
        else:
            text = sys.stdin.read()
    if text:
        field_spec, form, gram = parse_input(text)
    job = JobSpec(ns.command, ns.field or field_spec or "Q", form, gram, list(ns.args), ns.verify, ns.trace, ns.json)
    if job.command in ("decompose", "adim", "isotropic", "local-adim") and not (form or gram):
        raise ParseError("this command needs a form")
    if job.command == "hilbert" and len(job.args) != 3:
        raise ParseError("hilbert needs three arguments: A B PLACE")
    if job.command == "local-adim" and len(job.args) != 1:
        raise ParseError("local-adim needs one argument: PLACE")
    return job


def _form_of(job, K):
    from .witt import DiagonalForm, diagonalize

    if job.gram is not None:
        M = [[parse_element(K, s, ln) for s, ln in row] for row in job.gram]
        return DiagonalForm(K, tuple(diagonalize(M)))
    return DiagonalForm(K, tuple(parse_element(K, s, ln) for s, ln in job.form))


def parse_place(K, text):
    """'real:i', 'complex', a rational prime, or a prime ideal '(p, g)'."""
    from .ideals import parse_prime, primes_above
    from .local_invariants import complex_places

    s = text.strip()
    if s.startswith("real"):
        _, _, idx = s.partition(":")
        i = int(idx or 0)
        if not 0 <= i < K.r1:
            raise ParseError(f"no real place {i}")
        return K.real_places[i]
    if s.startswith("complex"):
        if not K.r2:
            raise ParseError("field has no complex place")
        return complex_places(K)[0]
    if s.startswith("("):
        return parse_prime(K, s)
    if s.isdigit():
        ps = primes_above(K, int(s))
        if len(ps) != 1:
            raise ParseError(f"{s} is not prime in {K}; give the prime ideal explicitly")
        return ps[0]
    raise ParseError(f"cannot parse place {text!r}")


def run(job, out=sys.stdout):
    from .aniso import anisotropic_part
    from .class_group import singular_group_basis
    from .ideals import dyadic_primes
    from .local_invariants import hilbert, local_adim
    from .witt import DiagonalForm, adim, certificate, relevant_primes

    K = make_field(job.field_spec)
    result = {}
    if job.command == "hilbert":
        a, b = (parse_element(K, s) for s in job.args[:2])
        result["hilbert"] = hilbert(a, b, parse_place(K, job.args[2]))
        text = str(result["hilbert"])
    elif job.command == "singular-group":
        K.require_degree(2)
        S = set(dyadic_primes(K))
        if job.form or job.gram:
            S |= relevant_primes(_form_of(job, K))
        S |= {parse_place(K, s) for s in job.args}
        S = sorted(S, key=lambda P: P.sort_key)
        B = singular_group_basis(K, S)
        result = {"S": [str(P) for P in S], "basis": [format_element(x) for x in B]}
        text = "S: " + ", ".join(result["S"]) + "\nbasis: " + ", ".join(result["basis"])
    else:
        q = _form_of(job, K)
        if job.command == "adim":
            result["adim"] = adim(q)
            text = str(result["adim"])
        elif job.command == "isotropic":
            result["isotropic"] = adim(q) < q.dim
            text = "true" if result["isotropic"] else "false"
        elif job.command == "local-adim":
            result["local_adim"] = local_adim(q.coeffs, parse_place(K, job.args[0]))
            text = str(result["local_adim"])
        else:
            qa, w, trace = anisotropic_part(q)
            result = {
                "field": K.name,
                "form": [format_element(c) for c in q.coeffs],
                "adim": qa.dim,
                "witt_index": w,
                "anisotropic_part": [format_element(c) for c in qa.coeffs],
            }
            lines = [f"adim: {qa.dim}, witt_index: {w}", f"anisotropic part: {qa}"]
            if job.verify:
                padded = qa + DiagonalForm.hyperbolic(K, w)
                primes = relevant_primes(q) | relevant_primes(padded)
                c1, c2 = certificate(q, primes), certificate(padded, primes)
                if c1 != c2:
                    raise InternalError("certificates differ")
                result["certificate"] = c1.to_json()
                result["certificate_padded"] = c2.to_json()
                lines.append("certificate(q):          " + json.dumps(c1.to_json()))
                lines.append("certificate(q_a + w*H):  " + json.dumps(c2.to_json()))
                lines.append("verified: isometric")
            if job.trace:
                result["trace"] = trace.to_json()
                lines.append(trace.render())
            text = "\n".join(lines)
    if job.json:
        out.write(json.dumps(result, indent=2, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")
    return EXIT_OK


def main(argv=None, stdin_text=None, out=sys.stdout, err=sys.stderr):
    try:
        job = parse_job(argv if argv is not None else sys.argv[1:], stdin_text)
        return run(job, out)
    except DegenerateForm as exc:
        err.write(f"degenerate form: {exc}\n")
        return EXIT_DEGENERATE
    except (ParseError, NotPrime, ValueError) as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except (InvalidField, UnsupportedDegree) as exc:
        err.write(f"unsupported field: {exc}\n")
        return EXIT_FIELD
    except InternalError as exc:
        err.write(f"internal verification failure: {exc}\n")
        return EXIT_INTERNAL
    except QFWittError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
