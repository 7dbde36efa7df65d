import pytest

from conftest import random_form

from qfwitt import DiagonalForm, make_field
from qfwitt.aniso import F2System, adim3_targets, anisotropic_part, binary_part, reduce_adim3, reduce_high
from qfwitt.errors import WrongAdim
from qfwitt.ideals import ord_at
from qfwitt.witt import adim, disc, forms_equivalent


def _check_decomposition(q):
    K = q.field
    qa, w, trace = anisotropic_part(q, verify=False)
    assert qa.dim + 2 * w == q.dim
    assert adim(qa) == qa.dim == adim(q)
    assert forms_equivalent(q, qa + DiagonalForm.hyperbolic(K, w), "isometric")
    return qa, w, trace


def test_worked_example(worked_form):
    qa, w, trace = _check_decomposition(worked_form)
    assert (qa.dim, w) == (3, 2)
    assert len(trace.alphas) == 1
    assert trace.padding == 1
    assert trace.system.check(trace.solution_vector)


def test_adim3_step_meets_its_congruences(worked_form):
    q = worked_form
    alpha = reduce_adim3(q)
    for P, k, lam in adim3_targets(q):
        diff = alpha - lam
        assert diff.is_zero() or ord_at(diff, P) >= k
    assert adim(q + DiagonalForm.of(q.field, -alpha)) == 2


def test_reduce_high_real():
    K = make_field(2)
    q = DiagonalForm.of(K, 1, 1, 1, 1, 1)
    alpha = reduce_high(q)
    assert adim(q + DiagonalForm.of(K, -alpha)) == 4
    with pytest.raises(WrongAdim):
        reduce_high(DiagonalForm.of(K, 1, -1, 1))


def test_binary_part_requires_adim_two():
    K = make_field(-7)
    with pytest.raises(WrongAdim):
        binary_part(DiagonalForm.of(K, 1, 1, 1))


def test_binary_part_shape():
    Q = make_field("Q")
    q = DiagonalForm.of(Q, 1, 1, 1, -3)  # adim 2
    out = binary_part(q)
    assert out.dim == 2
    a, b = out.coeffs
    assert forms_equivalent(out, DiagonalForm(Q, (a, -a * disc(q))), "isometric")
    assert forms_equivalent(q, out, "similar")


@pytest.mark.parametrize("spec", ["Q", "Q(sqrt(-7))", "Q(sqrt(2))", "Q(sqrt(-5))"])
def test_random_decompositions(spec, rng):
    K = make_field(spec)
    for _ in range(8):
        q = random_form(K, rng, rng.randint(1, 6), 20)
        _check_decomposition(q)


def test_rational_definite():
    Q = make_field("Q")
    qa, w, _ = _check_decomposition(DiagonalForm.of(Q, 1, 1, 1, 1, 1, -1))
    assert (qa.dim, w) == (4, 1)


def test_hyperbolic_gives_empty_part(field):
    qa, w, _ = anisotropic_part(DiagonalForm.hyperbolic(field, 2))
    assert qa.dim == 0 and w == 2


def test_f2_system_render_and_check():
    sys = F2System([[1, 0, 1], [0, 1, 1]], [1, 0], ["a", "b"])
    eps = sys.solve()
    assert sys.check(eps)
    assert "a" in sys.render()
    assert not F2System([[1], [1]], [0, 1]).solve()


def test_trace_json(worked_form):
    _, _, trace = anisotropic_part(worked_form)
    js = trace.to_json()
    assert js["padding"] == 1 and len(js["final_part"]) == 2
    assert "epsilon" in trace.render()

