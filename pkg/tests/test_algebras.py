import pytest

from finalg import (
    FinAlgebra,
    FinMap,
    FinSet,
    Node,
    ResourceLimitError,
    SigF,
    ValidationError,
    apply_obj,
    enumerate_algebras,
    evaluate,
    iota,
    is_morphism,
    q_node,
    stage,
    stage_map,
    w_embed,
    y_inject,
)
from finalg.algebras import Assignment, count_algebras
from conftest import MAGMA, MONOID_SIG, m, v


def test_tables_must_be_total():
    with pytest.raises(ValidationError):
        FinAlgebra(MAGMA, FinSet((0, 1)), {"m": {(0, 0): 0}})
    with pytest.raises(ValidationError):
        FinAlgebra(MAGMA, FinSet((0, 1)), {})
    with pytest.raises(ValidationError):
        two = {(a, b): 2 for a in (0, 1) for b in (0, 1)}
        FinAlgebra(MAGMA, FinSet((0, 1)), {"m": two})


def test_structure_map_view(or_magma):
    alpha = or_magma.structure_map()
    assert alpha.dom == apply_obj(SigF(MAGMA), or_magma.carrier)
    assert alpha(("m", (0, 1))) == 1


def test_evaluate_variable(or_magma):
    assert evaluate(or_magma, v("x"), {"x": 1}) == 1


def test_evaluate_table_walk(or_magma, or_monoid):
    t = m(m(v("x"), v("y")), v("x"))
    assert evaluate(or_magma, t, {"x": 0, "y": 1}) == 1
    t2 = m(Node("e", ()), v("x"))
    assert evaluate(or_monoid, t2, {"x": 1}) == 1


def test_evaluate_unbound_variable(or_magma):
    with pytest.raises(ValidationError):
        evaluate(or_magma, v("x"), {})


def test_evaluate_with_assignment_object(or_magma):
    vars_ = FinSet(("x",))
    a = Assignment(vars_, or_magma, FinMap(vars_, or_magma.carrier, {"x": 0}))
    assert evaluate(or_magma, m(v("x"), v("x")), a) == 0


def test_is_morphism_identity(or_magma, or_monoid):
    assert is_morphism(or_magma, or_magma, FinMap.identity(or_magma.carrier))
    assert is_morphism(or_monoid, or_monoid, FinMap.identity(or_monoid.carrier))


def test_is_morphism_negation_swap(or_magma, and_magma):
    swap = FinMap(or_magma.carrier, and_magma.carrier, {0: 1, 1: 0})
    assert is_morphism(or_magma, and_magma, swap)


def test_is_morphism_constant_and_projection(or_magma, or_monoid, left_projection):
    const0 = FinMap(or_magma.carrier, or_magma.carrier, {0: 0, 1: 0})
    assert is_morphism(or_magma, or_magma, const0)
    assert is_morphism(or_monoid, or_monoid, const0)
    assert is_morphism(left_projection, or_magma, const0)
    swap = FinMap(or_magma.carrier, or_magma.carrier, {0: 1, 1: 0})
    assert not is_morphism(or_magma, or_magma, swap)


def test_is_morphism_signature_mismatch(or_magma, or_monoid):
    with pytest.raises(ValidationError):
        is_morphism(or_magma, or_monoid, FinMap.identity(or_magma.carrier))


def test_enumerate_counts():
    two = FinSet((0, 1))
    magmas = list(enumerate_algebras(MAGMA, two))
    assert len(magmas) == 16 == count_algebras(MAGMA, two)
    symmetric = [a for a in magmas if all(
        a.tables["m"][(x, y)] == a.tables["m"][(y, x)] for x in (0, 1) for y in (0, 1)
    )]
    assert len(symmetric) == 8
    assert len(list(enumerate_algebras(MONOID_SIG, two))) == 32


def test_enumerate_deterministic_and_guarded():
    two = FinSet((0, 1))
    first = [a.tables for a in enumerate_algebras(MAGMA, two)]
    second = [a.tables for a in enumerate_algebras(MAGMA, two)]
    assert first == second
    with pytest.raises(ResourceLimitError):
        list(enumerate_algebras(MAGMA, FinSet(range(4)), max_count=1000))


def _all_corpus_algebras():
    out = []
    for sig in (MAGMA, MONOID_SIG):
        for size in (1, 2):
            for alg in enumerate_algebras(sig, FinSet(tuple(range(size)))):
                out.append(alg)
    return out


CORPUS = _all_corpus_algebras()


@pytest.mark.parametrize("alg", CORPUS[:8] + CORPUS[17:25])
def test_eval_after_node_equals_table_then_eval(alg):
    x = alg.carrier
    binding = {a: a for a in x}
    alpha = alg.structure_map()
    for n in range(2):
        q = q_node(alg.sig, x, n)
        for elem, node in q.table.items():
            name, args = elem
            folded = alg.tables[name][tuple(evaluate(alg, t, binding) for t in args)]
            assert evaluate(alg, node, binding) == folded
            assert folded == alpha((name, tuple(evaluate(alg, t, binding) for t in args)))


@pytest.mark.parametrize("alg", CORPUS[:4] + CORPUS[17:21])
def test_eval_of_variables_is_assignment(alg):
    for n in range(3):
        st = stage(alg.sig, alg.carrier, n)
        emb = iota(st)
        for a in alg.carrier:
            assert evaluate(alg, emb(a), {b: b for b in alg.carrier}) == a


@pytest.mark.parametrize("alg", CORPUS[:4] + CORPUS[17:21])
def test_eval_stage_independent(alg):
    binding = {a: a for a in alg.carrier}
    for m_idx in range(3):
        st = stage(alg.sig, alg.carrier, m_idx)
        w = w_embed(st, 3)
        for t in st.terms:
            assert evaluate(alg, t, binding) == evaluate(alg, w(t), binding)


@pytest.mark.parametrize("alg", CORPUS[:4] + CORPUS[17:21])
def test_eval_of_height_one_nodes_is_table(alg):
    binding = {a: a for a in alg.carrier}
    for n in (1, 2):
        y = y_inject(alg.sig, alg.carrier, n)
        for (name, args), node in y.table.items():
            assert evaluate(alg, node, binding) == alg.tables[name][args]


@pytest.mark.parametrize("alg", CORPUS[1:3] + CORPUS[18:20])
def test_eval_commutes_with_relabelling(alg):
    two = FinSet(("x", "y"))
    from finalg import enumerate_maps

    for f in enumerate_maps(two, alg.carrier):
        sm = stage_map(alg.sig, f, 2)
        for t in stage(alg.sig, two, 2).terms:
            assert evaluate(alg, sm(t), {a: a for a in alg.carrier}) == evaluate(
                alg, t, f.table
            )
