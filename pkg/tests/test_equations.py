import itertools

import pytest

from finalg import (
    EquationArrow,
    FinSet,
    Node,
    Partition,
    ValidationError,
    Var,
    enumerate_algebras,
    equation_to_identity,
    from_sigma,
    identity_to_equation,
    roundtrip_class_equal,
    satisfies,
    satisfies_equation,
    stage,
    substitute,
)
from finalg.identities import canonical_vars
from conftest import MAGMA, MONOID_SIG, m, v

TWO = FinSet(("x", "y"))


def discrete_arrow(sig, x, n):
    st = stage(sig, x, n)
    return EquationArrow(sig, x, n, Partition(st.terms, [[t] for t in st.terms]))


def naive_instance_partition(identity, x):
    """Independent pairwise-merge closure: repeatedly sweep the instance
    pairs, merging blocks held as plain sets, until nothing changes."""
    st = stage(identity.sig, x, identity.arity)
    blocks = [{t} for t in st.terms]
    pairs = []
    for i, k in enumerate(identity.domain):
        names = canonical_vars(k)
        for images in itertools.product(x.elements, repeat=k):
            g = {nm: Var(a) for nm, a in zip(names, images)}
            pairs.append(
                (substitute(identity.lhs.data[i], g), substitute(identity.rhs.data[i], g))
            )
    changed = True
    while changed:
        changed = False
        for s, t in pairs:
            bs = next(b for b in blocks if s in b)
            bt = next(b for b in blocks if t in b)
            if bs is not bt:
                bs.update(bt)
                blocks.remove(bt)
                changed = True
    return Partition(st.terms, blocks)


def test_arrow_requires_full_stage_partition(comm):
    st = stage(MAGMA, TWO, 1)
    with pytest.raises(ValidationError):
        EquationArrow(MAGMA, TWO, 1, Partition(FinSet(st.terms.elements[:3]), [st.terms.elements[:3]]))


def test_discrete_arrow_satisfied_by_all():
    arrow = discrete_arrow(MAGMA, TWO, 1)
    for alg in enumerate_algebras(MAGMA, FinSet((0, 1))):
        assert satisfies_equation(alg, arrow)


def test_commutativity_arrow(comm, or_magma, left_projection):
    arrow = identity_to_equation(comm, TWO)
    assert len(arrow.part) == 5
    assert satisfies_equation(or_magma, arrow)
    assert not satisfies_equation(left_projection, arrow)


def test_identity_to_equation_blocks(comm):
    arrow = identity_to_equation(comm, TWO)
    merged = [b for b in arrow.part.blocks if len(b) > 1]
    assert merged == [(m(v("x"), v("y")), m(v("y"), v("x")))]


def test_identity_to_equation_tautology():
    taut = from_sigma(MAGMA, m(v("x"), v("y")), m(v("x"), v("y")), FinSet(("x", "y")))
    arrow = identity_to_equation(taut, TWO)
    assert len(arrow.part) == len(arrow.part.base)


def test_identity_to_equation_single_generator(comm):
    one = FinSet(("x",))
    arrow = identity_to_equation(comm, one)
    assert len(arrow.part.base) == 2
    assert len(arrow.part) == 2


def test_identity_to_equation_matches_naive_closure(comm, assoc, monoid_ids):
    cases = [(comm, TWO), (comm, FinSet(("x",))), (assoc, TWO)]
    cases += [(i, TWO) for i in monoid_ids]
    for identity, x in cases:
        arrow = identity_to_equation(identity, x)
        assert arrow.part == naive_instance_partition(identity, x)


def test_equation_to_identity_commutativity(comm):
    back = equation_to_identity(identity_to_equation(comm, TWO))
    assert back.domain == (2,)
    assert back.lhs.data == (m(v("v1"), v("v2")),)
    assert back.rhs.data == (m(v("v2"), v("v1")),)


def test_equation_to_identity_discrete():
    arrow = discrete_arrow(MAGMA, TWO, 1)
    back = equation_to_identity(arrow)
    assert back.domain == ()
    for alg in enumerate_algebras(MAGMA, FinSet((0, 1))):
        assert satisfies(alg, back)


def test_equation_to_identity_unit_law():
    one = FinSet(("x",))
    st = stage(MONOID_SIG, one, 1)
    blocks = [{Node("e", ()), v("x")}]
    rest = [[t] for t in st.terms if t not in blocks[0]]
    arrow = EquationArrow(MONOID_SIG, one, 1, Partition(st.terms, list(blocks) + rest))
    back = equation_to_identity(arrow)
    assert back.domain == (1,)
    assert back.lhs.data == (v("v1"),)
    assert back.rhs.data == (Node("e", ()),)


def test_arrow_iff_identity_at_own_carrier(comm, assoc, idem):
    for identity in (comm, assoc, idem):
        for size in (1, 2):
            carrier = FinSet(tuple(range(size)))
            arrow = identity_to_equation(identity, carrier)
            for alg in enumerate_algebras(MAGMA, carrier):
                assert satisfies(alg, identity) == satisfies_equation(alg, arrow)


def test_arrow_satisfaction_iff_converted_identity(comm, assoc):
    for identity in (comm, assoc):
        arrow = identity_to_equation(identity, TWO)
        back = equation_to_identity(arrow)
        for size in (1, 2):
            for alg in enumerate_algebras(MAGMA, FinSet(tuple(range(size)))):
                assert satisfies_equation(alg, arrow) == satisfies(alg, back)


def test_roundtrip_commutativity(comm):
    report = roundtrip_class_equal(comm, [2], 2)
    assert report.equal
    assert report.outcomes[0][1].checked == 17


def test_roundtrip_associativity(assoc):
    assert roundtrip_class_equal(assoc, [3], 2).equal


def test_roundtrip_tautology():
    taut = from_sigma(MAGMA, m(v("x"), v("y")), m(v("x"), v("y")), FinSet(("x", "y")))
    assert roundtrip_class_equal(taut, [1, 2], 2).equal
