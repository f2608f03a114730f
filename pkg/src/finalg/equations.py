"""Equation arrows and their two-way conversion with natural identities.

An equation arrow over a variable set X at arity n is a surjection out
of stage n, represented losslessly as a partition of the stage set (in
finite sets the regular epis are exactly the surjections).  An algebra
satisfies the arrow when every evaluation map out of the stage is
constant on every block, i.e. factors through the quotient.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .algebras import FinAlgebra, evaluate
from .core import FinSet, Partition, atom_key, enumerate_maps, kernel_pair, quotient
from .errors import ValidationError
from .functors import Signature
from .identities import (
    ClassComparison,
    NaturalIdentity,
    NaturalTerm,
    canonical_vars,
    equivalent_upto,
)
from .terms import Var, relabel, stage, substitute


@dataclass(frozen=True, eq=True)
class EquationArrow:
    """A quotient of stage ``arity`` over ``var_object``, block by block."""

    sig: Signature
    var_object: FinSet
    arity: int
    part: Partition

    def __post_init__(self):
        expected = stage(self.sig, self.var_object, self.arity).terms
        if self.part.base != expected:
            raise ValidationError("partition base is not the full stage set")

    __hash__ = None


def satisfies_equation(alg: FinAlgebra, eq: EquationArrow) -> bool:
    """Whether every assignment's evaluation map is constant on every block."""
    if alg.sig != eq.sig:
        raise ValidationError("signature mismatch between algebra and equation")
    for f in enumerate_maps(eq.var_object, alg.carrier):
        binding = f.table
        for block in eq.part.blocks:
            if len(block) == 1:
                continue
            value = evaluate(alg, block[0], binding)
            for t in block[1:]:
                if evaluate(alg, t, binding) != value:
                    return False
    return True


def identity_to_equation(ident: NaturalIdentity, x: FinSet) -> EquationArrow:
    """The coequalizer of the two transformation components at ``x``:
    merge every substitution instance of lhs with the matching instance
    of rhs, then close to an equivalence on the stage set."""
    st = stage(ident.sig, x, ident.arity)
    pairs = []
    for i, k in enumerate(ident.domain):
        names = canonical_vars(k)
        left, right = ident.lhs.data[i], ident.rhs.data[i]
        for images in itertools.product(x.elements, repeat=k):
            g = {v: Var(a) for v, a in zip(names, images)}
            pairs.append((substitute(left, g), substitute(right, g)))
    part, _ = quotient(st.terms, pairs)
    return EquationArrow(ident.sig, x, ident.arity, part)


def equation_to_identity(eq: EquationArrow) -> NaturalIdentity:
    """Read the arrow back as a natural identity: one component per
    off-diagonal kernel pair of the projection, over hom(|X|, -).

    Diagonal pairs are dropped and symmetric duplicates are kept once;
    both are satisfaction-neutral.
    """
    proj = eq.part.projection()
    names = canonical_vars(len(eq.var_object))
    renaming = dict(zip(eq.var_object.elements, names))
    components = []
    for s, t in kernel_pair(proj):
        if s == t:
            continue
        if atom_key(s) > atom_key(t):
            continue
        components.append((relabel(s, renaming), relabel(t, renaming)))
    k = len(eq.var_object)
    domain = tuple(k for _ in components)
    lhs = NaturalTerm(eq.sig, domain, eq.arity, tuple(s for s, _ in components))
    rhs = NaturalTerm(eq.sig, domain, eq.arity, tuple(t for _, t in components))
    return NaturalIdentity(lhs, rhs)


@dataclass(frozen=True)
class RoundtripReport:
    """Per-variable-object outcome of the conversion round trip."""

    outcomes: tuple[tuple[int, ClassComparison], ...]

    @property
    def equal(self) -> bool:
        return all(cmp.equal for _, cmp in self.outcomes)

    def __bool__(self) -> bool:
        return self.equal


def roundtrip_class_equal(
    ident: NaturalIdentity, x_sizes: Sequence[int], max_size: int
) -> RoundtripReport:
    """Convert identity → equation arrow → identity for each variable-object
    size and compare the satisfied classes over carriers ≤ max_size."""
    outcomes = []
    for size in x_sizes:
        x = FinSet(tuple(f"x{i + 1}" for i in range(size)))
        arrow = identity_to_equation(ident, x)
        back = equation_to_identity(arrow)
        outcomes.append((size, equivalent_upto(ident, back, max_size)))
    return RoundtripReport(tuple(outcomes))
