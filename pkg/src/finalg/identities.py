"""Natural terms and identities in Yoneda form.

A natural term with domain ∐ᵢ hom(kᵢ, -) and target stage n is, by the
Yoneda correspondence, one term of height ≤ n per component, written
over canonical variables v1..vkᵢ.  A natural identity is a pair of
natural terms with a common domain; an algebra satisfies it when both
sides evaluate equally under every assignment of the canonical
variables into the carrier.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .algebras import FinAlgebra, enumerate_algebras, evaluate
from .core import FinMap, FinSet
from .errors import ValidationError
from .functors import FunctorExpr, ReprF, Signature, SumF, apply_obj
from .terms import Term, Var, check_term, relabel, stage, substitute, variables


def canonical_vars(k: int) -> tuple[str, ...]:
    """The canonical variable names v1..vk, in index order."""
    return tuple(f"v{i + 1}" for i in range(k))


@dataclass(frozen=True)
class NaturalTerm:
    """A natural transformation ∐ᵢ hom(kᵢ, -) → stage ``arity``, in Yoneda form."""

    sig: Signature
    domain: tuple[int, ...]
    arity: int
    data: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(int(k) for k in self.domain))
        object.__setattr__(self, "data", tuple(self.data))
        if len(self.domain) != len(self.data):
            raise ValidationError("one data term per domain component required")
        for k, t in zip(self.domain, self.data):
            check_term(self.sig, t)
            if t.height > self.arity:
                raise ValidationError(
                    f"data term height {t.height} exceeds arity {self.arity}"
                )
            extra = variables(t) - set(canonical_vars(k))
            if extra:
                raise ValidationError(f"variable {sorted(extra)[0]!r} outside v1..v{k}")


def raise_arity(t: NaturalTerm, n: int) -> NaturalTerm:
    """View the same data at a higher stage; the connecting map is inclusion."""
    if n < t.arity:
        raise ValidationError(f"cannot lower arity {t.arity} to {n}")
    return NaturalTerm(t.sig, t.domain, n, t.data)


@dataclass(frozen=True)
class NaturalIdentity:
    """A pair of natural terms with common domain, normalized to one arity.

    The pre-normalization arity couple is kept as metadata.
    """

    lhs: NaturalTerm
    rhs: NaturalTerm
    arity_couple: tuple[int, int] = field(init=False)

    def __post_init__(self):
        if self.lhs.sig != self.rhs.sig:
            raise ValidationError("identity sides use different signatures")
        if self.lhs.domain != self.rhs.domain:
            raise ValidationError("identity sides have different domains")
        couple = (self.lhs.arity, self.rhs.arity)
        n = max(couple)
        object.__setattr__(self, "lhs", raise_arity(self.lhs, n))
        object.__setattr__(self, "rhs", raise_arity(self.rhs, n))
        object.__setattr__(self, "arity_couple", couple)

    @property
    def sig(self) -> Signature:
        return self.lhs.sig

    @property
    def domain(self) -> tuple[int, ...]:
        return self.lhs.domain

    @property
    def arity(self) -> int:
        return self.lhs.arity


def domain_expr(t: Union[NaturalTerm, NaturalIdentity]) -> FunctorExpr:
    """The domain functor as an expression: a sum of representables."""
    return SumF(tuple(ReprF(k) for k in t.domain))


def violation(alg: FinAlgebra, ident: NaturalIdentity) -> Optional[tuple]:
    """First failing instance as (component index, assignment tuple), or None."""
    if alg.sig != ident.sig:
        raise ValidationError("signature mismatch between algebra and identity")
    carrier = alg.carrier.elements
    for i, k in enumerate(ident.domain):
        names = canonical_vars(k)
        left, right = ident.lhs.data[i], ident.rhs.data[i]
        for values in itertools.product(carrier, repeat=k):
            binding = dict(zip(names, values))
            if evaluate(alg, left, binding) != evaluate(alg, right, binding):
                return (i, values)
    return None


def satisfies(alg: FinAlgebra, ident: NaturalIdentity) -> bool:
    """Whether both sides evaluate equally under every assignment of the
    canonical variables into the carrier, for every component."""
    return violation(alg, ident) is None


def satisfies_all(alg: FinAlgebra, idents: Iterable[NaturalIdentity]) -> bool:
    return all(satisfies(alg, ident) for ident in idents)


def satisfies_transform(alg: FinAlgebra, ident: NaturalIdentity) -> bool:
    """Independent satisfaction route: materialize both transformation
    components at the carrier as maps G(A) → stage(A) and compare the literal
    composites with term evaluation stage(A) → A."""
    if alg.sig != ident.sig:
        raise ValidationError("signature mismatch between algebra and identity")
    ga = apply_obj(domain_expr(ident), alg.carrier)
    st = stage(ident.sig, alg.carrier, ident.arity).terms

    def component(nt: NaturalTerm) -> FinMap:
        table = {}
        for (i, args) in ga:
            names = canonical_vars(ident.domain[i])
            inst = substitute(nt.data[i], {v: Var(a) for v, a in zip(names, args)})
            table[(i, args)] = inst
        return FinMap(ga, st, table)

    identity_binding = {a: a for a in alg.carrier}
    eps = FinMap(st, alg.carrier, {t: evaluate(alg, t, identity_binding) for t in st})
    return component(ident.lhs).then(eps) == component(ident.rhs).then(eps)


def bundle(idents: Iterable[NaturalIdentity]) -> NaturalIdentity:
    """Merge identities into one over the coproduct of their domains.

    Satisfaction of the bundle is exactly satisfaction of every input.
    """
    items = tuple(idents)
    if not items:
        raise ValidationError("cannot bundle an empty list of identities")
    sig = items[0].sig
    for ident in items:
        if ident.sig != sig:
            raise ValidationError("bundled identities must share a signature")
    arity = max(ident.arity for ident in items)
    domain = tuple(k for ident in items for k in ident.domain)
    lhs_data = tuple(t for ident in items for t in ident.lhs.data)
    rhs_data = tuple(t for ident in items for t in ident.rhs.data)
    return NaturalIdentity(
        NaturalTerm(sig, domain, arity, lhs_data),
        NaturalTerm(sig, domain, arity, rhs_data),
    )


def from_sigma(sig: Signature, lhs: Term, rhs: Term, vars: FinSet) -> NaturalIdentity:
    """Translate an ordinary two-term identity over a variable set into a
    single-component natural identity over hom(|vars|, -).

    Variables are renamed canonically in their sorted order; the arity of
    each side is the height of its term.
    """
    check_term(sig, lhs)
    check_term(sig, rhs)
    unknown = (variables(lhs) | variables(rhs)) - set(vars)
    if unknown:
        raise ValidationError(f"unbound variable {sorted(unknown, key=repr)[0]!r}")
    names = canonical_vars(len(vars))
    renaming = dict(zip(vars.elements, names))
    left, right = relabel(lhs, renaming), relabel(rhs, renaming)
    k = len(vars)
    return NaturalIdentity(
        NaturalTerm(sig, (k,), left.height, (left,)),
        NaturalTerm(sig, (k,), right.height, (right,)),
    )


@dataclass(frozen=True)
class ClassComparison:
    """Outcome of comparing two satisfied classes over bounded carriers."""

    equal: bool
    witness: Optional[FinAlgebra]
    checked: int

    def __bool__(self) -> bool:
        return self.equal


def _as_tuple(ids) -> tuple[NaturalIdentity, ...]:
    if isinstance(ids, NaturalIdentity):
        return (ids,)
    return tuple(ids)


def equivalent_upto(a, b, max_size: int, max_count: int = 1_000_000) -> ClassComparison:
    """Whether two identities (or sets of identities) induce the same class
    of algebras over every carrier of size ≤ max_size.

    This is a brute-force oracle over bounded carriers, not a proof of
    algebraic equivalence on all algebras.
    """
    left, right = _as_tuple(a), _as_tuple(b)
    if not left or not right:
        raise ValidationError("need at least one identity on each side")
    sig = left[0].sig
    for ident in left + right:
        if ident.sig != sig:
            raise ValidationError("all identities must share a signature")
    checked = 0
    for size in range(1, max_size + 1):
        carrier = FinSet(tuple(range(size)))
        for alg in enumerate_algebras(sig, carrier, max_count):
            checked += 1
            if satisfies_all(alg, left) != satisfies_all(alg, right):
                return ClassComparison(False, alg, checked)
    return ClassComparison(True, None, checked)
