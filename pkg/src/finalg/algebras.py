"""Finite algebras over a signature: evaluation, morphisms, enumeration.

An algebra is a finite carrier plus one total operation table per
symbol; equivalently a single structure map F(A) → A, available as a
derived view.  Term evaluation is structural recursion on the term, so
it is automatically independent of the stage a term is viewed in.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .core import FinMap, FinSet
from .errors import ResourceLimitError, ValidationError
from .functors import SigF, Signature, apply_obj
from .terms import Node, Term, Var

MAX_ENUMERATION = 1_000_000


class FinAlgebra:
    """Finite carrier plus a total operation table per symbol."""

    __slots__ = ("sig", "carrier", "tables")

    def __init__(self, sig: Signature, carrier: FinSet, tables: Mapping[str, Mapping]):
        for name, arity in sig:
            if name not in tables:
                raise ValidationError(f"missing table for {name!r}")
            table = tables[name]
            for args in itertools.product(carrier.elements, repeat=arity):
                if args not in table:
                    raise ValidationError(f"table for {name!r} missing tuple {args!r}")
                if table[args] not in carrier:
                    raise ValidationError(
                        f"table for {name!r} maps {args!r} outside the carrier"
                    )
        extra = set(tables) - set(sig.names())
        if extra:
            raise ValidationError(f"table for unknown operation {sorted(extra)[0]!r}")
        self.sig = sig
        self.carrier = carrier
        self.tables = {name: dict(tables[name]) for name, _ in sig}

    def op(self, name: str, *args):
        return self.tables[name][args]

    def structure_map(self) -> FinMap:
        """The single structure map F(A) → A over the signature functor."""
        dom = apply_obj(SigF(self.sig), self.carrier)
        return FinMap(
            dom, self.carrier, {(name, args): self.tables[name][args] for (name, args) in dom}
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinAlgebra)
            and self.sig == other.sig
            and self.carrier == other.carrier
            and self.tables == other.tables
        )

    def __hash__(self):
        items = tuple(
            (name, tuple(sorted(table.items(), key=repr)))
            for name, table in self.tables.items()
        )
        return hash((self.sig, self.carrier, items))

    def __repr__(self) -> str:
        return f"FinAlgebra({self.sig.names()}, carrier={len(self.carrier)})"


@dataclass(eq=True, frozen=False)
class Assignment:
    """A total assignment of variables into an algebra's carrier."""

    vars: FinSet
    target: FinAlgebra
    map: FinMap

    def __post_init__(self):
        if self.map.dom != self.vars or self.map.cod != self.target.carrier:
            raise ValidationError("assignment map must go from vars to the carrier")


Binding = Union[Assignment, Mapping]


def _lookup(binding: Binding, name):
    table = binding.map.table if isinstance(binding, Assignment) else binding
    try:
        return table[name]
    except KeyError:
        raise ValidationError(f"unbound variable {name!r}") from None


def evaluate(alg: FinAlgebra, t: Term, binding: Binding):
    """Fold a term through the algebra's tables under a variable binding."""
    match t:
        case Var(name):
            return _lookup(binding, name)
        case Node(op, args):
            try:
                table = alg.tables[op]
            except KeyError:
                raise ValidationError(f"unknown operation {op!r}") from None
            return table[tuple(evaluate(alg, a, binding) for a in args)]
    raise ValidationError(f"not a term: {t!r}")


def is_morphism(src: FinAlgebra, dst: FinAlgebra, h: FinMap) -> bool:
    """Whether ``h`` commutes with every operation table on every tuple."""
    if src.sig != dst.sig:
        raise ValidationError("signature mismatch")
    if h.dom != src.carrier or h.cod != dst.carrier:
        raise ValidationError("carrier mismatch")
    table = h.table
    for name, arity in src.sig:
        s_table, d_table = src.tables[name], dst.tables[name]
        for args in itertools.product(src.carrier.elements, repeat=arity):
            if table[s_table[args]] != d_table[tuple(table[a] for a in args)]:
                return False
    return True


def count_algebras(sig: Signature, carrier: FinSet) -> int:
    """The number of algebras on the carrier: Π_σ |A|^(|A|^ar(σ))."""
    n = len(carrier)
    count = 1
    for _, arity in sig:
        count *= n ** (n**arity)
    return count


def enumerate_algebras(
    sig: Signature, carrier: FinSet, max_count: int = MAX_ENUMERATION
) -> Iterator[FinAlgebra]:
    """All algebras on the carrier, exactly once, in canonical table order."""
    total = count_algebras(sig, carrier)
    if total > max_count:
        raise ResourceLimitError("algebra enumeration", total, max_count)
    keys_per_op = [
        (name, list(itertools.product(carrier.elements, repeat=arity)))
        for name, arity in sig
    ]
    images_per_op = [
        itertools.product(carrier.elements, repeat=len(keys)) for _, keys in keys_per_op
    ]
    for choice in itertools.product(*images_per_op):
        tables = {
            name: dict(zip(keys, images))
            for (name, keys), images in zip(keys_per_op, choice)
        }
        yield FinAlgebra(sig, carrier, tables)
