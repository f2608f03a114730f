"""Terms over a signature and the stage sets of the free-algebra chain.

Stage n over a variable set X is the set of all terms of height ≤ n;
stage 0 is the variables alone.  The connecting maps of the chain are
the variable embedding ``iota``, the node constructor ``q_node``, the
stage inclusions ``w_embed``, and the one-step injection ``y_inject``.
In this finite-set instantiation all connecting maps are injections, so
stages are literally nested sets of terms and ``w_embed`` is inclusion.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Mapping

from .core import FinMap, FinSet, atom_key
from .errors import ResourceLimitError, ValidationError
from .functors import SigF, Signature, apply_obj

# Stage sets are refused beyond this many terms unless the caller
# overrides the bound explicitly.
MAX_STAGE_SIZE = 1_000_000


class Term:
    """Base class; a term is either a :class:`Var` or a :class:`Node`."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: object

    @cached_property
    def height(self) -> int:
        return 0

    @cached_property
    def size(self) -> int:
        return 1

    def sort_key(self):
        return (0, 1, (0, atom_key(self.name)))

    def __repr__(self) -> str:
        return f"Var({self.name!r})"


@dataclass(frozen=True)
class Node(Term):
    op: str
    args: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    @cached_property
    def height(self) -> int:
        return 1 + max((a.height for a in self.args), default=0)

    @cached_property
    def size(self) -> int:
        return 1 + sum(a.size for a in self.args)

    @cached_property
    def _key(self):
        return (self.height, self.size, (1, self.op, tuple(a.sort_key() for a in self.args)))

    def sort_key(self):
        return self._key

    def __repr__(self) -> str:
        inner = ", ".join(repr(a) for a in self.args)
        return f"Node({self.op!r}, [{inner}])"


def variables(t: Term) -> frozenset:
    """The set of variable atoms occurring in ``t``."""
    match t:
        case Var(name):
            return frozenset((name,))
        case Node(_, args):
            out: frozenset = frozenset()
            for a in args:
                out |= variables(a)
            return out
    raise ValidationError(f"not a term: {t!r}")


def substitute(t: Term, mapping: Mapping[object, Term]) -> Term:
    """Replace every variable by the term it is mapped to."""
    match t:
        case Var(name):
            try:
                return mapping[name]
            except KeyError:
                raise ValidationError(f"unbound variable {name!r}") from None
        case Node(op, args):
            return Node(op, tuple(substitute(a, mapping) for a in args))
    raise ValidationError(f"not a term: {t!r}")


def relabel(t: Term, f: Mapping[object, object]) -> Term:
    """Rename variables by ``f``, preserving the tree shape."""
    match t:
        case Var(name):
            try:
                return Var(f[name])
            except KeyError:
                raise ValidationError(f"unbound variable {name!r}") from None
        case Node(op, args):
            return Node(op, tuple(relabel(a, f) for a in args))
    raise ValidationError(f"not a term: {t!r}")


def format_term(t: Term) -> str:
    """Render a term in the textual syntax: variables bare, ops ``name(...)``."""
    match t:
        case Var(name):
            return str(name)
        case Node(op, args):
            return f"{op}({','.join(format_term(a) for a in args)})"
    raise ValidationError(f"not a term: {t!r}")


def check_term(sig: Signature, t: Term) -> None:
    """Validate arities of every node against the signature."""
    match t:
        case Var(_):
            return
        case Node(op, args):
            if sig.arity(op) != len(args):
                raise ValidationError(
                    f"operation {op!r} applied to {len(args)} arguments, arity is {sig.arity(op)}"
                )
            for a in args:
                check_term(sig, a)
            return
    raise ValidationError(f"not a term: {t!r}")


@dataclass(frozen=True)
class Stage:
    """Stage n of the chain: all terms over ``sig`` and ``x`` of height ≤ n."""

    sig: Signature
    x: FinSet
    n: int
    terms: FinSet


def stage_sizes(sig: Signature, x: FinSet, upto: int) -> list[int]:
    """Stage cardinalities 0..upto via |S_{k+1}| = Σ_σ |S_k|^{ar(σ)} + |x|."""
    sizes = [len(x)]
    for _ in range(upto):
        prev = sizes[-1]
        sizes.append(sum(prev**arity for _, arity in sig) + len(x))
    return sizes


@lru_cache(maxsize=None)
def _stage_terms(sig: Signature, x: FinSet, n: int) -> FinSet:
    if n == 0:
        return FinSet(tuple(Var(a) for a in x))
    prev = _stage_terms(sig, x, n - 1).elements
    atoms = [Var(a) for a in x]
    for name, arity in sig:
        for args in itertools.product(prev, repeat=arity):
            atoms.append(Node(name, args))
    return FinSet(tuple(atoms))


def stage(sig: Signature, x: FinSet, n: int, max_size: int = MAX_STAGE_SIZE) -> Stage:
    """Build stage ``n`` over variable set ``x``; guards against blow-up."""
    if n < 0:
        raise ValidationError("negative stage index")
    for k, size in enumerate(stage_sizes(sig, x, n)):
        if size > max_size:
            raise ResourceLimitError(f"stage {k} over {len(x)} variables", size, max_size)
    return Stage(sig, x, n, _stage_terms(sig, x, n))


def iota(st: Stage) -> FinMap:
    """The variable embedding X → stage n."""
    return FinMap(st.x, st.terms, {a: Var(a) for a in st.x})


def q_node(sig: Signature, x: FinSet, n: int, max_size: int = MAX_STAGE_SIZE) -> FinMap:
    """The node constructor F(stage n) → stage n+1, sending a tuple to its node."""
    src = apply_obj(SigF(sig), stage(sig, x, n, max_size).terms)
    dst = stage(sig, x, n + 1, max_size).terms
    return FinMap(src, dst, {(name, args): Node(name, args) for (name, args) in src})


def w_embed(st_m: Stage, n: int, max_size: int = MAX_STAGE_SIZE) -> FinMap:
    """The inclusion stage m ⊆ stage n for m ≤ n."""
    if n < st_m.n:
        raise ValidationError(f"cannot embed stage {st_m.n} into lower stage {n}")
    dst = stage(st_m.sig, st_m.x, n, max_size).terms
    return FinMap(st_m.terms, dst, {t: t for t in st_m.terms})


def y_inject(sig: Signature, x: FinSet, n: int, max_size: int = MAX_STAGE_SIZE) -> FinMap:
    """The one-step injection F(X) → stage n (n ≥ 1): a tuple of variables
    becomes its height-1 node, included into stage n."""
    if n < 1:
        raise ValidationError("y_inject needs stage index ≥ 1")
    src = apply_obj(SigF(sig), x)
    dst = stage(sig, x, n, max_size).terms
    table = {
        (name, args): Node(name, tuple(Var(a) for a in args)) for (name, args) in src
    }
    return FinMap(src, dst, table)


def stage_map(sig: Signature, f: FinMap, n: int, max_size: int = MAX_STAGE_SIZE) -> FinMap:
    """Functorial action of stage n on a variable map: relabel variables."""
    src = stage(sig, f.dom, n, max_size).terms
    dst = stage(sig, f.cod, n, max_size).terms
    return FinMap(src, dst, {t: relabel(t, f.table) for t in src})
