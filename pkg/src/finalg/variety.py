"""Free algebras in a variety by congruence saturation over the term chain.

The engine walks the free-algebra chain depth by depth.  At each depth
it extends the registered term universe with every operation node over
the current class representatives, merges every substitution instance
of the defining identities that fits within the depth, and closes under
operation congruence (union-find with a node-signature index, as in
congruence-closure / equality-saturation engines).  Because every term
of height ≤ d is congruent to a node over minimal representatives, the
registered universe represents every class of the full stage set while
staying exponentially smaller.

Saturation stabilizes at depth d when the canonical map from depth-(d-1)
classes to depth-d classes is a bijection and the node signature over
every tuple of surviving classes is already known; the quotient then
carries a total finite algebra and the variable embedding becomes the
unit of the free algebra.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from .algebras import FinAlgebra, evaluate, is_morphism
from .core import FinMap, FinSet, Partition, enumerate_maps
from .errors import ResourceLimitError, ValidationError
from .functors import Signature
from .identities import NaturalIdentity, canonical_vars, satisfies_all
from .terms import Node, Term, Var, substitute

MAX_UNIVERSE = 500_000


def _occurrence_depths(t: Term, depth: int = 0, acc: Optional[dict] = None) -> dict:
    """Deepest occurrence of each variable, measured from the root.

    The height of t[g] is max(t.height, max_v(occ_v + height(g(v)))), so
    these depths turn the fits-in-stage test into a per-variable bound.
    """
    if acc is None:
        acc = {}
    match t:
        case Var(name):
            acc[name] = max(acc.get(name, 0), depth)
        case Node(_, args):
            for a in args:
                _occurrence_depths(a, depth + 1, acc)
        case _:
            raise ValidationError(f"not a term: {t!r}")
    return acc


class _Engine:
    """Union-find over registered terms with congruence closure."""

    def __init__(self):
        self.index: dict[Term, int] = {}
        self.terms: list[Term] = []
        self.parent: list[int] = []
        self.rank: list[int] = []
        self.rep: dict[int, Term] = {}
        self.node_args: list[Optional[tuple[int, ...]]] = []
        self.node_op: list[Optional[str]] = []
        self.sig_table: dict[tuple, int] = {}
        self.parents: dict[int, list[int]] = {}
        self.pending: deque[tuple[int, int]] = deque()
        self.instance_log: list[tuple] = []
        self.merge_count = 0

    def find(self, i: int) -> int:
        parent = self.parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def register(self, t: Term) -> int:
        tid = self.index.get(t)
        if tid is not None:
            return tid
        if isinstance(t, Node):
            arg_ids = tuple(self.register(a) for a in t.args)
        else:
            arg_ids = None
        tid = len(self.terms)
        self.index[t] = tid
        self.terms.append(t)
        self.parent.append(tid)
        self.rank.append(0)
        self.rep[tid] = t
        self.node_args.append(arg_ids)
        self.node_op.append(t.op if isinstance(t, Node) else None)
        if arg_ids is not None:
            key = (t.op, tuple(self.find(a) for a in arg_ids))
            other = self.sig_table.get(key)
            if other is None:
                self.sig_table[key] = tid
            elif self.find(other) != tid:
                self.pending.append((other, tid))
            for root in set(key[1]):
                self.parents.setdefault(root, []).append(tid)
        return tid

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        elif self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.parent[rb] = ra
        self.merge_count += 1
        if self.rep[rb].sort_key() < self.rep[ra].sort_key():
            self.rep[ra] = self.rep[rb]
        del self.rep[rb]
        moved = self.parents.pop(rb, [])
        for nid in moved:
            key = (self.node_op[nid], tuple(self.find(x) for x in self.node_args[nid]))
            other = self.sig_table.get(key)
            if other is None:
                self.sig_table[key] = nid
            elif self.find(other) != self.find(nid):
                self.pending.append((other, nid))
        self.parents.setdefault(ra, []).extend(moved)
        return True

    def drain(self) -> bool:
        progress = False
        while self.pending:
            a, b = self.pending.popleft()
            progress |= self.union(a, b)
        return progress

    def class_roots(self) -> list[int]:
        return sorted({self.find(i) for i in range(len(self.terms))},
                      key=lambda r: self.rep[r].sort_key())

    def lookup_sig(self, op: str, arg_roots: tuple[int, ...]) -> Optional[int]:
        nid = self.sig_table.get((op, arg_roots))
        return None if nid is None else self.find(nid)


@dataclass(frozen=True)
class CongruenceState:
    """Snapshot of a saturation run: the registered universe, its classes,
    the induced partial operation tables on class representatives, the
    class count per processed depth, and the applied identity instances."""

    sig: Signature
    x: FinSet
    depth: int
    universe: FinSet
    classes: Partition
    op_tables: dict
    class_counts: tuple[int, ...]
    instance_pairs: tuple[tuple[Term, Term], ...]


@dataclass(frozen=True)
class Stabilized:
    algebra: FinAlgebra
    unit: FinMap
    at_depth: int
    state: CongruenceState


@dataclass(frozen=True)
class Unstabilized:
    state: CongruenceState
    depth_bound: int


FreeAlgebraResult = Union[Stabilized, Unstabilized]


def _flatten(ids: Iterable[NaturalIdentity], sig: Signature) -> list[tuple]:
    """One entry per identity component: used variables in canonical order,
    per-variable occurrence-depth offsets, the two data terms, and the
    height of the ground skeleton."""
    components = []
    comp_id = 0
    for ident in ids:
        if ident.sig != sig:
            raise ValidationError("identity signature differs from presentation")
        for c, k in enumerate(ident.domain):
            left, right = ident.lhs.data[c], ident.rhs.data[c]
            occ_l = _occurrence_depths(left)
            occ_r = _occurrence_depths(right)
            used = tuple(v for v in canonical_vars(k) if v in occ_l or v in occ_r)
            offsets = {v: max(occ_l.get(v, 0), occ_r.get(v, 0)) for v in used}
            components.append(
                (comp_id, used, offsets, left, right, max(left.height, right.height))
            )
            comp_id += 1
    return components


def _extract_state(engine: _Engine, sig: Signature, x: FinSet, depth: int,
                   counts: list[int]) -> CongruenceState:
    universe = FinSet(tuple(engine.terms))
    groups: dict[int, list[Term]] = {}
    for i, t in enumerate(engine.terms):
        groups.setdefault(engine.find(i), []).append(t)
    classes = Partition(universe, groups.values())
    op_tables: dict = {name: {} for name, _ in sig}
    for nid, arg_ids in enumerate(engine.node_args):
        if arg_ids is None:
            continue
        reps = tuple(engine.rep[engine.find(a)] for a in arg_ids)
        op_tables[engine.node_op[nid]][reps] = engine.rep[engine.find(nid)]
    return CongruenceState(
        sig, x, depth, universe, classes, op_tables, tuple(counts),
        tuple(engine.instance_log),
    )


def saturate(
    sig: Signature,
    ids: Sequence[NaturalIdentity],
    x: FinSet,
    depth_bound: int,
    max_universe: int = MAX_UNIVERSE,
) -> FreeAlgebraResult:
    """Search for the free algebra on ``x`` in the variety presented by ``ids``.

    Returns :class:`Stabilized` with the quotient algebra and its unit, or
    :class:`Unstabilized` with the last state if ``depth_bound`` depths did
    not suffice.
    """
    if depth_bound < 1:
        raise ValidationError("depth bound must be at least 1")
    components = _flatten(ids, sig)
    engine = _Engine()
    for a in x:
        engine.register(Var(a))
    counts: list[int] = []
    size_after_depth = [len(engine.terms)]
    roots_after_depth = [[engine.find(i) for i in range(len(engine.terms))]]
    applied: set = set()

    for depth in range(1, depth_bound + 1):
        frontier_reps = [engine.rep[r] for r in engine.class_roots()]
        for name, arity in sig:
            for args in itertools.product(frontier_reps, repeat=arity):
                engine.register(Node(name, args))
        if len(engine.terms) > max_universe:
            raise ResourceLimitError("saturation universe", len(engine.terms), max_universe)
        engine.drain()

        while True:
            merges_before = engine.merge_count
            terms_before = len(engine.terms)
            reps = [engine.rep[r] for r in engine.class_roots()]
            for comp_id, used, offsets, left, right, ground in components:
                if ground > depth:
                    continue
                pools = [
                    [t for t in reps if t.height + offsets[v] <= depth] for v in used
                ]
                for images in itertools.product(*pools):
                    key = (comp_id, tuple(engine.index[t] for t in images))
                    if key in applied:
                        continue
                    applied.add(key)
                    g = dict(zip(used, images))
                    li = substitute(left, g)
                    ri = substitute(right, g)
                    a, b = engine.register(li), engine.register(ri)
                    if engine.union(a, b):
                        engine.instance_log.append((li, ri))
                engine.drain()
            if len(engine.terms) > max_universe:
                raise ResourceLimitError(
                    "saturation universe", len(engine.terms), max_universe
                )
            if engine.merge_count == merges_before and len(engine.terms) == terms_before:
                break

        counts.append(len({engine.find(i) for i in range(len(engine.terms))}))
        size_after_depth.append(len(engine.terms))
        roots_after_depth.append([engine.find(i) for i in range(len(engine.terms))])

        prev_roots = set(roots_after_depth[depth - 1])
        prev_now = {engine.find(r) for r in prev_roots}
        injective = len(prev_now) == len(prev_roots)
        current = {engine.find(i) for i in range(size_after_depth[depth])}
        surjective = current <= prev_now
        closed = True
        if injective and surjective:
            ordered = sorted(prev_now, key=lambda r: engine.rep[r].sort_key())
            for name, arity in sig:
                for arg_roots in itertools.product(ordered, repeat=arity):
                    root = engine.lookup_sig(name, arg_roots)
                    if root is None or root not in prev_now:
                        closed = False
                        break
                if not closed:
                    break
        if injective and surjective and closed:
            state = _extract_state(engine, sig, x, depth, counts)
            ordered = sorted(prev_now, key=lambda r: engine.rep[r].sort_key())
            carrier = FinSet(tuple(engine.rep[r] for r in ordered))
            tables: dict = {}
            for name, arity in sig:
                table = {}
                for arg_roots in itertools.product(ordered, repeat=arity):
                    reps_args = tuple(engine.rep[r] for r in arg_roots)
                    table[reps_args] = engine.rep[engine.lookup_sig(name, arg_roots)]
                tables[name] = table
            algebra = FinAlgebra(sig, carrier, tables)
            unit = FinMap(
                x, carrier, {a: engine.rep[engine.find(engine.index[Var(a)])] for a in x}
            )
            return Stabilized(algebra, unit, depth, state)

    state = _extract_state(engine, sig, x, depth_bound, counts)
    return Unstabilized(state, depth_bound)


def _state_of(res: Union[FreeAlgebraResult, CongruenceState]) -> CongruenceState:
    if isinstance(res, CongruenceState):
        return res
    if isinstance(res, (Stabilized, Unstabilized)):
        return res.state
    raise ValidationError(f"not a saturation result: {res!r}")


def word_equal(res, t1: Term, t2: Term) -> bool:
    """Whether two terms denote the same element of the (partial) quotient."""
    if isinstance(res, Stabilized):
        binding = res.unit.table
        return evaluate(res.algebra, t1, binding) == evaluate(res.algebra, t2, binding)
    state = _state_of(res)

    def normalize(t: Term) -> Term:
        match t:
            case Var(_):
                if t not in state.classes.base:
                    raise ValidationError(f"variable {t!r} outside the generators")
                return state.classes.rep(t)
            case Node(op, args):
                reps = tuple(normalize(a) for a in args)
                found = state.op_tables[op].get(reps)
                if found is None:
                    raise ValidationError(
                        f"term not resolvable at depth {state.depth}: {t!r}"
                    )
                return found
        raise ValidationError(f"not a term: {t!r}")

    return normalize(t1) == normalize(t2)


def audit_derivations(res) -> bool:
    """Replay the recorded identity instances through a fresh congruence
    closure over the same universe and compare the partitions.

    Equality certifies that every merge the engine performed is derivable
    from an identity instance plus congruence/transitivity steps.
    """
    state = _state_of(res)
    engine = _Engine()
    for t in state.universe:
        engine.register(t)
    engine.drain()
    for a, b in state.instance_pairs:
        engine.union(engine.register(a), engine.register(b))
        engine.drain()
    groups: dict[int, list[Term]] = {}
    for i, t in enumerate(engine.terms):
        groups.setdefault(engine.find(i), []).append(t)
    replayed = Partition(FinSet(tuple(engine.terms)), groups.values())
    return replayed == state.classes


def extension_count(res: Stabilized, target: FinAlgebra, f: FinMap) -> int:
    """How many algebra morphisms out of the free algebra extend ``f``."""
    free = res.algebra
    count = 0
    for h in enumerate_maps(free.carrier, target.carrier):
        if all(h.table[res.unit.table[a]] == f.table[a] for a in res.unit.dom):
            if is_morphism(free, target, h):
                count += 1
    return count


def check_universal_property(
    res: Stabilized, ids: Sequence[NaturalIdentity], target: FinAlgebra
) -> bool:
    """Whether every assignment of the generators into ``target`` extends to
    exactly one algebra morphism from the free algebra."""
    if not isinstance(res, Stabilized):
        raise ValidationError("universal property requires a stabilized result")
    if not satisfies_all(target, ids):
        raise ValidationError("target algebra is outside the variety")
    for f in enumerate_maps(res.unit.dom, target.carrier):
        if extension_count(res, target, f) != 1:
            return False
    return True
