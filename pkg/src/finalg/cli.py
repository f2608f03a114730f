"""Command-line surface tying the modules together.

Every report is deterministic, line-oriented ``key: value`` text on
stdout; diagnostics go to stderr.  Exit codes: 0 when the requested
property holds (or the computation succeeded), 1 when a checked
property fails (a witness is always printed), 2 for usage, parse, or
resource-limit errors.
"""
from __future__ import annotations

import argparse
import itertools
import sys
from typing import Optional, Sequence, TextIO

from . import variety as variety_mod
from .algebras import enumerate_algebras, evaluate
from .core import FinSet, enumerate_maps
from .dsl import SpecModel, parse_spec
from .equations import (
    equation_to_identity,
    identity_to_equation,
    roundtrip_class_equal,
    satisfies_equation,
)
from .errors import FinalgError, ParseError, ResourceLimitError, ValidationError
from .functors import Signature
from .identities import satisfies, violation
from .monadic import (
    DiagramOfMonads,
    RhoChain,
    check_monad_map,
    dalg_violation,
    em_structures,
    equi_check,
    induced_pair,
    powerset_instance,
)
from .terms import Term, format_term, stage, stage_sizes, variables


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _generators(n: int) -> FinSet:
    return FinSet(tuple(f"x{i + 1}" for i in range(n)))


def _load(path: str) -> SpecModel:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_spec(handle.read())


def _model_signature(model: SpecModel, name: str) -> Signature:
    if name not in model.signatures:
        raise ValidationError(f"unknown signature {name!r}")
    return model.signatures[name]


def _model_algebra(model: SpecModel, name: str):
    if name not in model.algebras:
        raise ValidationError(f"unknown algebra {name!r}")
    return model.algebras[name].algebra


def _model_identity(model: SpecModel, name: str):
    if name not in model.identities:
        raise ValidationError(f"unknown identity {name!r}")
    return model.natural_identity(name)


def _parse_term_text(model: SpecModel, sig_name: str, text: str) -> Term:
    sig = _model_signature(model, sig_name)
    ops = " ".join(f"op {name} : {arity}" for name, arity in sig)
    context = f"signature {sig_name} {{ {ops} }}\n"
    if model.vars:
        context += "vars " + " ".join(model.vars) + "\n"
    probe = parse_spec(context + f"identity probe_ over {sig_name} : {text} = {text}")
    return probe.identities["probe_"].lhs


def _format_subset(s: tuple) -> str:
    return "{" + ",".join(str(a) for a in s) + "}"


def _cmd_chain(args, model: SpecModel, out: TextIO) -> int:
    sig = _model_signature(model, args.signature)
    x = _generators(args.generators)
    sizes = stage_sizes(sig, x, args.upto)
    print("sizes: " + " ".join(str(s) for s in sizes), file=out)
    if args.terms:
        st = stage(sig, x, args.upto, args.max_stage_size)
        for t in st.terms:
            print(f"term: {format_term(t)}", file=out)
    return 0


def _cmd_eval(args, model: SpecModel, out: TextIO) -> int:
    decl = model.algebras.get(args.algebra)
    if decl is None:
        raise ValidationError(f"unknown algebra {args.algebra!r}")
    term = _parse_term_text(model, decl.sig_name, args.term)
    binding = {}
    if args.assign:
        for piece in args.assign.split(","):
            if "=" not in piece:
                raise ValidationError(f"bad assignment {piece!r}, expected var=atom")
            var, value = piece.split("=", 1)
            var, value = var.strip(), value.strip()
            if value not in decl.algebra.carrier:
                raise ValidationError(f"atom {value!r} not in the carrier")
            binding[var] = value
    value = evaluate(decl.algebra, term, binding)
    print(f"value: {value}", file=out)
    return 0


def _cmd_check(args, model: SpecModel, out: TextIO) -> int:
    alg = _model_algebra(model, args.algebra)
    ident = _model_identity(model, args.identity)
    if args.equation_generators is not None:
        arrow = identity_to_equation(ident, _generators(args.equation_generators))
        ok = satisfies_equation(alg, arrow)
        print("mode: equation", file=out)
        print(f"satisfies: {'true' if ok else 'false'}", file=out)
        return 0 if ok else 1
    witness = violation(alg, ident)
    print("mode: identity", file=out)
    print(f"satisfies: {'true' if witness is None else 'false'}", file=out)
    if witness is not None:
        component, values = witness
        decl = model.identities[args.identity]
        used = variables(decl.lhs) | variables(decl.rhs)
        names = FinSet(tuple(v for v in model.vars if v in used)).elements
        pairs = " ".join(f"{n}={v}" for n, v in zip(names, values))
        print(f"witness-component: {component}", file=out)
        print(f"witness-assignment: {pairs}", file=out)
        return 1
    return 0


def _cmd_enumerate(args, model: SpecModel, out: TextIO) -> int:
    sig = _model_signature(model, args.signature)
    carrier = FinSet(tuple(str(i) for i in range(args.size)))
    idents = [_model_identity(model, name) for name in args.identity or []]
    count = 0
    for alg in enumerate_algebras(sig, carrier, args.max_count):
        if all(satisfies(alg, ident) for ident in idents):
            count += 1
            if args.print_tables:
                cells = []
                for op, arity in sig:
                    for combo in itertools.product(carrier.elements, repeat=arity):
                        cells.append(f"{op}({','.join(combo)})={alg.tables[op][combo]}")
                print("algebra: " + " ".join(cells), file=out)
    print(f"count: {count}", file=out)
    return 0


def _cmd_convert(args, model: SpecModel, out: TextIO) -> int:
    ident = _model_identity(model, args.identity)
    x = _generators(args.generators)
    if args.mode == "to-equation":
        arrow = identity_to_equation(ident, x)
        print(f"generators: {args.generators}", file=out)
        print(f"arity: {arrow.arity}", file=out)
        print(f"stage-size: {len(arrow.part.base)}", file=out)
        print(f"blocks: {len(arrow.part)}", file=out)
        for block in arrow.part.blocks:
            print("block: " + " ".join(format_term(t) for t in block), file=out)
        return 0
    if args.mode == "to-identity":
        back = equation_to_identity(identity_to_equation(ident, x))
        print(f"components: {len(back.domain)}", file=out)
        for left, right in zip(back.lhs.data, back.rhs.data):
            print(f"component: {format_term(left)} = {format_term(right)}", file=out)
        return 0
    report = roundtrip_class_equal(ident, [args.generators], args.max_size)
    for size, cmp in report.outcomes:
        print(f"x-size {size}: {'equal' if cmp.equal else 'different'}", file=out)
        print(f"checked {size}: {cmp.checked}", file=out)
    print(f"equal: {'true' if report.equal else 'false'}", file=out)
    return 0 if report.equal else 1


def _cmd_free(args, model: SpecModel, out: TextIO) -> int:
    if args.presentation not in model.presentations:
        raise ValidationError(f"unknown presentation {args.presentation!r}")
    decl = model.presentations[args.presentation]
    sig = model.signatures[decl.sig_name]
    ids = model.presentation_identities(args.presentation)
    x = _generators(args.generators)
    result = variety_mod.saturate(sig, ids, x, args.max_depth, args.max_universe)
    if isinstance(result, variety_mod.Stabilized):
        print("status: stabilized", file=out)
        print(f"at-depth: {result.at_depth}", file=out)
        print(
            "class-counts: " + " ".join(str(c) for c in result.state.class_counts),
            file=out,
        )
        print(f"carrier: {len(result.algebra.carrier)}", file=out)
        for t in result.algebra.carrier:
            print(f"element: {format_term(t)}", file=out)
        for a in result.unit.dom:
            print(f"unit: {a} -> {format_term(result.unit.table[a])}", file=out)
        for op, arity in sig:
            for combo in itertools.product(result.algebra.carrier.elements, repeat=arity):
                image = result.algebra.tables[op][combo]
                rendered = ",".join(format_term(t) for t in combo)
                print(f"table {op}: ({rendered}) -> {format_term(image)}", file=out)
        return 0
    print("status: unstabilized", file=out)
    print(f"depth-bound: {result.depth_bound}", file=out)
    print(
        "class-counts: " + " ".join(str(c) for c in result.state.class_counts), file=out
    )
    print(f"universe-size: {len(result.state.universe)}", file=out)
    return 1


def _cmd_uprop(args, model: SpecModel, out: TextIO) -> int:
    if args.presentation not in model.presentations:
        raise ValidationError(f"unknown presentation {args.presentation!r}")
    decl = model.presentations[args.presentation]
    sig = model.signatures[decl.sig_name]
    ids = model.presentation_identities(args.presentation)
    x = _generators(args.generators)
    result = variety_mod.saturate(sig, ids, x, args.max_depth, args.max_universe)
    if not isinstance(result, variety_mod.Stabilized):
        raise ValidationError("saturation did not stabilize; cannot test freeness")
    target = _model_algebra(model, args.target)
    ok = variety_mod.check_universal_property(result, ids, target)
    assignments = len(target.carrier) ** len(x)
    print(f"assignments: {assignments}", file=out)
    print(f"unique-extensions: {'true' if ok else 'false'}", file=out)
    if not ok:
        for f in enumerate_maps(x, target.carrier):
            count = variety_mod.extension_count(result, target, f)
            if count != 1:
                pairs = " ".join(f"{a}={f.table[a]}" for a in x)
                print(f"witness-assignment: {pairs}", file=out)
                print(f"witness-extensions: {count}", file=out)
                break
        return 1
    return 0


def _cmd_rho_chain(args, model: SpecModel, out: TextIO) -> int:
    ident = _model_identity(model, args.identity)
    source = ident.lhs if args.side == "lhs" else ident.rhs
    chain = RhoChain.from_natural_term(source)
    report = check_monad_map(chain, args.bound, _generators(args.generators))
    print(f"checked: {report.checked}", file=out)
    print(f"holds: {'true' if report.holds else 'false'}", file=out)
    if not report.holds:
        kind, where, elem = report.failures[0]
        print(f"witness: {kind} at {where} on {format_term(elem)}", file=out)
        return 1
    return 0


def _cmd_equi(args, model: SpecModel, out: TextIO) -> int:
    ident = _model_identity(model, args.identity)
    cmp = equi_check(ident, args.level, args.max_size)
    print(f"checked: {cmp.checked}", file=out)
    print(f"equivalent: {'true' if cmp.equal else 'false'}", file=out)
    if not cmp.equal:
        print(f"witness-carrier: {len(cmp.witness.carrier)}", file=out)
        return 1
    return 0


def _cmd_em_check(args, model: Optional[SpecModel], out: TextIO) -> int:
    base = FinSet(tuple(str(i) for i in range(args.size)))
    m = powerset_instance(base)
    candidates = len(base) ** len(m.object)
    valid = em_structures(m)
    print(f"base-size: {args.size}", file=out)
    print(f"candidates: {candidates}", file=out)
    print(f"valid: {len(valid)}", file=out)
    for alpha in valid:
        cells = " ".join(
            f"{_format_subset(s)}->{alpha.table[s]}" for s in m.object
        )
        print(f"structure: {cells}", file=out)
    return 0


def _cmd_dalg_check(args, model: SpecModel, out: TextIO) -> int:
    ident = _model_identity(model, args.identity)
    alg = _model_algebra(model, args.algebra)
    diagram = DiagramOfMonads.from_identity(ident)
    pair = induced_pair(alg, diagram, args.bound)
    witness = dalg_violation(diagram, pair, args.bound)
    print(f"compatible: {'true' if witness is None else 'false'}", file=out)
    if witness is not None:
        print(f"witness: {format_term(witness)}", file=out)
        return 1
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="finalg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, needs_spec=True):
        p = sub.add_parser(name)
        p.set_defaults(func=func, needs_spec=needs_spec)
        if needs_spec:
            p.add_argument("--spec", required=True, help="declaration file")
        return p

    p = add("chain", _cmd_chain)
    p.add_argument("--signature", required=True)
    p.add_argument("--generators", type=int, required=True)
    p.add_argument("--upto", type=int, required=True)
    p.add_argument("--terms", action="store_true")
    p.add_argument("--max-stage-size", type=int, default=1_000_000)

    p = add("eval", _cmd_eval)
    p.add_argument("--algebra", required=True)
    p.add_argument("--term", required=True)
    p.add_argument("--assign", default="")

    p = add("check", _cmd_check)
    p.add_argument("--algebra", required=True)
    p.add_argument("--identity", required=True)
    p.add_argument("--equation-generators", type=int, default=None)

    p = add("enumerate", _cmd_enumerate)
    p.add_argument("--signature", required=True)
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--identity", action="append")
    p.add_argument("--print-tables", action="store_true")
    p.add_argument("--max-count", type=int, default=1_000_000)

    p = add("convert", _cmd_convert)
    p.add_argument("mode", choices=["to-equation", "to-identity", "roundtrip"])
    p.add_argument("--identity", required=True)
    p.add_argument("--generators", type=int, required=True)
    p.add_argument("--max-size", type=int, default=2)

    p = add("free", _cmd_free)
    p.add_argument("--presentation", required=True)
    p.add_argument("--generators", type=int, required=True)
    p.add_argument("--max-depth", type=int, required=True)
    p.add_argument("--max-universe", type=int, default=variety_mod.MAX_UNIVERSE)

    p = add("uprop", _cmd_uprop)
    p.add_argument("--presentation", required=True)
    p.add_argument("--generators", type=int, required=True)
    p.add_argument("--max-depth", type=int, required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--max-universe", type=int, default=variety_mod.MAX_UNIVERSE)

    p = add("rho-chain", _cmd_rho_chain)
    p.add_argument("--identity", required=True)
    p.add_argument("--side", choices=["lhs", "rhs"], default="lhs")
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--generators", type=int, default=2)

    p = add("equi", _cmd_equi)
    p.add_argument("--identity", required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--max-size", type=int, required=True)

    p = add("em-check", _cmd_em_check, needs_spec=False)
    p.add_argument("--size", type=int, default=2)

    p = add("dalg-check", _cmd_dalg_check)
    p.add_argument("--identity", required=True)
    p.add_argument("--algebra", required=True)
    p.add_argument("--bound", type=int, required=True)

    return parser


def run(argv: Sequence[str], out: TextIO = None, err: TextIO = None) -> int:
    """Entry point; returns the process exit code instead of exiting."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except _UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        model = _load(args.spec) if args.needs_spec else None
        return args.func(args, model, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=err)
        return 2
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=err)
        return 2
    except (ValidationError, FinalgError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return 2


def main(argv: Optional[Sequence[str]] = None) -> None:
    raise SystemExit(run(sys.argv[1:] if argv is None else argv))
