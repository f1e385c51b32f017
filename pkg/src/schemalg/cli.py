"""Command-line interface.

Exit status: 0 for a positive answer (valid, satisfiable, included,
equivalent), 1 for a negative one, 2 for errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from .algebra import SchemaError, show_env, validate
from .frontend import translate
from .ir import dump_env, to_json_schema
from .json_model import JsonSyntaxError, DuplicateKeyError, parse_json, serialize_json
from .negation import eliminate_not, not_complete
from .normalizer import BudgetExceeded, normalize
from .regex import AlphabetError, AutomatonTooLarge, PatternDialectError
from .witness import DEFAULT_BUDGET, check_equivalence, check_inclusion, run_fixpoint

ERRORS = (
    SchemaError, BudgetExceeded, AlphabetError, PatternDialectError, AutomatonTooLarge,
    JsonSyntaxError, DuplicateKeyError, OSError, ValueError,
)


class Answer:
    def __init__(self, code, answer, text, **extra):
        self.code, self.answer, self.text, self.extra = code, answer, text, extra


def _read(path):
    with open(path, "rb") as f:
        return parse_json(f.read())


def _load(path, args):
    doc = _read(path)
    if args.root and isinstance(doc, dict) and "$id" not in doc:
        doc = {"$id": args.root, **doc}
    documents = {}
    for extra in args.document or ():
        d = _read(extra)
        uri = d.get("$id") if isinstance(d, dict) else None
        documents[uri or "file:" + extra] = d
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        env = translate(doc, documents)
    args.diagnostics.extend(str(w.message) for w in caught)
    return env


def _json(v):
    return json.loads(serialize_json(v))


def cmd_validate(args):
    env = _load(args.schema, args)
    ok = validate(_read(args.instance), env)
    return Answer(0 if ok else 1, "valid" if ok else "invalid", "valid" if ok else "invalid")


def _states(trace):
    return [{k: repr(v) for k, v in states.items()} for states in trace]


def cmd_witness(args, only_sat=False):
    env = _load(args.schema, args)
    out = run_fixpoint(normalize(env), args.budget)
    extra = {"passes": out.passes}
    if args.trace:
        extra["trace"] = _states(out.trace)
    if not out.satisfiable:
        return Answer(1, "unsatisfiable", "UNSATISFIABLE", **extra)
    if not validate(out.witness, env):
        raise AssertionError("generated witness does not validate")
    if only_sat:
        return Answer(0, "satisfiable", "SATISFIABLE", witness=_json(out.witness), **extra)
    return Answer(0, "satisfiable", serialize_json(out.witness), witness=_json(out.witness), **extra)


def cmd_sat(args):
    return cmd_witness(args, only_sat=True)


def cmd_include(args):
    res = check_inclusion(_load(args.left, args), _load(args.right, args), args.budget)
    if res.included:
        return Answer(0, "included", "INCLUDED")
    return Answer(1, "not-included", serialize_json(res.counterexample), witness=_json(res.counterexample))


def cmd_equiv(args):
    res = check_equivalence(_load(args.left, args), _load(args.right, args), args.budget)
    if res.equivalent:
        return Answer(0, "equivalent", "EQUIVALENT")
    return Answer(1, "not-equivalent", f"{res.direction} {serialize_json(res.counterexample)}",
                  witness=_json(res.counterexample), direction=res.direction)


def cmd_negate(args):
    env = not_complete(_load(args.schema, args))
    env.root = env.complement[env.root]
    env = eliminate_not(env)
    if args.json_schema:
        doc = to_json_schema(env)
        return Answer(0, "negated", serialize_json(doc), schema=_json(doc))
    return Answer(0, "negated", show_env(env), ir=dump_env(env))


def cmd_normalize(args):
    env = _load(args.schema, args)
    trace = [] if args.trace else None
    out = normalize(env, trace=trace)
    extra = {"ir": dump_env(out)}
    text = show_env(out)
    if trace is not None:
        extra["trace"] = [{"phase": name, "ir": dump_env(e)} for name, e in trace]
        text = "\n\n".join(f"# {name}\n{show_env(e)}" for name, e in trace)
    return Answer(0, "normalized", text, **extra)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="maximum ways to meet object requirements per group (default %(default)s)")
    common.add_argument("--trace", action="store_true", help="include per-pass or per-phase snapshots")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--root", help="base URI of the schema document")
    common.add_argument("--document", action="append", metavar="PATH",
                        help="another schema document that references may reach (keyed by its $id)")
    common.add_argument("--seed", type=int, default=0, help="accepted for compatibility; output is deterministic")

    p = argparse.ArgumentParser(prog="schemalg", description="JSON Schema satisfiability, inclusion and witnesses.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("validate", parents=[common], help="check an instance against a schema")
    s.add_argument("schema")
    s.add_argument("instance")
    s.set_defaults(func=cmd_validate)
    for name, func, help_text in (
        ("witness", cmd_witness, "print a value satisfying the schema"),
        ("sat", cmd_sat, "decide satisfiability"),
        ("normalize", cmd_normalize, "print the prepared normal form"),
        ("negate", cmd_negate, "print a negation-free complement"),
    ):
        s = sub.add_parser(name, parents=[common], help=help_text)
        s.add_argument("schema")
        s.set_defaults(func=func)
        if name == "negate":
            s.add_argument("--json-schema", action="store_true",
                           help="emit JSON Schema with x- extension keywords instead of the algebra")
    for name, func, help_text in (
        ("include", cmd_include, "decide whether every instance of LEFT is one of RIGHT"),
        ("equiv", cmd_equiv, "decide whether two schemas have the same instances"),
    ):
        s = sub.add_parser(name, parents=[common], help=help_text)
        s.add_argument("left")
        s.add_argument("right")
        s.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.diagnostics = []
    try:
        res = args.func(args)
    except ERRORS as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    if args.format == "json":
        body = {"answer": res.answer, **res.extra, "diagnostics": args.diagnostics}
        print(json.dumps(body, sort_keys=True))
    else:
        for d in args.diagnostics:
            print(f"warning: {d}", file=sys.stderr)
        print(res.text)
    return res.code


if __name__ == "__main__":
    sys.exit(main())
