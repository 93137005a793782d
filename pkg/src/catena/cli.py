"""Command-line front end.

Commands: ``run`` and ``trace`` evaluate programs, ``sgpoid`` extracts a
state space and its generated semigroupoid to JSON, ``decompose``
computes the collapse/copy/compress decomposition of a semigroupoid
file, ``export`` converts documents to DOT or canonical JSON, and
``report`` writes figures and CSV tables for a language instance.

Exit codes: 0 success, 1 user error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import lang, serialize
from .decomposition import covering_decompose, verify_emulation
from .errors import LangError, NotAMorphism, SchemaError, WorkbenchError
from .semigroupoid import arrow_type, check_morphism, extract_language, validate

EXIT_OK, EXIT_USER, EXIT_INTERNAL = 0, 1, 2


class UsageError(WorkbenchError):
    """Bad flags or arguments; maps to exit code 1."""


class InternalCheckFailed(WorkbenchError):
    """One of our own outputs failed validation; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(kind: str, minimum: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise UsageError(f"{kind} must be an integer") from None
        if value < minimum:
            raise UsageError(f"{kind} must be at least {minimum}")
        return value
    return parse


def _gens(text: str) -> list[str]:
    names = [g.strip() for g in text.split(",") if g.strip()]
    if not names:
        raise UsageError("--gens needs a nonempty comma-separated list")
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="catena", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def program_command(name, help_text):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("file", nargs="?", help="program file (UTF-8, # comments)")
        cmd.add_argument("-e", "--expr", help="inline program text")
        cmd.add_argument("--mod", type=_positive("--mod", 2), default=None,
                         help="reduce integers modulo this value")
        cmd.add_argument("--cap", type=_positive("--cap", 1), default=None,
                         help="maximum stack depth")
        return cmd

    run_cmd = program_command("run", "evaluate a program and print the final stack")
    run_cmd.add_argument("--trace", action="store_true",
                         help="print one stack per instruction instead")
    run_cmd.set_defaults(func=cmd_run)

    trace_cmd = program_command("trace", "print the stack after every instruction")
    trace_cmd.set_defaults(func=cmd_trace)

    sgpoid = sub.add_parser("sgpoid", help="extract the semigroupoid of a language")
    sgpoid.add_argument("--gens", type=_gens, required=True,
                        help="comma-separated generator words")
    sgpoid.add_argument("--cap", type=_positive("--cap", 1), required=True)
    sgpoid.add_argument("--mod", type=_positive("--mod", 2), required=True)
    sgpoid.add_argument("--out", type=Path, default=None,
                        help="output JSON path (default: stdout)")
    sgpoid.set_defaults(func=cmd_sgpoid)

    decompose = sub.add_parser("decompose",
                               help="decompose a semigroupoid JSON file")
    decompose.add_argument("input", type=Path, help="semigroupoid JSON file")
    decompose.add_argument("--morphism", default="arrowtype",
                           help="'arrowtype' or a morphism JSON file")
    decompose.add_argument("--out", type=Path, default=None,
                           help="decomposition JSON path (default: stdout)")
    decompose.set_defaults(func=cmd_decompose)

    export = sub.add_parser("export", help="convert a document to DOT or JSON")
    export.add_argument("input", type=Path, help="semigroupoid or graph JSON file")
    export.add_argument("--format", choices=("json", "dot"), default="dot")
    export.add_argument("--out", type=Path, default=None)
    export.set_defaults(func=cmd_export)

    report = sub.add_parser("report",
                            help="write figures and CSV tables for a language")
    report.add_argument("--gens", type=_gens, required=True)
    report.add_argument("--cap", type=_positive("--cap", 1), required=True)
    report.add_argument("--mod", type=_positive("--mod", 2), required=True)
    report.add_argument("--out", type=Path, required=True, help="output directory")
    report.set_defaults(func=cmd_report)
    return parser


def _read_source(args) -> str:
    if args.expr is not None and args.file is not None:
        raise UsageError("give either -e or a file, not both")
    if args.expr is not None:
        return args.expr
    if args.file is not None:
        try:
            return Path(args.file).read_text(encoding="utf-8")
        except OSError as err:
            raise UsageError(f"cannot read {args.file}: {err}") from None
    raise UsageError("no program: use -e or a file")


def _write(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def cmd_run(args) -> int:
    if getattr(args, "trace", False):
        return cmd_trace(args)
    source = _read_source(args)
    machine = lang.Machine(modulus=args.mod, cap=args.cap)
    machine = lang.run_program(source, machine)
    print(lang.render_stack(machine.stack))
    return EXIT_OK


def cmd_trace(args) -> int:
    source = _read_source(args)
    machine = lang.Machine(modulus=args.mod, cap=args.cap)
    _, steps = lang.trace_program(source, machine)
    for stack in steps:
        print(lang.render_stack(stack))
    return EXIT_OK


def cmd_sgpoid(args) -> int:
    extraction = extract_language(args.gens, args.cap, args.mod)
    report = validate(extraction.semigroupoid)
    if not report.ok:
        raise InternalCheckFailed(
            f"generated semigroupoid failed validation: {report.violations[0].message}")
    document = serialize.semigroupoid_to_dict(extraction.semigroupoid)
    document["statespace"] = serialize.statespace_block(
        extraction.space, extraction.transformations, len(extraction.closure))
    document["graph"] = serialize.graph_block(extraction.graph)
    document["provenance"] = {"generators": list(extraction.space.generators),
                              "cap": args.cap, "modulus": args.mod}
    _write(serialize.dumps(document), args.out)
    summary = (f"states={len(extraction.space)} closure={len(extraction.closure)} "
               f"arrows={len(extraction.semigroupoid.arrows)}")
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def _load_document(path: Path) -> dict:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err}") from None
    return serialize.loads(text)


def cmd_decompose(args) -> int:
    document = _load_document(args.input)
    source = serialize.semigroupoid_from_dict(document)
    report = validate(source)
    if not report.ok:
        raise SchemaError(f"input is not a valid semigroupoid: "
                          f"{report.violations[0].message}")
    if args.morphism == "arrowtype":
        _, phi = arrow_type(source)
    else:
        phi = serialize.morphism_from_dict(_load_document(Path(args.morphism)), source)
        morphism_report = check_morphism(phi)
        if not morphism_report.ok:
            first = morphism_report.violations[0]
            raise NotAMorphism(f"{first.message} (witness {first.witness})")
    decomposition = covering_decompose(source, phi)
    emulation = verify_emulation(source, decomposition)
    if not emulation.ok:
        raise InternalCheckFailed(
            f"decomposition failed emulation: {emulation.violations[0].message}")
    _write(serialize.dumps(serialize.decomposition_to_dict(decomposition, emulation)),
           args.out)
    sizes = ",".join(str(len(c.members)) for c in decomposition.components)
    summary = (f"top={len(decomposition.top.arrows)} components=[{sizes}] "
               f"classes={len(decomposition.classes)} "
               f"emulation={'ok' if emulation.ok else 'failed'}")
    print(summary, file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def cmd_export(args) -> int:
    document = _load_document(args.input)
    if args.format == "dot":
        _write(serialize.document_to_dot(document), args.out)
        return EXIT_OK
    if "objects" in document and "arrows" in document:
        rebuilt = serialize.semigroupoid_to_dict(
            serialize.semigroupoid_from_dict(document))
        for key in ("statespace", "graph", "morphism", "provenance"):
            if key in document:
                rebuilt[key] = document[key]
    elif "edges" in document:
        rebuilt = serialize.graph_block(serialize.graph_from_dict(document))
    else:
        raise SchemaError("document is neither a semigroupoid nor a graph")
    _write(serialize.dumps(rebuilt), args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import generate_report
    paths = generate_report(args.gens, args.cap, args.mod, args.out)
    for path in paths:
        print(path)
    print((args.out / "summary.txt").read_text(encoding="utf-8").rstrip()
          .splitlines()[-1])
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USER
    except LangError as err:
        where = f" at token {err.position}" if err.position is not None else ""
        print(f"error: {type(err).__name__}{where}: {err}", file=sys.stderr)
        return EXIT_USER
    except InternalCheckFailed as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_INTERNAL
    except WorkbenchError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_USER


def console():  # pragma: no cover - thin wrapper for the entry point
    raise SystemExit(main())


if __name__ == "__main__":  # pragma: no cover
    console()
