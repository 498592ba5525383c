"""Command-line front end.

Exit codes: 0 success, 1 negative decision (``equal``, ``equiv``,
``reproduce``), 2 bad input.
"""

from __future__ import annotations

import argparse
import os
import re
import sys

from . import acceptance
from .canonical import canonicalize, seq_equal
from .extraction import extract
from .goto import collapse_jump_chains, metrics, project_bounded, project_unbounded
from .jumpfree import compile, to_normal_form
from .services import (
    RegisterBank,
    ServiceError,
    apply_bank,
    builtin_service,
    parse_service,
)
from .syntax import (
    PGA,
    BoundedPGAg,
    DialectError,
    ParseError,
    PGAg,
    parse,
    parse_dialect,
    render,
    render_instruction,
)
from .thread import (
    SpecFormatError,
    ThreadSpec,
    bisimilar,
    distinguishing_depth,
    format_spec,
    parse_spec,
    simulate,
)


class InputError(Exception):
    pass


_SPEC_LINE = re.compile(r"^\s*X\d+\s*=")


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _is_spec(text: str) -> bool:
    for line in text.splitlines():
        if line.strip() and not line.strip().startswith("//"):
            return bool(_SPEC_LINE.match(line))
    return False


def load_thread(path: str, as_pgag: bool = False) -> ThreadSpec:
    """Thread from a spec file, a PGA program, or (``as_pgag``) a PGAg
    program via the unbounded projection."""
    text = _read(path)
    if _is_spec(text):
        return parse_spec(text)
    if as_pgag:
        return extract(project_unbounded(parse(text, PGAg)))
    return extract(parse(text, PGA))


def load_service(name: str):
    if name.startswith("@"):
        return parse_service(_read(name[1:]), name=name)
    return builtin_service(name)


def load_bank(path: str) -> list:
    """Bank manifest: one ``focus service`` pair per line; a leading ``//``
    is allowed so a compiled program file can serve as its own manifest."""
    entries = []
    for line in _read(path).splitlines():
        line = line.strip()
        if line.startswith("//"):
            line = line[2:].strip()
        parts = line.split()
        if len(parts) != 2 or not (parts[1].startswith("br:") or parts[1].startswith("@")):
            continue
        entries.append((parts[0], load_service(parts[1])))
    return entries


# -- commands ------------------------------------------------------------------


def cmd_parse(args) -> int:
    dialect = parse_dialect(args.dialect)
    print(render(parse(_read(args.file), dialect)))
    return 0


def _render_seq(instrs) -> str:
    return "; ".join(render_instruction(u) for u in instrs)


def cmd_normalize(args) -> int:
    c = canonicalize(parse(_read(args.file), None))
    if c.period is None:
        print(_render_seq(c.prefix))
    elif not c.prefix:
        print(f"({_render_seq(c.period)})*")
    else:
        print(f"{_render_seq(c.prefix)} || ({_render_seq(c.period)})*")
    return 0


def cmd_equal(args) -> int:
    same = seq_equal(parse(_read(args.file1), None), parse(_read(args.file2), None))
    print("equal" if same else "different")
    return 0 if same else 1


def cmd_extract(args) -> int:
    print(format_spec(load_thread(args.file)))
    return 0


def cmd_use(args) -> int:
    focus = args.focus or []
    service = args.service or []
    if len(focus) != len(service):
        raise InputError("--focus and --service must be given in pairs")
    entries = load_bank(args.bank) if args.bank else []
    entries += [(f, load_service(s)) for f, s in zip(focus, service)]
    try:
        bank = RegisterBank(tuple(entries))
    except ServiceError as exc:
        raise InputError(str(exc)) from None
    print(format_spec(apply_bank(load_thread(args.file), bank)))
    return 0


def cmd_compile(args) -> int:
    result = compile(to_normal_form(load_thread(args.specfile)))
    print(render(result.program))
    manifest = result.bank.manifest()
    print("// bank")
    for line in manifest.splitlines():
        print(f"// {line}")
    if args.bank_out:
        with open(args.bank_out, "w", encoding="utf-8") as fh:
            fh.write(manifest + "\n" if manifest else "")
    return 0


def cmd_project(args) -> int:
    text = _read(args.file)
    if args.max_label is None:
        out = project_unbounded(parse(text, PGAg))
    else:
        out = project_bounded(parse(text, BoundedPGAg(args.max_label)), args.max_label)
    print(render(out))
    if args.metrics:
        m = metrics(out)
        print(f"// max_jump {m.max_jump}, instructions {m.instructions}", file=sys.stderr)
    return 0


def cmd_collapse(args) -> int:
    print(render(collapse_jump_chains(parse(_read(args.file), PGA))))
    return 0


def cmd_equiv(args) -> int:
    s1 = load_thread(args.file1, args.as_pgag)
    s2 = load_thread(args.file2, args.as_pgag)
    if bisimilar(s1, s2):
        print("bisimilar")
        return 0
    print(f"not bisimilar: projections differ at depth {distinguishing_depth(s1, s2)}")
    return 1


def cmd_simulate(args) -> int:
    replies = []
    for ch in args.replies.upper():
        if ch not in "TF":
            raise InputError(f"replies must be T or F, got {ch!r}")
        replies.append(ch == "T")
    print(simulate(load_thread(args.file), replies))
    return 0


def cmd_reproduce(args) -> int:
    seed = args.seed if args.seed is not None else int(os.environ.get("PGA_SEED", "0"))
    cases = args.cases if args.cases is not None else os.environ.get("PGA_CASES")
    cases = int(cases) if cases is not None else None
    results = acceptance.run_all(seed, cases)
    print(acceptance.format_table(results))
    return 0 if all(r.ok for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pgakit", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and echo a program")
    p.add_argument("file")
    p.add_argument("--dialect", default="pga", help="pga, pgag or pgag:k")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("normalize", help="print the canonical form")
    p.add_argument("file")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("equal", help="decide instruction-sequence equality")
    p.add_argument("file1")
    p.add_argument("file2")
    p.set_defaults(func=cmd_equal)

    p = sub.add_parser("extract", help="print the thread of a PGA program")
    p.add_argument("file")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("use", help="apply services to the thread of a program")
    p.add_argument("file")
    p.add_argument("--focus", action="append")
    p.add_argument("--service", action="append", help="br:false, br:true, br:blocked or @file")
    p.add_argument("--bank", help="manifest of focus/service pairs, applied first")
    p.set_defaults(func=cmd_use)

    p = sub.add_parser("compile-jumpfree", help="compile a thread spec to a jump-free program")
    p.add_argument("specfile")
    p.add_argument("--bank-out", help="also write the bank manifest here")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("project", help="project a PGAg program to PGA")
    p.add_argument("file")
    p.add_argument("--max-label", type=int, help="use the bounded projection for labels <= k")
    p.add_argument("--metrics", action="store_true", help="report jump metrics on stderr")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("collapse", help="collapse jump chains")
    p.add_argument("file")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("equiv", help="decide behavioural equivalence")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--as-pgag", action="store_true", help="programs are PGAg; project first")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("simulate", help="run a thread against a reply sequence")
    p.add_argument("file")
    p.add_argument("--replies", default="", help="e.g. TTFT")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reproduce", help="run the acceptance suite")
    p.add_argument("--seed", type=int)
    p.add_argument("--cases", type=int)
    p.set_defaults(func=cmd_reproduce)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (
        InputError,
        ParseError,
        DialectError,
        SpecFormatError,
        ServiceError,
        ValueError,
    ) as exc:
        print(f"pgakit {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
