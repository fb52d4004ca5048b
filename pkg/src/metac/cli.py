"""Command-line front end: ``metac compile|solve|verify|stats|bench``.

Exit codes: 0 success, 1 unsatisfiable (solve), 2 usage error, 3 input error,
4 atom cap exceeded, 5 external solver error, 6 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional

from . import adapters
from .compiler import CompileContext
from .core import TimedTrace
from .emit import emit_asp, emit_dc, emit_json, stats
from .ht import DEFAULT_ATOM_CAP, CapExceeded, enumerate_equilibrium_models
from .htc import enumerate_dc_models
from .parser import ParseError, parse_file
from .timing_bool import compile_bool
from .timing_dc import compile_dc
from .verify import GeneratorParams, bench, crosscheck, random_corpus, theta, theta_c

EXIT_OK, EXIT_UNSAT, EXIT_USAGE, EXIT_INPUT, EXIT_CAP, EXIT_EXTERNAL, EXIT_MISMATCH = range(7)

log = logging.getLogger("metac")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


def _program(path: str):
    diagnostics = []
    try:
        p = parse_file(path, diagnostics)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except ParseError as exc:
        raise InputError("\n".join(f"{path}:{d}" for d in exc.diagnostics)) from None
    for d in diagnostics:
        print(f"{path}:{d}", file=sys.stderr)
    return p


def _context(args, need_nu: bool) -> CompileContext:
    if args.backend == "bool" and args.nu is None:
        raise UsageError("--backend bool needs --nu")
    nu = args.nu if need_nu else None
    try:
        return CompileContext(args.lam, nu, simplify=not getattr(args, "no_simplify", False))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _compile(args, p):
    if args.backend == "bool":
        return compile_bool(p, _context(args, True))
    if args.nu is not None and args.command in ("compile", "stats"):
        print("warning: --nu is ignored by the dc backend", file=sys.stderr)
    return compile_dc(p, _context(args, False), deadline=getattr(args, "deadline", None))


def _write(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def cmd_compile(args) -> int:
    p = _program(args.file)
    compiled = _compile(args, p)
    fmt = args.format or ("asp" if args.backend == "bool" else "dc")
    if fmt == "asp" and args.backend != "bool":
        raise UsageError("--format asp needs --backend bool")
    if fmt == "dc" and args.backend != "dc":
        raise UsageError("--format dc needs --backend dc")
    if fmt == "asp":
        text = emit_asp(compiled)
    elif fmt == "dc":
        text = emit_dc(compiled, head_shift=args.head_shift == "on")
    else:
        text = emit_json(compiled)
    _write(text, args.output)
    return EXIT_OK


def _external_traces(result, lam: int) -> list[TimedTrace]:
    traces = []
    for m in result.models:
        steps = [set() for _ in range(lam)]
        for a in m.atoms:
            steps[a.step].add(a.base)
        traces.append(TimedTrace.total(steps, m.tau))
    return traces


def _solve(args, p) -> list[TimedTrace]:
    compiled = _compile(args, p)
    lam = args.lam
    if args.engine == "external":
        kind = "asp" if args.backend == "bool" else "asp_dc"
        text = emit_asp(compiled) if args.backend == "bool" else emit_dc(compiled)
        result = adapters.run_external(kind, text, args.all, args.timeout, args.config_obj)
        print(f"% solver: {result.version}", file=sys.stderr)
        return _external_traces(result, lam)
    if args.backend == "bool":
        models = enumerate_equilibrium_models(compiled.program, args.atom_cap)
        return [theta((t, t), lam) for t in models]
    models = enumerate_dc_models(compiled.program, args.nu, args.atom_cap)
    return [theta_c((m.valuation, m.valuation), lam) for m in models]


def cmd_solve(args) -> int:
    p = _program(args.file)
    traces = _solve(args, p)
    shown = traces if args.all else traces[:1]
    for i, m in enumerate(shown, 1):
        print(f"Model {i}:")
        print(m)
    print(f"Models: {len(traces)}" if args.all else f"Models: {min(len(traces), 1)}+")
    return EXIT_OK if traces else EXIT_UNSAT


def cmd_verify(args) -> int:
    if args.nu is None:
        raise UsageError("verify needs --nu")
    if (args.file is None) == (args.random is None):
        raise UsageError("give either a program file or --random N")
    if args.random is not None:
        params = GeneratorParams()
        programs = random_corpus(args.random, args.seed, params)
    else:
        params = None
        programs = [_program(args.file)]
    reports = []
    for p in programs:
        for r in crosscheck(p, args.lam, args.nu, args.backend, args.atom_cap):
            if params is not None:
                r.seed, r.generator = args.seed, params.to_dict()
            reports.append(r)
    failed = [r for r in reports if not r.passed]
    if args.format == "json":
        _write(json.dumps([r.to_dict() for r in reports], indent=1) + "\n", args.output)
    else:
        shown = failed if args.random is not None else reports
        text = "".join(r.to_table() for r in shown)
        text += f"{len(reports) - len(failed)}/{len(reports)} checks passed\n"
        _write(text, args.output)
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_stats(args) -> int:
    p = _program(args.file)
    report = stats(_compile(args, p))
    if args.format == "json":
        _write(json.dumps(report.to_dict(), indent=1) + "\n", args.output)
    else:
        _write(report.to_table(), args.output)
    return EXIT_OK


def cmd_bench(args) -> int:
    root = Path(args.corpus)
    if not root.is_dir():
        raise InputError(f"{root}: not a directory")
    corpus = {path.stem: _program(str(path)) for path in sorted(root.glob("*.mlp"))}
    try:
        scales = [int(s) for s in args.scales.split(",") if s]
    except ValueError:
        raise UsageError(f"bad --scales {args.scales!r}") from None
    def solve(backend, text, lam):
        kind = "asp" if backend == "bool" else "asp_dc"
        return len(adapters.run_external(kind, text, True, args.timeout, args.config_obj).models)

    report = bench(
        corpus, scales, args.lam, args.nu, args.materialize_limit, args.repeats, solve if args.external else None
    )
    _write(report.to_json() if args.format == "json" else report.to_table(), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to a metac.toml file")
    common.add_argument("--atom-cap", type=int, default=None, help=f"internal solver cap (default {DEFAULT_ATOM_CAP})")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    compiled = argparse.ArgumentParser(add_help=False)
    compiled.add_argument("--backend", choices=["bool", "dc"], required=True)
    compiled.add_argument("--lambda", dest="lam", type=int, required=True, metavar="N")
    compiled.add_argument("--nu", type=int, metavar="N")
    compiled.add_argument("--deadline", type=int, metavar="D", help="dc only: bound on the total duration")

    parser = argparse.ArgumentParser(prog="metac", description="Compile metric logic programs to ASP.")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", parents=[common, compiled])
    c.add_argument("file")
    c.add_argument("--format", choices=["asp", "dc", "json"])
    c.add_argument("--no-simplify", action="store_true")
    c.add_argument("--head-shift", choices=["on", "off"], default="on")
    c.set_defaults(func=cmd_compile)

    s = sub.add_parser("solve", parents=[common, compiled])
    s.add_argument("file")
    s.add_argument("--engine", choices=["internal", "external"], default="internal")
    s.add_argument("--all", action="store_true", help="enumerate every model")
    s.add_argument("--timeout", type=int, default=600)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", parents=[common])
    v.add_argument("file", nargs="?")
    v.add_argument("--random", type=int, metavar="N")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--lambda", dest="lam", type=int, required=True, metavar="N")
    v.add_argument("--nu", type=int, metavar="N")
    v.add_argument("--backend", choices=["bool", "dc", "both"], default="both")
    v.add_argument("--format", choices=["table", "json"], default="table")
    v.set_defaults(func=cmd_verify)

    st = sub.add_parser("stats", parents=[common, compiled])
    st.add_argument("file")
    st.add_argument("--format", choices=["table", "json"], default="table")
    st.set_defaults(func=cmd_stats)

    b = sub.add_parser("bench", parents=[common])
    b.add_argument("corpus")
    b.add_argument("--scales", default="1,5,10")
    b.add_argument("--lambda", dest="lam", type=int, default=4, metavar="N")
    b.add_argument("--nu", type=int, default=110, metavar="N", help="Boolean horizon at scale 1")
    b.add_argument("--materialize-limit", type=int, default=1_000_000)
    b.add_argument("--repeats", type=int, default=3)
    b.add_argument("--external", action="store_true", help="also time the external solvers")
    b.add_argument("--timeout", type=int, default=600)
    b.add_argument("--format", choices=["table", "json"], default="table")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        args.config_obj = adapters.load_config(args.config)
        if args.atom_cap is None:
            args.atom_cap = args.config_obj.atom_cap or DEFAULT_ATOM_CAP
        return args.func(args)
    except UsageError as exc:
        print(f"metac: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except CapExceeded as exc:
        print(f"metac: {exc}", file=sys.stderr)
        return EXIT_CAP
    except adapters.AdapterError as exc:
        print(f"metac: external solver: {exc}", file=sys.stderr)
        raw = getattr(exc, "raw", "")
        if raw:
            print(raw, file=sys.stderr)
        return EXIT_EXTERNAL


if __name__ == "__main__":
    sys.exit(main())
