"""Rewrite the emitter golden files in tests/golden/.

Only run this after checking that an output change is intended; the tests
compare emitter output byte for byte against these files.
"""

from __future__ import annotations

from pathlib import Path

from metac.compiler import CompileContext
from metac.emit import emit_asp, emit_dc, emit_json
from metac.parser import parse_file
from metac.timing_bool import compile_bool
from metac.timing_dc import compile_dc

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "src" / "metac" / "corpus"
GOLDEN = ROOT / "tests" / "golden"

# (output name, corpus file, backend, lambda, nu, format, head_shift)
CASES = [
    ("tiny_l2_n3.lp", "tiny.mlp", "bool", 2, 3, "asp", True),
    ("tiny_l2.dc.lp", "tiny.mlp", "dc", 2, None, "dc", True),
    ("tiny_l2.noshift.dc.lp", "tiny.mlp", "dc", 2, None, "dc", False),
    ("tiny_l2_n3.json", "tiny.mlp", "bool", 2, 3, "json", True),
    ("tiny_l2.dc.json", "tiny.mlp", "dc", 2, None, "json", True),
    ("reduced_dentist_l3_n6.lp", "reduced_dentist.mlp", "bool", 3, 6, "asp", True),
    ("reduced_dentist_l3.dc.lp", "reduced_dentist.mlp", "dc", 3, None, "dc", True),
    ("dentist_l4.dc.lp", "dentist.mlp", "dc", 4, None, "dc", True),
    ("dentist_goal_l4.dc.lp", "dentist_goal.mlp", "dc", 4, None, "dc", True),
]


def render(corpus_file: str, backend: str, lam: int, nu, fmt: str, head_shift: bool) -> str:
    p = parse_file(CORPUS / corpus_file)
    ctx = CompileContext(lam, nu)
    compiled = compile_bool(p, ctx) if backend == "bool" else compile_dc(p, ctx)
    if fmt == "asp":
        return emit_asp(compiled)
    if fmt == "dc":
        return emit_dc(compiled, head_shift=head_shift)
    return emit_json(compiled)


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, *case in CASES:
        (GOLDEN / name).write_bytes(render(*case).encode("utf-8"))
        print(f"wrote {GOLDEN / name}")


if __name__ == "__main__":
    main()
