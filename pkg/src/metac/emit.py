"""Text serializations of ground programs and size statistics.

Formats:

* ``asp``: plain ASP for Boolean-timing programs; ``o(A,K)`` for step atoms,
  ``t(K,D)`` for time atoms.
* ``dc``: ASP with ``&sum`` difference constraints over ``t(K)``.
* ``json``: the ``metac-ground`` interchange document, schema version 1.

Output is byte-stable: LF newlines, no locale-dependent formatting.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Union

from .core import (
    AtomName,
    Const,
    DiffLeq,
    EqConst,
    GroundProgram,
    GroundRule,
    Literal,
    StepAtom,
    TimeAtomBool,
    TimeVar,
)
from .timing_bool import CompiledProgram

JSON_FORMAT = "metac-ground"
JSON_VERSION = 1


class EmitError(ValueError):
    pass


def _step_atom(a: StepAtom) -> str:
    return f"o({a.base},{a.step})"


def _time_var(v: TimeVar) -> str:
    return f"t({v.step})"


def _constraint(c) -> str:
    if isinstance(c, EqConst):
        return f"&sum{{{_time_var(c.var)}}} = {c.const}"
    return f"&sum{{{_time_var(c.x)} ; -{_time_var(c.y)}}} <= {c.bound}"


def _atom_text(a) -> str:
    if isinstance(a, StepAtom):
        return _step_atom(a)
    if isinstance(a, TimeAtomBool):
        return f"t({a.step},{a.value})"
    if isinstance(a, (EqConst, DiffLeq)):
        return _constraint(a)
    if isinstance(a, Const):
        return a.value
    raise EmitError(f"cannot print atom {a!r}")


def _lit_text(lit: Literal) -> str:
    text = _atom_text(lit.atom)
    return f"not {text}" if lit.negated else text


def _rule_text(head: tuple, body: tuple) -> str:
    head_text = "; ".join(map(_lit_text, head))
    body_text = ", ".join(map(_lit_text, body))
    if not body:
        return f"{head_text}." if head else ":- ."
    if not head:
        return f":- {body_text}."
    return f"{head_text} :- {body_text}."


def _kinds(prog: GroundProgram) -> set:
    return {type(a) for a in prog.atoms()}


def _unwrap(prog) -> GroundProgram:
    return prog.program if isinstance(prog, CompiledProgram) else prog


def emit_asp(prog) -> str:
    prog = _unwrap(prog)
    if _kinds(prog) & {EqConst, DiffLeq}:
        raise EmitError("ASP output needs a Boolean-timing program; this one has difference constraints")
    return "".join(_rule_text(r.head, r.body) + "\n" for r in prog)


def _is_guard(r: GroundRule) -> bool:
    return (
        not r.head
        and sum(isinstance(l.atom, (EqConst, DiffLeq)) for l in r.body) == 1
        and any(l.negated and isinstance(l.atom, (EqConst, DiffLeq)) for l in r.body)
    )


def emit_dc(prog, head_shift: bool = True) -> str:
    """Hybrid ASP text.

    With ``head_shift`` the interval guards ``:- body, not C.`` are printed
    as ``C :- body.``, which is equivalent once every time variable is
    defined (always the case in the presence of the timing facts).
    """
    prog = _unwrap(prog)
    if TimeAtomBool in _kinds(prog):
        raise EmitError("dc output needs a difference-constraint program; this one has Boolean time atoms")
    lines = []
    for r in prog:
        if head_shift and _is_guard(r):
            guard = next(l for l in r.body if isinstance(l.atom, (EqConst, DiffLeq)))
            rest = tuple(l for l in r.body if l is not guard)
            lines.append(_rule_text((Literal(guard.atom),), rest))
        else:
            lines.append(_rule_text(r.head, r.body))
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def _atom_json(a) -> dict:
    if isinstance(a, StepAtom):
        return {"kind": "step", "symbol": a.base.symbol, "args": list(a.base.args), "step": a.step}
    if isinstance(a, TimeAtomBool):
        return {"kind": "tbool", "step": a.step, "value": a.value}
    if isinstance(a, EqConst):
        return {"kind": "eq", "step": a.var.step, "const": a.const}
    if isinstance(a, DiffLeq):
        return {"kind": "diffleq", "x": a.x.step, "y": a.y.step, "bound": a.bound}
    if isinstance(a, Const):
        return {"kind": "const", "value": a is Const.TOP}
    raise EmitError(f"cannot serialize atom {a!r}")


def _atom_from_json(d: dict):
    kind = d["kind"]
    if kind == "step":
        return StepAtom(AtomName(d["symbol"], tuple(d["args"])), d["step"])
    if kind == "tbool":
        return TimeAtomBool(d["step"], d["value"])
    if kind == "eq":
        return EqConst(TimeVar(d["step"]), d["const"])
    if kind == "diffleq":
        return DiffLeq(TimeVar(d["x"]), TimeVar(d["y"]), d["bound"])
    if kind == "const":
        return Const.TOP if d["value"] else Const.BOT
    raise ValueError(f"unknown atom kind {kind!r}")


def _lit_json(lit: Literal) -> dict:
    return {"neg": lit.negated, "atom": _atom_json(lit.atom)}


def program_to_json(prog) -> dict:
    prog = _unwrap(prog)
    return {
        "format": JSON_FORMAT,
        "version": JSON_VERSION,
        "backend": prog.infer_backend(),
        "rules": [{"head": [_lit_json(l) for l in r.head], "body": [_lit_json(l) for l in r.body]} for r in prog],
    }


def emit_json(prog) -> str:
    return json.dumps(program_to_json(prog), indent=1, ensure_ascii=True) + "\n"


def read_json(text: str) -> GroundProgram:
    doc = json.loads(text)
    if doc.get("format") != JSON_FORMAT:
        raise ValueError(f"not a {JSON_FORMAT} document")
    if doc.get("version") != JSON_VERSION:
        raise ValueError(f"unsupported version {doc.get('version')!r}")
    rules = []
    for r in doc["rules"]:
        head = tuple(Literal(_atom_from_json(l["atom"]), l["neg"]) for l in r["head"])
        body = tuple(Literal(_atom_from_json(l["atom"]), l["neg"]) for l in r["body"])
        rules.append(GroundRule(head, body))
    return GroundProgram(tuple(rules), doc["backend"])


# ---------------------------------------------------------------------------
# statistics
# ---------------------------------------------------------------------------

_KIND_NAMES = {StepAtom: "step", TimeAtomBool: "tbool", EqConst: "eq", DiffLeq: "diffleq"}


@dataclass
class SizeReport:
    backend: str
    rules: int
    emitted_rules: int
    atoms: dict = field(default_factory=dict)
    constraint_atoms: int = 0
    parts: Optional[dict] = None

    def to_dict(self) -> dict:
        return {
            "backend": self.backend,
            "rules": self.rules,
            "emitted_rules": self.emitted_rules,
            "atoms": dict(self.atoms),
            "constraint_atoms": self.constraint_atoms,
            "parts": self.parts,
        }

    def to_table(self) -> str:
        lines = [f"backend          {self.backend}", f"rules            {self.rules}"]
        if self.parts:
            for name, count in self.parts.items():
                lines.append(f"  {name:<14} {count}")
        lines.append(f"emitted rules    {self.emitted_rules}")
        for kind, count in sorted(self.atoms.items()):
            lines.append(f"atoms[{kind}]{'':<{max(0, 10 - len(kind))}} {count}")
        lines.append(f"constraint atoms {self.constraint_atoms}")
        return "\n".join(lines) + "\n"


def stats(prog: Union[GroundProgram, CompiledProgram]) -> SizeReport:
    parts = prog.part_counts() if isinstance(prog, CompiledProgram) else None
    whole = _unwrap(prog)
    counts = Counter(_KIND_NAMES[type(a)] for a in whole.atoms())
    return SizeReport(
        backend=whole.infer_backend(),
        rules=whole.unsimplified_count,
        emitted_rules=len(whole),
        atoms=dict(counts),
        constraint_atoms=counts.get("eq", 0) + counts.get("diffleq", 0),
        parts=parts,
    )
