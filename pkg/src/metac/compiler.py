"""Step unrolling of metric programs, shared by both timing backends."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import (
    FINAL,
    INITIAL,
    Const,
    GroundProgram,
    GroundRule,
    Literal,
    MetricNext,
    MetricProgram,
    MetricRule,
    StepAtom,
)


@dataclass(frozen=True)
class CompileContext:
    lam: int
    nu: Optional[int] = None
    simplify: bool = True

    def __post_init__(self):
        if self.lam < 1:
            raise ValueError("lambda must be at least 1")
        if self.nu is not None and self.nu < self.lam - 1:
            raise ValueError(f"nu={self.nu} admits no strict timing of length {self.lam}")

    @property
    def last(self) -> int:
        return self.lam - 1


def _const_literal(holds: bool, negated: bool) -> Literal:
    return Literal(Const.TOP if holds else Const.BOT, negated)


def literal_value(lit: Literal) -> Optional[bool]:
    """Truth value of a constant literal, ``None`` for anything else."""
    if not isinstance(lit.atom, Const):
        return None
    return (lit.atom is Const.TOP) != lit.negated


def translate_body(body, k: int, ctx: CompileContext) -> tuple[Literal, ...]:
    out = []
    for lit in body:
        if lit.atom is INITIAL:
            out.append(_const_literal(k == 0, lit.negated))
        elif lit.atom is FINAL:
            out.append(_const_literal(k == ctx.last, lit.negated))
        else:
            out.append(Literal(StepAtom(lit.atom, k), lit.negated))
    return tuple(out)


def simplify_rule(rule: GroundRule) -> Optional[GroundRule]:
    """Constant folding; ``None`` when the rule is trivially satisfied."""
    body = []
    for lit in rule.body:
        value = literal_value(lit)
        if value is False:
            return None
        if value is None:
            body.append(lit)
    head = []
    for lit in rule.head:
        value = literal_value(lit)
        if value is True:
            return None
        if value is None:
            head.append(lit)
    return GroundRule(tuple(head), tuple(body))


def translate_rule_at(r: MetricRule, k: int, ctx: CompileContext) -> Optional[GroundRule]:
    """Translate ``r`` at step ``k``; ``None`` if simplification dropped it.

    Next-heads become the atom at ``k+1``, or bottom on the last step. The
    interval is ignored here; the timing backends enforce it.
    """
    if not 0 <= k < ctx.lam:
        raise ValueError(f"step {k} outside 0..{ctx.lam - 1}")
    if isinstance(r.head, MetricNext):
        head = () if k == ctx.last else (Literal(StepAtom(r.head.atom, k + 1)),)
    else:
        head = tuple(Literal(StepAtom(l.atom, k), l.negated) for l in r.head.literals)
    rule = GroundRule(head, translate_body(r.body, k, ctx))
    return simplify_rule(rule) if ctx.simplify else rule


def compile_core(p: MetricProgram, ctx: CompileContext) -> GroundProgram:
    rules = []
    for r in p.rules:
        for k in range(ctx.lam):
            g = translate_rule_at(r, k, ctx)
            if g is not None:
                rules.append(g)
    return GroundProgram(tuple(rules), None, len(p.rules) * ctx.lam)
