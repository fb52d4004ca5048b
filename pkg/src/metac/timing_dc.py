"""Timing via integer variables ``t_k`` and difference constraints."""

from __future__ import annotations

from typing import Optional

from .compiler import CompileContext, compile_core, simplify_rule, translate_body
from .core import DiffLeq, EqConst, GroundProgram, GroundRule, Literal, MetricProgram, TimeVar
from .timing_bool import CompiledProgram


def compile_delta_dc(lam: int) -> GroundProgram:
    if lam < 1:
        raise ValueError("lambda must be at least 1")
    rules = [GroundRule((Literal(EqConst(TimeVar(0), 0)),))]
    for k in range(lam - 1):
        rules.append(GroundRule((Literal(DiffLeq(TimeVar(k), TimeVar(k + 1), -1)),)))
    return GroundProgram(tuple(rules), "dc")


def compile_psi_dc(p: MetricProgram, lam: int, simplify: bool = False) -> GroundProgram:
    """Per next-rule and step: a lower-bound constraint, plus an upper one for finite intervals."""
    if lam < 1:
        raise ValueError("lambda must be at least 1")
    ctx = CompileContext(lam, None, simplify)
    rules = []
    total = 0
    for _, r in p.next_rules():
        lower, upper = r.head.interval.lower, r.head.interval.upper
        for k in range(lam - 1):
            body = translate_body(r.body, k, ctx)
            tk, tk1 = TimeVar(k), TimeVar(k + 1)
            candidates = [GroundRule((), body + (Literal(DiffLeq(tk, tk1, -lower), True),))]
            if upper is not None:
                candidates.append(GroundRule((), body + (Literal(DiffLeq(tk1, tk, upper - 1), True),)))
            for rule in candidates:
                total += 1
                if simplify:
                    rule = simplify_rule(rule)
                if rule is not None:
                    rules.append(rule)
    return GroundProgram(tuple(rules), "dc", total)


def compile_deadline_dc(lam: int, deadline: int) -> GroundProgram:
    """``t_{lam-1} - t_0 <= deadline``; the integer counterpart of capping nu."""
    if lam < 1:
        raise ValueError("lambda must be at least 1")
    return GroundProgram((GroundRule((Literal(DiffLeq(TimeVar(lam - 1), TimeVar(0), deadline)),)),), "dc")


def compile_dc(p: MetricProgram, ctx: CompileContext, deadline: Optional[int] = None) -> CompiledProgram:
    delta = compile_delta_dc(ctx.lam)
    if deadline is not None:
        delta = delta + compile_deadline_dc(ctx.lam, deadline)
    return CompiledProgram(compile_core(p, ctx), delta, compile_psi_dc(p, ctx.lam, ctx.simplify), "dc")
