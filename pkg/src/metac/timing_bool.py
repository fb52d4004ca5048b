"""Timing via Boolean atoms ``t_{k,d}`` bounded by a horizon ``nu``."""

from __future__ import annotations

from dataclasses import dataclass

from .compiler import CompileContext, compile_core, simplify_rule, translate_body
from .core import GroundProgram, GroundRule, Literal, MetricProgram, TimeAtomBool


def _check(lam: int, nu: int):
    if lam < 1:
        raise ValueError("lambda must be at least 1")
    if nu < lam - 1:
        raise ValueError(f"nu={nu} admits no strict timing of length {lam}")


def compile_delta_bool(lam: int, nu: int) -> GroundProgram:
    """``t_{0,0}`` plus one successor-choice rule per step and time point.

    For ``d == nu`` the head is empty, which keeps timings within the horizon.
    """
    _check(lam, nu)
    rules = [GroundRule((Literal(TimeAtomBool(0, 0)),))]
    for k in range(lam - 1):
        for d in range(nu + 1):
            head = tuple(Literal(TimeAtomBool(k + 1, d2)) for d2 in range(d + 1, nu + 1))
            rules.append(GroundRule(head, (Literal(TimeAtomBool(k, d)),)))
    return GroundProgram(tuple(rules), "bool")


def compile_psi_bool(p: MetricProgram, lam: int, nu: int, simplify: bool = False) -> GroundProgram:
    """Integrity constraints rejecting time gaps outside each next-interval.

    ``unsimplified_count`` always equals :func:`count_psi_bool`.
    """
    _check(lam, nu)
    ctx = CompileContext(lam, nu, simplify)
    rules = []
    total = 0
    for _, r in p.next_rules():
        lower, upper = r.head.interval.lower, r.head.interval.upper
        for k in range(lam - 1):
            body = translate_body(r.body, k, ctx)
            for d in range(nu + 1):
                for d2 in range(d + 1, nu + 1):
                    gap = d2 - d
                    hits = int(gap < lower) + int(upper is not None and gap >= upper)
                    if not hits:
                        continue
                    rule = GroundRule((), body + (Literal(TimeAtomBool(k, d)), Literal(TimeAtomBool(k + 1, d2))))
                    if simplify:
                        rule = simplify_rule(rule)
                    total += hits
                    if rule is not None:
                        rules.extend([rule] * hits)
    return GroundProgram(tuple(rules), "bool", total)


def _pairs_with_gap_between(nu: int, lo: int, hi: int) -> int:
    """Number of pairs ``0 <= d < d' <= nu`` with ``lo <= d'-d <= hi``."""
    lo, hi = max(lo, 1), min(hi, nu)
    if lo > hi:
        return 0
    # pairs with gap g: nu + 1 - g
    n = hi - lo + 1
    return n * (nu + 1) - (lo + hi) * n // 2


def count_psi_bool(p: MetricProgram, lam: int, nu: int) -> int:
    per_step = 0
    for _, r in p.next_rules():
        lower, upper = r.head.interval.lower, r.head.interval.upper
        per_step += _pairs_with_gap_between(nu, 1, lower - 1)
        if upper is not None:
            per_step += _pairs_with_gap_between(nu, upper, nu)
    return per_step * max(lam - 1, 0)


@dataclass(frozen=True)
class CompiledProgram:
    """The three parts of a compiled program, kept apart for statistics."""

    core: GroundProgram
    delta: GroundProgram
    psi: GroundProgram
    backend: str

    @property
    def program(self) -> GroundProgram:
        whole = self.core + self.delta + self.psi
        return GroundProgram(whole.rules, self.backend, whole.unsimplified_count)

    def part_counts(self) -> dict[str, int]:
        return {
            "core": self.core.unsimplified_count,
            "delta": self.delta.unsimplified_count,
            "psi": self.psi.unsimplified_count,
        }


def compile_bool(p: MetricProgram, ctx: CompileContext) -> CompiledProgram:
    if ctx.nu is None:
        raise ValueError("the Boolean backend needs an upper bound nu")
    return CompiledProgram(
        compile_core(p, ctx),
        compile_delta_bool(ctx.lam, ctx.nu),
        compile_psi_bool(p, ctx.lam, ctx.nu, ctx.simplify),
        "bool",
    )
