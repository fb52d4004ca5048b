"""Metric temporal here-and-there over finite timed traces.

This is the reference semantics every compiled pipeline is checked against.
Satisfaction follows the textbook clauses directly; the equilibrium
enumerator only adds step-wise pruning that never inspects a step before it
has been fixed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Union

from .core import (
    FINAL,
    INITIAL,
    UNBOUNDED,
    AtomName,
    Interval,
    MetricNext,
    MetricProgram,
    MetricRule,
    TimedTrace,
    TimingFunction,
    interval_contains,
    program_alphabet,
)


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Atom:
    name: AtomName


@dataclass(frozen=True)
class Initial:
    pass


@dataclass(frozen=True)
class And:
    left: "MetricFormula"
    right: "MetricFormula"


@dataclass(frozen=True)
class Or:
    left: "MetricFormula"
    right: "MetricFormula"


@dataclass(frozen=True)
class Impl:
    left: "MetricFormula"
    right: "MetricFormula"


@dataclass(frozen=True)
class Next:
    interval: Interval
    sub: "MetricFormula"


@dataclass(frozen=True)
class Always:
    interval: Interval
    sub: "MetricFormula"


@dataclass(frozen=True)
class Eventually:
    interval: Interval
    sub: "MetricFormula"


MetricFormula = Union[Bot, Atom, Initial, And, Or, Impl, Next, Always, Eventually]

BOT = Bot()


def Neg(phi: MetricFormula) -> MetricFormula:
    return Impl(phi, BOT)


TOP = Neg(BOT)
FINAL_FORMULA = Neg(Next(UNBOUNDED, TOP))


def conjunction(parts) -> MetricFormula:
    parts = list(parts)
    if not parts:
        return TOP
    phi = parts[0]
    for p in parts[1:]:
        phi = And(phi, p)
    return phi


def disjunction(parts) -> MetricFormula:
    parts = list(parts)
    if not parts:
        return BOT
    phi = parts[0]
    for p in parts[1:]:
        phi = Or(phi, p)
    return phi


def satisfies(m: TimedTrace, k: int, phi: MetricFormula) -> bool:
    lam = m.length
    if not 0 <= k < lam:
        raise ValueError(f"position {k} outside trace of length {lam}")
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Atom):
        return phi.name in m.h[k]
    if isinstance(phi, And):
        return satisfies(m, k, phi.left) and satisfies(m, k, phi.right)
    if isinstance(phi, Or):
        return satisfies(m, k, phi.left) or satisfies(m, k, phi.right)
    if isinstance(phi, Impl):
        for world in (m, m.totalized()):
            if satisfies(world, k, phi.left) and not satisfies(world, k, phi.right):
                return False
        return True
    if isinstance(phi, Initial):
        return k == 0
    tau = m.tau
    if isinstance(phi, Next):
        return (
            k + 1 < lam
            and satisfies(m, k + 1, phi.sub)
            and interval_contains(phi.interval, tau[k + 1] - tau[k])
        )
    if isinstance(phi, Eventually):
        return any(
            satisfies(m, i, phi.sub) for i in range(k, lam) if interval_contains(phi.interval, tau[i] - tau[k])
        )
    if isinstance(phi, Always):
        return all(
            satisfies(m, i, phi.sub) for i in range(k, lam) if interval_contains(phi.interval, tau[i] - tau[k])
        )
    raise TypeError(f"not a metric formula: {phi!r}")


def _body_formula(lit) -> MetricFormula:
    if lit.atom is INITIAL:
        phi = Initial()
    elif lit.atom is FINAL:
        phi = FINAL_FORMULA
    else:
        phi = Atom(lit.atom)
    return Neg(phi) if lit.negated else phi


def rule_formula(r: MetricRule) -> MetricFormula:
    """The implication ``body -> head`` of a rule (without the outer always)."""
    body = conjunction(_body_formula(l) for l in r.body)
    if isinstance(r.head, MetricNext):
        head = Next(r.head.interval, Atom(r.head.atom))
    else:
        head = disjunction(Neg(Atom(l.atom)) if l.negated else Atom(l.atom) for l in r.head.literals)
    return Impl(body, head)


def rule_holds(m: TimedTrace, r: MetricRule) -> bool:
    phi = rule_formula(r)
    return all(satisfies(m, k, phi) for k in range(m.length))


def is_model(m: TimedTrace, p: MetricProgram) -> bool:
    return all(rule_holds(m, r) for r in p.rules)


def lookahead(phi: MetricFormula) -> int:
    """How many steps past the evaluation point ``phi`` may inspect.

    Returns a large number for always/eventually, which look to the end.
    """
    if isinstance(phi, (Bot, Atom, Initial)):
        return 0
    if isinstance(phi, (And, Or, Impl)):
        return max(lookahead(phi.left), lookahead(phi.right))
    if isinstance(phi, Next):
        return 1 + lookahead(phi.sub)
    return 1 << 30


def timing_functions(lam: int, nu: int) -> Iterator[TimingFunction]:
    """All strict timings of length ``lam`` with last value at most ``nu``."""
    for rest in itertools.combinations(range(1, nu + 1), lam - 1):
        yield TimingFunction((0,) + rest)


def _subsets(atoms) -> list[frozenset]:
    atoms = sorted(atoms)
    return [frozenset(c) for r in range(len(atoms) + 1) for c in itertools.combinations(atoms, r)]


class _Scheduler:
    """Groups rule instances by the last step they read."""

    def __init__(self, p: MetricProgram, lam: int):
        self.lam = lam
        self.due: list[list] = [[] for _ in range(lam)]
        for r in p.rules:
            phi = rule_formula(r)
            reach = lookahead(phi)
            for k in range(lam):
                self.due[min(k + reach, lam - 1)].append((k, phi))

    def ok(self, m: TimedTrace, step: int) -> bool:
        return all(satisfies(m, k, phi) for k, phi in self.due[step])


def _pad(prefix, lam):
    return tuple(prefix) + (frozenset(),) * (lam - len(prefix))


def _has_smaller_model(sched: _Scheduler, t: tuple, tau: TimingFunction) -> bool:
    lam = len(t)
    choices = [_subsets(ts) for ts in t]

    def search(step, prefix, strict):
        if step == lam:
            return strict
        for h in choices[step]:
            here = prefix + [h]
            m = TimedTrace(_pad(here, lam), t, tau)
            if sched.ok(m, step) and search(step + 1, here, strict or h != t[step]):
                return True
        return False

    return search(0, [], False)


def enumerate_metric_equilibrium_models(p: MetricProgram, lam: int, nu: int) -> list[TimedTrace]:
    """All metric equilibrium models of length ``lam`` whose timing ends by ``nu``.

    Candidates are total traces over the program alphabet; a candidate is kept
    if it satisfies every rule at every step and no trace with the same timing
    and a strictly smaller here-component does.
    """
    if lam < 1:
        raise ValueError("trace length must be at least 1")
    sched = _Scheduler(p, lam)
    candidates = _subsets(program_alphabet(p))
    found = []
    for tau in timing_functions(lam, nu):

        def search(step, prefix):
            if step == lam:
                t = tuple(prefix)
                if not _has_smaller_model(sched, t, tau):
                    found.append(TimedTrace(t, t, tau))
                return
            for ts in candidates:
                here = prefix + [ts]
                padded = _pad(here, lam)
                if sched.ok(TimedTrace(padded, padded, tau), step):
                    search(step + 1, here)

        search(0, [])
    found.sort(key=lambda m: m.sort_key())
    return found
