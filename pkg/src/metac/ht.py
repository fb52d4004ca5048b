"""Equilibrium models of ground Boolean programs (here-and-there).

This is an oracle, not a performance solver: :func:`enumerate_equilibrium_models`
walks candidate total models with unit propagation and a support filter, then
checks minimality against every smaller here-world.
:func:`enumerate_equilibrium_models_naive` is the literal subset enumeration
kept as an independent cross-check.
"""

from __future__ import annotations

import itertools
from typing import Callable

from ._search import ClauseSearch
from .core import BOOLEAN_ATOMS, CONSTRAINT_ATOMS, Const, GroundProgram, GroundRule, atoms_key, ground_atom_key

DEFAULT_ATOM_CAP = 24


class CapExceeded(RuntimeError):
    pass


def _atom_holds(a, here: frozenset, const_value: Callable) -> bool:
    if isinstance(a, BOOLEAN_ATOMS):
        return a in here
    return const_value(a, here)


def _literal_holds(lit, here, there, const_value) -> bool:
    if not lit.negated:
        return _atom_holds(lit.atom, here, const_value)
    # not p == p -> bottom: p fails in both worlds
    return not _atom_holds(lit.atom, here, const_value) and not _atom_holds(lit.atom, there, const_value)


def _const_only(a, world) -> bool:
    if isinstance(a, Const):
        return a is Const.TOP
    raise ValueError(f"constraint atom {a} in a Boolean program")


def rule_holds_ht(h, t, r: GroundRule, const_value: Callable = _const_only) -> bool:
    """Two-world evaluation of ``body -> head``."""
    for here in (h, t):
        body = all(_literal_holds(l, here, t, const_value) for l in r.body)
        if body and not any(_literal_holds(l, here, t, const_value) for l in r.head):
            return False
    return True


def ht_satisfies(h, t, r: GroundRule) -> bool:
    h, t = frozenset(h), frozenset(t)
    if not h <= t:
        raise ValueError("here-world must be included in there-world")
    return rule_holds_ht(h, t, r)


def is_ht_model(h, t, prog) -> bool:
    h, t = frozenset(h), frozenset(t)
    return all(rule_holds_ht(h, t, r) for r in prog)


def _check_boolean(prog: GroundProgram):
    for r in prog:
        for a in r.atoms():
            if isinstance(a, CONSTRAINT_ATOMS):
                raise ValueError(f"program contains constraint atom {a}; use the HT_c checker")


def _check_cap(n: int, cap: int):
    if n > cap:
        raise CapExceeded(f"program has {n} Boolean atoms, above the cap of {cap} (raise it with --atom-cap)")


def enumerate_equilibrium_models_naive(prog: GroundProgram, cap: int = 16) -> list[frozenset]:
    """Literal definition: every total model with no strictly smaller here-world."""
    _check_boolean(prog)
    atoms = prog.boolean_atoms()
    _check_cap(len(atoms), cap)
    rules = list(prog)
    found = []
    for bits in itertools.product((False, True), repeat=len(atoms)):
        t = frozenset(a for a, b in zip(atoms, bits) if b)
        if not is_ht_model(t, t, rules):
            continue
        smaller = (
            frozenset(c)
            for size in range(len(t))
            for c in itertools.combinations(sorted(t, key=ground_atom_key), size)
        )
        if not any(is_ht_model(h, t, rules) for h in smaller):
            found.append(t)
    found.sort(key=atoms_key)
    return found


# ---------------------------------------------------------------------------
# clause-based enumeration shared with the HT_c checker
# ---------------------------------------------------------------------------


def _is_bool(a) -> bool:
    return isinstance(a, BOOLEAN_ATOMS)


def there_clauses(rules, index: dict, const_there: Callable):
    """Clauses and support alternatives for total models ``<T,T>``.

    ``const_there(atom)`` evaluates non-Boolean atoms in the there-world.
    Returns ``None`` if some rule is violated whatever ``T`` is.
    """
    clauses = []
    supports: dict[int, list] = {v: [] for v in index.values()}
    for r in rules:
        clause = []
        must_true, must_false = [], []
        dead = False
        for lit in r.body:
            a = lit.atom
            if _is_bool(a):
                v = index[a]
                if lit.negated:
                    clause.append(v + 1)
                    must_false.append(v)
                else:
                    clause.append(-(v + 1))
                    must_true.append(v)
            elif const_there(a) == lit.negated:
                dead = True
                break
        if dead:
            continue
        head_vars = []
        satisfied = False
        for lit in r.head:
            a = lit.atom
            if _is_bool(a):
                v = index[a]
                if lit.negated:
                    clause.append(-(v + 1))
                    must_true.append(v)
                else:
                    clause.append(v + 1)
                    head_vars.append(v)
            elif const_there(a) != lit.negated:
                satisfied = True
                break
        if satisfied:
            continue
        if not clause:
            return None
        clauses.append(clause)
        for v in head_vars:
            others = [w for w in head_vars if w != v]
            if v in must_false:
                continue
            supports[v].append((tuple(must_true), tuple(must_false + others)))
    return clauses, supports


def here_clauses(rules, t_atoms: frozenset, index: dict, const_here: Callable, const_there: Callable):
    """Clauses over the atoms of ``T`` that a here-world ``H`` must satisfy.

    ``<H,T>`` is a model iff ``<T,T>`` is and ``H`` satisfies these. ``None``
    means no ``H`` can.
    """
    clauses = []
    for r in rules:
        body_vars = []
        dead = False
        for lit in r.body:
            a = lit.atom
            if lit.negated:
                holds = (a not in t_atoms) if _is_bool(a) else not const_here(a) and not const_there(a)
            elif _is_bool(a):
                holds = a in t_atoms
                if holds:
                    body_vars.append(index[a])
            else:
                holds = const_here(a)
            if not holds:
                dead = True
                break
        if dead:
            continue
        head_vars = []
        satisfied = False
        for lit in r.head:
            a = lit.atom
            if lit.negated:
                satisfied = (a not in t_atoms) if _is_bool(a) else not const_here(a) and not const_there(a)
            elif _is_bool(a):
                if a in t_atoms:
                    head_vars.append(index[a])
            else:
                satisfied = const_here(a)
            if satisfied:
                break
        if satisfied:
            continue
        clause = [v + 1 for v in head_vars] + [-(v + 1) for v in body_vars]
        if not clause:
            return None
        clauses.append(clause)
    return clauses


def has_smaller_here(rules, t_atoms: frozenset, const_here, const_there, strict: bool) -> bool:
    """Is there ``H`` within ``T`` (strictly, if ``strict``) making ``<H,T>`` a model?"""
    ordered = sorted(t_atoms, key=ground_atom_key)
    index = {a: i for i, a in enumerate(ordered)}
    clauses = here_clauses(rules, t_atoms, index, const_here, const_there)
    if clauses is None:
        return False
    if strict:
        if not ordered:
            return False
        clauses.append([-(i + 1) for i in range(len(ordered))])
    return ClauseSearch(len(ordered), clauses).satisfiable()


def stable_candidates(rules, atoms: list, const_there: Callable):
    """Total models ``T`` passing the support filter, in search order."""
    index = {a: i for i, a in enumerate(atoms)}
    built = there_clauses(rules, index, const_there)
    if built is None:
        return
    clauses, supports = built
    order = sorted(range(len(atoms)), key=lambda i: _search_rank(atoms[i]))
    for bits in ClauseSearch(len(atoms), clauses, supports).models(order):
        yield frozenset(a for a, b in zip(atoms, bits) if b)


def _search_rank(a) -> tuple:
    # decide early steps first so rules get fixed quickly
    return (a.step,) + ground_atom_key(a)


def enumerate_equilibrium_models(prog: GroundProgram, cap: int = DEFAULT_ATOM_CAP) -> list[frozenset]:
    _check_boolean(prog)
    atoms = prog.boolean_atoms()
    _check_cap(len(atoms), cap)
    rules = list(prog)

    def const(a, world=None):
        return _const_only(a, world)

    found = []
    for t in stable_candidates(rules, atoms, const):
        if not has_smaller_here(rules, t, const, const, strict=True):
            found.append(t)
    found.sort(key=atoms_key)
    return found
