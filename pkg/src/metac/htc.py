"""Here-and-there with difference constraints.

Three layers:

* literal semantics (:func:`denotes`, :func:`htc_satisfies`);
* :func:`enumerate_constraint_equilibrium_models_bounded`, which searches
  every valuation with time variables drawn from ``{0..nu}`` or undefined;
* :func:`enumerate_dc_models`, the practical enumerator: Boolean stable
  models of the step program, filtered by difference-constraint feasibility.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .core import (
    BOOLEAN_ATOMS,
    CONSTRAINT_ATOMS,
    Const,
    DiffLeq,
    EqConst,
    GroundProgram,
    GroundRule,
    StepAtom,
    TimeAtomBool,
    TimeVar,
    Valuation,
)
from .ht import DEFAULT_ATOM_CAP, CapExceeded, enumerate_equilibrium_models, has_smaller_here, stable_candidates


def _times_of(v) -> dict:
    if isinstance(v, Valuation):
        return {TimeVar(k): d for k, d in v.times.items()}
    return v


def denotes(v, c) -> bool:
    """Does valuation ``v`` belong to the denotation of constraint atom ``c``?

    Undefined operands make every constraint false.
    """
    times = _times_of(v)
    if isinstance(c, EqConst):
        value = times.get(c.var)
        return value is not None and value == c.const
    if isinstance(c, DiffLeq):
        x, y = times.get(c.x), times.get(c.y)
        return x is not None and y is not None and x - y <= c.bound
    raise TypeError(f"not a constraint atom: {c!r}")


def _holds(a, v: Valuation) -> bool:
    if isinstance(a, StepAtom):
        return v.get(a) is True
    if isinstance(a, CONSTRAINT_ATOMS):
        return denotes(v, a)
    if isinstance(a, Const):
        return a is Const.TOP
    raise TypeError(f"atom {a!r} has no HT_c reading")


def _literal(lit, here: Valuation, there: Valuation) -> bool:
    if not lit.negated:
        return _holds(lit.atom, here)
    return not _holds(lit.atom, here) and not _holds(lit.atom, there)


def htc_satisfies(h: Valuation, t: Valuation, r: GroundRule) -> bool:
    if not h <= t:
        raise ValueError("here valuation must be included in there valuation")
    for here in (h, t):
        if all(_literal(l, here, t) for l in r.body) and not any(_literal(l, here, t) for l in r.head):
            return False
    return True


def is_htc_model(h: Valuation, t: Valuation, prog) -> bool:
    return all(htc_satisfies(h, t, r) for r in prog)


def _check_dc_shape(prog: GroundProgram):
    for r in prog:
        for a in r.atoms():
            if isinstance(a, TimeAtomBool):
                raise ValueError(f"Boolean time atom {a} in a difference-constraint program")


def _const_eval(times: dict):
    def value(a) -> bool:
        if isinstance(a, Const):
            return a is Const.TOP
        return denotes(times, a)

    return value


def enumerate_constraint_equilibrium_models_bounded(
    prog: GroundProgram, nu: int, cap: int = DEFAULT_ATOM_CAP
) -> list[Valuation]:
    """Constraint equilibrium models with every time variable in ``{0..nu}``.

    Time parts range over all partial assignments (undefined included).
    For each, Boolean candidates come from the clause search and minimality
    is checked against every here-valuation: any subset of the defined time
    variables combined with any subset of the Boolean atoms.
    """
    _check_dc_shape(prog)
    rules = list(prog)
    atoms = [a for a in prog.boolean_atoms() if isinstance(a, StepAtom)]
    tvars = prog.time_vars()
    if len(atoms) + len(tvars) > cap:
        raise CapExceeded(
            f"program has {len(atoms) + len(tvars)} variables, above the cap of {cap} (raise it with --atom-cap)"
        )
    pure = [r for r in rules if not any(isinstance(a, BOOLEAN_ATOMS) for a in r.atoms())]
    found = []
    for values in itertools.product([None] + list(range(nu + 1)), repeat=len(tvars)):
        x = {v: d for v, d in zip(tvars, values) if d is not None}
        there = _const_eval(x)
        if not all(_classically(r, there) for r in pure):
            continue
        defined = sorted(x)
        for t_atoms in stable_candidates(rules, atoms, there):
            smaller = False
            for size in range(len(defined) + 1):
                for keep in itertools.combinations(defined, size):
                    hx = {v: x[v] for v in keep}
                    if has_smaller_here(rules, t_atoms, _const_eval(hx), there, strict=len(keep) == len(defined)):
                        smaller = True
                        break
                if smaller:
                    break
            if not smaller:
                found.append(Valuation.of(t_atoms, {v: d for v, d in x.items()}))
    found.sort(key=Valuation.sort_key)
    return found


def _classically(r: GroundRule, value) -> bool:
    body = all(value(l.atom) != l.negated for l in r.body)
    return not body or any(value(l.atom) != l.negated for l in r.head)


# ---------------------------------------------------------------------------
# difference constraint feasibility
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiffSystem:
    constraints: frozenset
    variables: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "constraints", frozenset(self.constraints))
        found = set(self.variables)
        for c in self.constraints:
            found.update(c.variables())
        object.__setattr__(self, "variables", tuple(sorted(found)))


def _as_system(sys) -> DiffSystem:
    return sys if isinstance(sys, DiffSystem) else DiffSystem(frozenset(sys))


def dc_feasible(sys) -> Optional[Valuation]:
    """Least natural-valued solution, or ``None`` if none exists.

    Works on the reversed constraint graph: with ``u = -x`` each
    ``x - y <= d`` reads ``u_y <= u_x + d``; a zero node anchors equalities
    and the natural-number lower bounds. Shortest distances from the zero
    node then give the pointwise least solution, and a negative cycle
    means infeasibility.
    """
    sys = _as_system(sys)
    zero = None
    nodes = [zero] + list(sys.variables)
    edges = []
    for c in sorted(sys.constraints, key=str):
        if isinstance(c, EqConst):
            edges.append((c.var, zero, c.const))
            edges.append((zero, c.var, -c.const))
        else:
            edges.append((c.x, c.y, c.bound))
    for v in sys.variables:
        edges.append((zero, v, 0))
    dist = {n: None for n in nodes}
    dist[zero] = 0
    for _ in range(len(nodes) - 1):
        changed = False
        for a, b, w in edges:
            if dist[a] is not None and (dist[b] is None or dist[a] + w < dist[b]):
                dist[b] = dist[a] + w
                changed = True
        if not changed:
            break
    for a, b, w in edges:
        if dist[a] is not None and (dist[b] is None or dist[a] + w < dist[b]):
            return None
    return Valuation.of((), {v: -dist[v] for v in sys.variables})


def dc_solutions(sys, nu: int) -> list[dict]:
    """Every assignment of the system's variables into ``{0..nu}`` that satisfies it."""
    sys = _as_system(sys)
    variables = list(sys.variables)
    position = {v: i for i, v in enumerate(variables)}
    due: list[list] = [[] for _ in variables]
    for c in sys.constraints:
        due[max(position[v] for v in c.variables())].append(c)
    out = []

    def search(i, times):
        if i == len(variables):
            out.append(dict(times))
            return
        v = variables[i]
        for d in range(nu + 1):
            times[v] = d
            if all(denotes(times, c) for c in due[i]):
                search(i + 1, times)
            del times[v]

    search(0, {})
    return out


# ---------------------------------------------------------------------------
# practical enumeration
# ---------------------------------------------------------------------------


class DcModel(NamedTuple):
    atoms: frozenset
    valuation: Valuation


@dataclass
class _Split:
    base: list
    guarded: list  # (boolean body literals, required constraint)
    boolean: list


def _split(prog: GroundProgram) -> _Split:
    split = _Split([], [], [])
    for r in prog:
        kinds = [isinstance(a, CONSTRAINT_ATOMS) for a in r.atoms()]
        if not any(kinds):
            split.boolean.append(r)
            continue
        head_c = [l for l in r.head if isinstance(l.atom, CONSTRAINT_ATOMS)]
        body_c = [l for l in r.body if isinstance(l.atom, CONSTRAINT_ATOMS)]
        if len(head_c) == 1 and not head_c[0].negated and len(r.head) == 1 and not body_c:
            if not r.body:
                split.base.append(head_c[0].atom)
            else:
                split.guarded.append((r.body, head_c[0].atom))
            continue
        if not r.head and len(body_c) == 1 and body_c[0].negated:
            rest = tuple(l for l in r.body if l is not body_c[0])
            split.guarded.append((rest, body_c[0].atom))
            continue
        raise ValueError(f"rule {r} is not in difference-constraint backend shape")
    return split


def _body_true(body, t_atoms: frozenset) -> bool:
    for lit in body:
        a = lit.atom
        value = a is Const.TOP if isinstance(a, Const) else a in t_atoms
        if value == lit.negated:
            return False
    return True


def enumerate_dc_models(
    prog: GroundProgram, nu_report: Optional[int] = None, cap: int = DEFAULT_ATOM_CAP
) -> list[DcModel]:
    """Boolean stable models of the step rules with a feasible timing.

    Constraint atoms occur only in facts and in integrity constraints, so they
    never affect Boolean minimality; each stable model is kept when the
    difference constraints activated by it are satisfiable. Without
    ``nu_report`` the least timing is attached; with it, one model is
    returned per timing whose values stay within ``nu_report``.
    """
    _check_dc_shape(prog)
    split = _split(prog)
    tvars = prog.time_vars()
    boolean = GroundProgram(tuple(split.boolean), None)
    out = []
    for t_atoms in enumerate_equilibrium_models(boolean, cap):
        active = set(split.base)
        for body, c in split.guarded:
            if _body_true(body, t_atoms):
                active.add(c)
        system = DiffSystem(frozenset(active), tuple(tvars))
        witness = dc_feasible(system)
        if witness is None:
            continue
        if nu_report is None:
            out.append(DcModel(t_atoms, Valuation.of(t_atoms, {v: d for v, d in witness.as_dict().items()})))
        else:
            for times in dc_solutions(system, nu_report):
                out.append(DcModel(t_atoms, Valuation.of(t_atoms, times)))
    out.sort(key=lambda m: m.valuation.sort_key())
    return out
