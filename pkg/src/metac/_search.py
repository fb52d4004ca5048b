"""Backtracking model search over propositional clauses.

Used by the equilibrium enumerators to walk candidate interpretations with
unit propagation instead of materializing all subsets. Literals are
``v + 1`` (true) and ``-(v + 1)`` (false) for variable index ``v``.

``supports`` optionally maps a variable to the alternatives that can justify
it being true; each alternative is ``(must_be_true, must_be_false)``. A
variable set to true with every alternative blocked is a conflict.
"""

from __future__ import annotations

from typing import Iterator, Optional, Sequence


class ClauseSearch:
    def __init__(self, n: int, clauses: Sequence[Sequence[int]], supports: Optional[dict] = None):
        self.n = n
        self.clauses = [tuple(c) for c in clauses]
        self.occ: list[list[int]] = [[] for _ in range(n)]
        for ci, clause in enumerate(self.clauses):
            for lit in clause:
                self.occ[abs(lit) - 1].append(ci)
        self.supports = supports
        self.support_watch: list[set[int]] = [set() for _ in range(n)]
        if supports is not None:
            for v, alternatives in supports.items():
                for must_true, must_false in alternatives:
                    for w in must_true + must_false:
                        self.support_watch[w].add(v)

    def _supported(self, v: int, assign: list) -> bool:
        for must_true, must_false in self.supports.get(v, ()):
            if all(assign[w] is not False for w in must_true) and all(assign[w] is not True for w in must_false):
                return True
        return False

    def _propagate(self, assign: list, trail: list, queue: list) -> bool:
        clauses, occ = self.clauses, self.occ
        while queue:
            v = queue.pop()
            for ci in occ[v]:
                free = None
                count = 0
                satisfied = False
                for lit in clauses[ci]:
                    val = assign[abs(lit) - 1]
                    if val is None:
                        count += 1
                        free = lit
                    elif val == (lit > 0):
                        satisfied = True
                        break
                if satisfied:
                    continue
                if count == 0:
                    return False
                if count == 1:
                    w = abs(free) - 1
                    assign[w] = free > 0
                    trail.append(w)
                    queue.append(w)
            if self.supports is not None:
                if assign[v] is True and not self._supported(v, assign):
                    return False
                for a in self.support_watch[v]:
                    if assign[a] is True and not self._supported(a, assign):
                        return False
        return True

    def _initial(self) -> Optional[tuple[list, list]]:
        assign: list = [None] * self.n
        trail: list[int] = []
        if any(len(c) == 0 for c in self.clauses):
            return None
        if self.supports is not None:
            for v in range(self.n):
                if not self.supports.get(v):
                    assign[v] = False
                    trail.append(v)
        queue = list(trail)
        for clause in self.clauses:
            if len(clause) == 1:
                v = abs(clause[0]) - 1
                want = clause[0] > 0
                if assign[v] is None:
                    assign[v] = want
                    trail.append(v)
                    queue.append(v)
                elif assign[v] != want:
                    return None
        queue = list(range(self.n)) if self.supports is not None else queue + list(trail)
        if not self._propagate(assign, trail, queue):
            return None
        return assign, trail

    def models(self, order: Optional[Sequence[int]] = None) -> Iterator[list[bool]]:
        """Every total assignment satisfying the clauses (and support)."""
        start = self._initial()
        if start is None:
            return
        order = list(order) if order is not None else list(range(self.n))
        assign, trail = start
        yield from self._search(assign, trail, order, 0)

    def _search(self, assign, trail, order, pos) -> Iterator[list[bool]]:
        while pos < len(order) and assign[order[pos]] is not None:
            pos += 1
        if pos == len(order):
            yield list(assign)
            return
        v = order[pos]
        for value in (False, True):
            mark = len(trail)
            assign[v] = value
            trail.append(v)
            if self._propagate(assign, trail, [v]):
                yield from self._search(assign, trail, order, pos + 1)
            while len(trail) > mark:
                assign[trail.pop()] = None

    def satisfiable(self) -> bool:
        for _ in self.models():
            return True
        return False
