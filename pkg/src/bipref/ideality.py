"""Ideality ordering: violation sets with the defeat guard, and its set lifting."""

from __future__ import annotations

from typing import Iterable, Sequence

from .formula import Rule
from .norms import DefeatGraph
from .propkernel import Valuation


def violation_set(w: Valuation, r_oblig: Sequence[Rule], graph: DefeatGraph) -> frozenset[int]:
    """Obligations violated at ``w``.

    An obligation whose body holds and head fails is excused when the body of
    one of its defeaters also holds at ``w``.
    """
    violated = set()
    for i, r in enumerate(r_oblig):
        if not (w.satisfies(r.body) and not w.satisfies(r.head)):
            continue
        if any(w.satisfies(r_oblig[j].body) for j in graph.defeaters(i)):
            continue
        violated.add(i)
    return frozenset(violated)


def ideality_geq(w1: Valuation, w2: Valuation, r_oblig: Sequence[Rule], graph: DefeatGraph) -> bool:
    """``w1`` is at least as good as ``w2``: it violates a subset of what ``w2`` violates."""
    return violation_set(w1, r_oblig, graph) <= violation_set(w2, r_oblig, graph)


def lifted_geq(u_set: Iterable[Valuation], v_set: Iterable[Valuation],
               r_oblig: Sequence[Rule], graph: DefeatGraph) -> bool:
    """Every world of ``v_set`` is weakly dominated by some world of ``u_set``."""
    u_viol = {violation_set(u, r_oblig, graph) for u in u_set}
    return all(any(uv <= violation_set(v, r_oblig, graph) for uv in u_viol) for v in v_set)


def max_ideal(worlds: Iterable[Valuation], r_oblig: Sequence[Rule], graph: DefeatGraph) -> set[Valuation]:
    """Worlds whose violation set is not strictly above another world's."""
    viol = {w: violation_set(w, r_oblig, graph) for w in worlds}
    distinct = set(viol.values())
    return {w for w, vw in viol.items() if not any(v < vw for v in distinct)}
