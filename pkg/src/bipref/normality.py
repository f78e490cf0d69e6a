"""Normality ordering on worlds: LM-sequence, ranked partition and LEX.

Rules are referred to by their index in the list of defaults. A world's
normality tuple counts, level by level from the most specific, how many of
the defaults it falsifies; smaller tuples (lexicographically) are more normal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .formula import Formula, Not, Rule
from .norms import materialization
from .propkernel import Valuation, pl_entails

NormalityTuple = tuple[int, ...]


def exceptional_for(a: Formula, rules: Iterable[Rule]) -> bool:
    """``a`` is exceptional for a set of defaults when their materialization refutes it."""
    return pl_entails(materialization(rules), Not(a))


@dataclass(frozen=True)
class LMSequence:
    """``levels[i]`` is E_i as a set of rule indices; ``levels[-1]`` is E_inf."""

    rules: tuple[Rule, ...]
    levels: tuple[frozenset[int], ...]

    @property
    def order(self) -> int:
        return len(self.levels) - 1

    @property
    def limit(self) -> frozenset[int]:
        return self.levels[-1]

    def rules_at(self, i: int) -> list[Rule]:
        return [self.rules[k] for k in sorted(self.levels[i])]


def lm_sequence(r_norm: Sequence[Rule]) -> LMSequence:
    """Iterate the exceptionality operator from the full set to its fixpoint.

    E_0 is every default, and E_{i+1} holds the defaults whose body is
    exceptional for E_i. Iteration stops at the first ``m`` with
    E_{m+1} = E_m. This terminates whether or not the defaults are coherent,
    since the sequence never increases.
    """
    rules = tuple(r_norm)
    current = frozenset(range(len(rules)))
    levels = [current]
    while True:
        material = materialization(rules[k] for k in sorted(current))
        nxt = frozenset(k for k, r in enumerate(rules) if pl_entails(material, Not(r.body)))
        if nxt == current:
            break
        levels.append(nxt)
        current = nxt
    return LMSequence(rules, tuple(levels))


@dataclass(frozen=True)
class RankedPartition:
    """``levels[i]`` is Delta_i: least specific defaults first, Delta_m = E_inf last."""

    levels: tuple[frozenset[int], ...]

    @property
    def order(self) -> int:
        return len(self.levels) - 1

    @property
    def width(self) -> int:
        """Tuple length: m, plus one when Delta_m is nonempty (incoherent defaults)."""
        return self.order + (1 if self.levels[-1] else 0)

    def level_of(self, k: int) -> int:
        for i, level in enumerate(self.levels):
            if k in level:
                return i
        raise KeyError(k)


def ranked_partition(seq: LMSequence) -> RankedPartition:
    lv = seq.levels
    return RankedPartition(tuple(lv[i] - lv[i + 1] for i in range(len(lv) - 1)) + (lv[-1],))


def rank(a: Formula, seq: LMSequence) -> int | None:
    """Smallest ``i`` such that ``a`` is not exceptional for E_i; None if there is none."""
    for i in range(len(seq.levels)):
        if not exceptional_for(a, seq.rules_at(i)):
            return i
    return None


def tuple_of(subset: Iterable[int], partition: RankedPartition) -> NormalityTuple:
    """``(n_1, ..., n_m)`` with ``n_i = |Delta_{m-i} & subset|``.

    The Delta_m count leads the tuple only when Delta_m is nonempty, which
    coherent defaults rule out.
    """
    subset = set(subset)
    m = partition.order
    counts = [len(partition.levels[m - i] & subset) for i in range(1, m + 1)]
    if partition.levels[-1]:
        counts.insert(0, len(partition.levels[-1] & subset))
    return tuple(counts)


def lex_geq_tuples(t1: NormalityTuple, t2: NormalityTuple) -> bool:
    """Equal, or smaller at the first coordinate where they differ."""
    for x, y in zip(t1, t2):
        if x != y:
            return x < y
    return True


def lex_geq(x: Iterable[int], y: Iterable[int], partition: RankedPartition) -> bool:
    """``x`` is at least as normal a falsification set as ``y``."""
    return lex_geq_tuples(tuple_of(x, partition), tuple_of(y, partition))


def falsified(w: Valuation, rule: Rule) -> bool:
    return w.satisfies(rule.body) and not w.satisfies(rule.head)


def falsification_set(w: Valuation, r_norm: Sequence[Rule]) -> frozenset[int]:
    return frozenset(k for k, r in enumerate(r_norm) if falsified(w, r))


def _partition(r_norm, partition):
    return partition if partition is not None else ranked_partition(lm_sequence(r_norm))


def normality_geq(w1: Valuation, w2: Valuation, r_norm: Sequence[Rule],
                  partition: RankedPartition | None = None) -> bool:
    """``w1`` is at least as normal as ``w2``."""
    partition = _partition(r_norm, partition)
    return lex_geq(falsification_set(w1, r_norm), falsification_set(w2, r_norm), partition)


def max_normal(worlds: Iterable[Valuation], r_norm: Sequence[Rule],
               partition: RankedPartition | None = None) -> set[Valuation]:
    worlds = set(worlds)
    partition = _partition(r_norm, partition)
    tup = {w: tuple_of(falsification_set(w, r_norm), partition) for w in worlds}
    return {w for w in worlds
            if all(not lex_geq_tuples(tup[v], tup[w]) or lex_geq_tuples(tup[w], tup[v])
                   for v in worlds)}


def fdis_count(w: Valuation, rules: Sequence[Rule]) -> int:
    """Flat count of rules whose body holds and head fails at ``w`` (no levels, no defeat)."""
    return sum(1 for r in rules if falsified(w, r))
