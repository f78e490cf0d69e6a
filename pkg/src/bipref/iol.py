"""Constrained input/output logic with the reusable-throughput operation out4+.

Everything here runs on classical consequence alone (``propkernel``); the
preference-based engine is only consulted by :func:`faithfulness_check`,
which compares the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .formula import Formula, Implies, Not, Query, atoms_of, conjoin
from .norms import Theory
from .propkernel import pl_entails, truth_table, world_label


@dataclass(frozen=True)
class IOPair:
    body: Formula
    head: Formula

    def material(self) -> Formula:
        return Implies(self.body, self.head)

    def __str__(self) -> str:
        return f"({self.body}, {self.head})"


class InconsistentInput(ValueError):
    pass


def out4plus_contains(norms: Iterable[IOPair], a: Formula, x: Formula) -> bool:
    """``x`` is in out4+(norms, a): ``{a} | m(norms) |= x``."""
    return pl_entails([a, *(p.material() for p in norms)], x)


@dataclass(frozen=True)
class MaxFamily:
    """Maximal norm subsets (index sets) whose output is consistent with the constraints."""

    norms: tuple[IOPair, ...]
    members: tuple[frozenset[int], ...]

    def pairs(self, member: frozenset[int]) -> list[IOPair]:
        return [self.norms[i] for i in sorted(member)]

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


def _maxfamily(norms: Sequence[IOPair], a: Formula, constraints: Sequence[Formula]) -> MaxFamily:
    norms = tuple(norms)
    vocab = atoms_of([a, *constraints, *(p.body for p in norms), *(p.head for p in norms)])
    base = truth_table(a, vocab)
    for c in constraints:
        base = base & truth_table(c, vocab)
    materials = [truth_table(p.material(), vocab) for p in norms]

    @lru_cache(maxsize=None)
    def consistent(subset: frozenset[int]) -> bool:
        # subsets of a consistent set are consistent
        table = base.copy()
        for i in subset:
            table &= materials[i]
        return bool(table.any())

    found: list[frozenset[int]] = []
    for size in range(len(norms), -1, -1):
        for combo in combinations(range(len(norms)), size):
            h = frozenset(combo)
            if any(h <= g for g in found):
                continue
            if consistent(h):
                found.append(h)
    found.sort(key=lambda h: sum(1 << i for i in h))
    return MaxFamily(norms, tuple(found))


def maxfamily(norms: Sequence[IOPair], a: Formula) -> MaxFamily:
    """Maximal subsets ``H`` with ``{a} | m(H)`` consistent (constraints fixed to ``{a}``).

    An inconsistent input yields the empty family.
    """
    return _maxfamily(norms, a, [a])


def fullmeet_contains(norms: Sequence[IOPair], a: Formula, x: Formula) -> bool:
    """``x`` is output by every member of the maxfamily."""
    if not _satisfiable(a):
        raise InconsistentInput(f"input {a} is inconsistent")
    family = maxfamily(norms, a)
    return all(out4plus_contains(family.pairs(h), a, x) for h in family)


def _satisfiable(a: Formula) -> bool:
    return not pl_entails([], Not(a))


def rewrite_defeaters(theory: Theory) -> tuple[IOPair, ...]:
    """Turn each obligation into a pair whose body also denies the bodies of its defeaters."""
    graph = theory.defeat
    pairs = []
    for i, r in enumerate(theory.r_oblig):
        defeaters = sorted(graph.defeaters(i))
        body = r.body
        if defeaters:
            body = conjoin([r.body, *(Not(theory.r_oblig[j].body) for j in defeaters)])
        pairs.append(IOPair(body, r.head))
    return tuple(pairs)


@dataclass
class FaithfulnessReport:
    input: Formula
    head: Formula
    norms: tuple[IOPair, ...]
    family: MaxFamily
    iol_verdict: bool                 # head in the full meet output
    hansson_verdict: bool             # (empty facts, R) entails OH(head|input)
    exists_forall_verdict: bool       # ({<>input}, R) entails O(head|input)
    bridge_mismatches: list[str] = field(default_factory=list)

    @property
    def hansson_agrees(self) -> bool:
        return self.iol_verdict == self.hansson_verdict

    @property
    def forward_holds(self) -> bool:
        """Full-meet membership implies the exists-forall obligation."""
        return not self.iol_verdict or self.exists_forall_verdict

    @property
    def converse_counterexample(self) -> bool:
        """The obligation holds but the head is not in the full meet (informative only)."""
        return self.exists_forall_verdict and not self.iol_verdict

    @property
    def ok(self) -> bool:
        return self.hansson_agrees and self.forward_holds and not self.bridge_mismatches


def faithfulness_check(theory: Theory, a: Formula, x: Formula) -> FaithfulnessReport:
    """Compare the I/O engine with the preference engine on one (input, head) pair.

    Only the obligations of ``theory`` are used: the comparison is made for
    the theory with no facts and no defaults (and with ``<>a`` as sole fact
    for the exists-forall side). Defaults are rejected rather than dropped.
    """
    from .formula import Diamond
    from .model import build_model, entails

    if theory.r_norm:
        raise ValueError("faithfulness check requires a theory without defaults")
    if not _satisfiable(a):
        raise InconsistentInput(f"input {a} is inconsistent")

    bare = Theory((), (), theory.r_oblig, tuple(sorted(set(theory.vocab) | set(atoms_of(a, x)))))
    norms = rewrite_defeaters(bare)
    family = maxfamily(norms, a)
    iol_verdict = all(out4plus_contains(family.pairs(h), a, x) for h in family)

    hansson = entails(bare, Query.hansson(a, x)).entailed
    exists_forall = entails(bare.replace(gamma=(Diamond(a),)), Query.obligation(a, x)).entailed

    # bridge: the best a-worlds are exactly the a-worlds satisfying some member's materialization
    model = build_model(bare)
    vocab = model.vocab
    best = model.max_ideal(model.extent(a))
    covered = np.zeros(model.size, dtype=bool)
    for h in family:
        table = truth_table(a, vocab)
        for p in family.pairs(h):
            table = table & truth_table(p.material(), vocab)
        covered |= table
    mismatches = [world_label(vocab, int(w)) for w in np.flatnonzero(best != covered)]

    return FaithfulnessReport(a, x, norms, family, iol_verdict, hansson, exists_forall, mismatches)
