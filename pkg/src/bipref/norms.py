"""Theories, the overriding (defeat) relation and coherence of defaults."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .formula import (
    NORMALITY, OBLIGATION, Formula, Implies, Not, Rule, atoms_of, conjoin, is_flat,
    NestingError, rename_atoms,
)
from .propkernel import MAX_ATOMS, VocabularyOverflow, pl_entails, pl_satisfiable, s5_consistent


class IncoherentDefaultsError(ValueError):
    """The normality conditionals are incoherent; ``witness`` is an offending subset."""

    def __init__(self, witness: Sequence[Rule]):
        self.witness = tuple(witness)
        super().__init__("incoherent defaults: " + ", ".join(str(r) for r in self.witness))


class DuplicateRuleWarning(UserWarning):
    pass


def materialization(rules: Iterable[Rule]) -> list[Formula]:
    """``{body -> head}`` for each rule, duplicates removed, order kept."""
    out: dict[Formula, None] = {}
    for r in rules:
        out.setdefault(Implies(r.body, r.head), None)
    return list(out)


def defeats(r_j: Rule, r_i: Rule, gamma: Sequence[Formula] = ()) -> bool:
    """Whether obligation ``r_j`` overrides obligation ``r_i`` given hard information ``gamma``.

    (i) the heads are jointly S5-inconsistent with ``gamma``; (ii) the body of
    ``r_j`` is strictly more specific; (iii) ``r_j`` is not a contrary-to-duty
    of ``r_i``, i.e. ``h(r_i) & b(r_j)`` is satisfiable.
    """
    if r_i.kind != OBLIGATION or r_j.kind != OBLIGATION:
        raise ValueError("defeat is defined between obligations only")
    more_specific = pl_entails([r_j.body], r_i.body) and not pl_entails([r_i.body], r_j.body)
    if not more_specific:
        return False
    if not pl_satisfiable([r_i.head, r_j.body]):
        return False
    return not s5_consistent([r_i.head, r_j.head, *gamma])


@dataclass(frozen=True)
class DefeatGraph:
    """Edges ``(j, i)`` meaning obligation ``j`` overrides obligation ``i``."""

    size: int
    edges: frozenset[tuple[int, int]]

    def defeaters(self, i: int) -> frozenset[int]:
        return frozenset(j for j, k in self.edges if k == i)

    def defeated(self, j: int) -> frozenset[int]:
        return frozenset(i for k, i in self.edges if k == j)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges, key=lambda e: (e[1], e[0]))


def defeat_graph(theory: "Theory") -> DefeatGraph:
    rules = theory.r_oblig
    edges = frozenset(
        (j, i)
        for i, r_i in enumerate(rules)
        for j, r_j in enumerate(rules)
        if i != j and defeats(r_j, r_i, theory.gamma)
    )
    return DefeatGraph(len(rules), edges)


def incoherent_subset(r_norm: Sequence[Rule]) -> tuple[Rule, ...] | None:
    """A smallest nonempty ``X`` with ``m(X) |= AND(~b(r) for r in X)``, or None."""
    rules = list(r_norm)
    for size in range(1, len(rules) + 1):
        for subset in combinations(rules, size):
            if pl_entails(materialization(subset), conjoin(Not(r.body) for r in subset)):
                return subset
    return None


def coherent(r_norm: Sequence[Rule]) -> bool:
    """No nonempty subset of the defaults refutes all of its own bodies."""
    return incoherent_subset(r_norm) is None


def _dedupe(rules: Iterable[Rule], what: str) -> tuple[Rule, ...]:
    out: dict[Rule, None] = {}
    for r in rules:
        if r in out:
            warnings.warn(f"duplicate {what} {r} ignored", DuplicateRuleWarning, stacklevel=3)
        out.setdefault(r, None)
    return tuple(out)


@dataclass(frozen=True)
class Theory:
    """Hard information ``gamma`` plus defaults ``r_norm`` and obligations ``r_oblig``.

    ``vocab`` is sorted and covers every atom of the theory. Use
    :meth:`build` to construct one from loose parts.
    """

    gamma: tuple[Formula, ...] = ()
    r_norm: tuple[Rule, ...] = ()
    r_oblig: tuple[Rule, ...] = ()
    vocab: tuple[str, ...] = ()
    allow_incoherent: bool = field(default=False, compare=False)

    def __post_init__(self):
        for phi in self.gamma:
            if not is_flat(phi):
                raise NestingError(f"nested modal operator in {phi}")
        if any(r.kind != NORMALITY for r in self.r_norm):
            raise ValueError("r_norm holds normality conditionals only")
        if any(r.kind != OBLIGATION for r in self.r_oblig):
            raise ValueError("r_oblig holds obligations only")
        needed = set(atoms_of(list(self.gamma), list(self.r_norm), list(self.r_oblig)))
        if not needed <= set(self.vocab) or list(self.vocab) != sorted(set(self.vocab)):
            object.__setattr__(self, "vocab", tuple(sorted(needed | set(self.vocab))))
        if len(self.vocab) > MAX_ATOMS:
            raise VocabularyOverflow(f"{len(self.vocab)} atoms exceeds the limit of {MAX_ATOMS}")

    @classmethod
    def build(cls, gamma: Iterable[Formula] = (), r_norm: Iterable[Rule] = (),
              r_oblig: Iterable[Rule] = (), vocab: Iterable[str] = (),
              allow_incoherent: bool = False) -> "Theory":
        """Deduplicate rules (with a warning) and check coherence of the defaults."""
        gamma = tuple(dict.fromkeys(gamma))
        theory = cls(gamma, _dedupe(r_norm, "default"), _dedupe(r_oblig, "norm"),
                     tuple(vocab), allow_incoherent)
        if not allow_incoherent:
            witness = incoherent_subset(theory.r_norm)
            if witness is not None:
                raise IncoherentDefaultsError(witness)
        return theory

    @cached_property
    def defeat(self) -> DefeatGraph:
        return defeat_graph(self)

    def with_vocab(self, extra: Iterable[str]) -> "Theory":
        vocab = tuple(sorted(set(self.vocab) | set(extra)))
        if vocab == self.vocab:
            return self
        return Theory(self.gamma, self.r_norm, self.r_oblig, vocab, self.allow_incoherent)

    def replace(self, **changes) -> "Theory":
        parts = dict(gamma=self.gamma, r_norm=self.r_norm, r_oblig=self.r_oblig,
                     vocab=self.vocab, allow_incoherent=self.allow_incoherent)
        parts.update({k: tuple(v) if k != "allow_incoherent" else v for k, v in changes.items()})
        return Theory(**parts)

    def rename(self, mapping: dict[str, str]) -> "Theory":
        """Apply an injective atom renaming to every part and the vocabulary."""
        vocab = [mapping.get(p, p) for p in self.vocab]
        if len(set(vocab)) != len(vocab):
            raise ValueError("atom renaming must be injective on the vocabulary")
        return Theory(tuple(rename_atoms(phi, mapping) for phi in self.gamma),
                      tuple(rename_atoms(r, mapping) for r in self.r_norm),
                      tuple(rename_atoms(r, mapping) for r in self.r_oblig),
                      tuple(vocab), self.allow_incoherent)


def contained_in(delta1: Theory, delta2: Theory) -> bool:
    """Componentwise inclusion of facts, defaults and obligations."""
    return (set(delta1.gamma) <= set(delta2.gamma)
            and set(delta1.r_norm) <= set(delta2.r_norm)
            and set(delta1.r_oblig) <= set(delta2.r_oblig))
