"""Seeded random theories for property suites and the crosscheck command."""

from __future__ import annotations

import numpy as np

from .formula import (
    NORMALITY, OBLIGATION, And, Atom, Diamond, Formula, Not, Or, Query, Rule, conjoin,
)
from .norms import Theory, coherent

ATOM_POOL = ("p", "q", "r", "s", "t", "u")
MAX_REJECTIONS = 200


def vocabulary(n_atoms: int) -> tuple[str, ...]:
    if not 1 <= n_atoms <= len(ATOM_POOL):
        raise ValueError(f"between 1 and {len(ATOM_POOL)} atoms supported")
    return ATOM_POOL[:n_atoms]


def literal(rng: np.random.Generator, vocab) -> Formula:
    a = Atom(str(rng.choice(vocab)))
    return Not(a) if rng.random() < 0.5 else a


def conjunction(rng: np.random.Generator, vocab, min_lits: int = 0, max_lits: int = 2) -> Formula:
    """Conjunction of ``min_lits..max_lits`` literals on distinct atoms (TOP when empty)."""
    k = int(rng.integers(min_lits, max_lits + 1))
    k = min(k, len(vocab))
    atoms = rng.choice(vocab, size=k, replace=False) if k else []
    lits = [Not(Atom(str(a))) if rng.random() < 0.5 else Atom(str(a)) for a in atoms]
    return conjoin(lits)


def random_rule(rng: np.random.Generator, vocab, kind: str) -> Rule:
    return Rule(kind, conjunction(rng, vocab, 0, 2), conjunction(rng, vocab, 1, 2))


def random_rules(rng, vocab, kind: str, max_rules: int, min_rules: int = 0) -> tuple[Rule, ...]:
    n = int(rng.integers(min_rules, max_rules + 1))
    rules = []
    for _ in range(n):
        r = random_rule(rng, vocab, kind)
        if r not in rules:
            rules.append(r)
    return tuple(rules)


def random_defaults(rng, vocab, max_rules: int) -> tuple[Rule, ...]:
    """Coherent default set, by rejection sampling (falls back to no defaults)."""
    for _ in range(MAX_REJECTIONS):
        rules = random_rules(rng, vocab, NORMALITY, max_rules)
        if coherent(rules):
            return rules
    return ()


def random_fact(rng, vocab) -> Formula:
    choice = rng.random()
    if choice < 0.4:
        return Diamond(conjunction(rng, vocab, 1, 2))
    if choice < 0.7:
        return Or(literal(rng, vocab), literal(rng, vocab))
    return literal(rng, vocab)


def random_theory(rng: np.random.Generator, n_atoms: int = 3, max_defaults: int = 3,
                  max_obligations: int = 3, max_facts: int = 0) -> Theory:
    vocab = vocabulary(n_atoms)
    r_norm = random_defaults(rng, vocab, max_defaults) if max_defaults else ()
    r_oblig = random_rules(rng, vocab, OBLIGATION, max_obligations)
    n_facts = int(rng.integers(0, max_facts + 1)) if max_facts else 0
    gamma = tuple(dict.fromkeys(random_fact(rng, vocab) for _ in range(n_facts)))
    return Theory(gamma, r_norm, r_oblig, vocab)


def random_boolean(rng: np.random.Generator, vocab) -> Formula:
    """Small Boolean formula: a conjunction of literals or a disjunction of two."""
    if rng.random() < 0.25:
        return Or(conjunction(rng, vocab, 1, 2), conjunction(rng, vocab, 1, 1))
    return conjunction(rng, vocab, 0, 2)


def random_query(rng: np.random.Generator, vocab) -> Query:
    kind = rng.random()
    body, head = random_boolean(rng, vocab), random_boolean(rng, vocab)
    if kind < 0.5:
        return Query.obligation(body, head)
    if kind < 0.7:
        return Query.normality(body, head)
    if kind < 0.85:
        return Query.hansson(body, head)
    return Query.alethic(Diamond(And(body, head)))


def seeded(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


__all__ = [
    "ATOM_POOL", "vocabulary", "literal", "conjunction", "random_rule", "random_rules",
    "random_defaults", "random_fact", "random_theory", "random_boolean", "random_query",
    "seeded",
]
