"""Truth-table decision procedures for propositional logic and flat S5.

Worlds over a vocabulary ``(p_0, ..., p_{n-1})`` (sorted) are the integers
``0 .. 2**n - 1``; atom ``p_i`` is true at world ``w`` iff bit ``n - 1 - i``
of ``w`` is set, so ``format(w, f"0{n}b")`` reads the atoms left to right.
A truth table is a boolean numpy vector of length ``2**n`` indexed by world.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .formula import (
    And, Atom, Bottom, Box, Diamond, Formula, Iff, Implies, Not, Or, Top,
    atoms_of, is_flat, subformulas, NestingError,
)

MAX_ATOMS = 20


class VocabularyOverflow(ValueError):
    pass


@lru_cache(maxsize=None)
def valuation_matrix(n: int) -> np.ndarray:
    """``(2**n, n)`` boolean matrix; row ``w`` is the valuation of world ``w``."""
    if n > MAX_ATOMS:
        raise VocabularyOverflow(f"{n} atoms exceeds the limit of {MAX_ATOMS}")
    worlds = np.arange(2 ** n, dtype=np.int64)[:, None]
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)[None, :]
    m = ((worlds >> shifts) & 1).astype(bool)
    m.setflags(write=False)
    return m


def _check_vocab(vocab: Sequence[str]) -> tuple[str, ...]:
    vocab = tuple(vocab)
    if len(vocab) > MAX_ATOMS:
        raise VocabularyOverflow(f"{len(vocab)} atoms exceeds the limit of {MAX_ATOMS}")
    if list(vocab) != sorted(set(vocab)):
        raise ValueError(f"vocabulary must be sorted and duplicate-free: {vocab}")
    return vocab


def truth_table(phi: Formula, vocab: Sequence[str], modal: dict[Formula, bool] | None = None) -> np.ndarray:
    """Evaluate a Boolean formula at every world over ``vocab``.

    ``modal`` maps ``Box``/``Diamond`` nodes to fixed truth values (used for
    flat alethic formulas, whose modal parts do not depend on the world).
    """
    vocab = _check_vocab(vocab)
    index = {p: i for i, p in enumerate(vocab)}
    return _table(phi, valuation_matrix(len(vocab)), index, modal or {})


def _table(phi, vals, index, modal) -> np.ndarray:
    if isinstance(phi, Atom):
        try:
            return vals[:, index[phi.name]]
        except KeyError:
            raise ValueError(f"atom {phi.name!r} not in vocabulary") from None
    if isinstance(phi, Top):
        return np.ones(len(vals), dtype=bool)
    if isinstance(phi, Bottom):
        return np.zeros(len(vals), dtype=bool)
    if isinstance(phi, Not):
        return ~_table(phi.arg, vals, index, modal)
    if isinstance(phi, (Box, Diamond)):
        if phi not in modal:
            raise NestingError(f"no truth value supplied for modal subformula {phi}")
        return np.full(len(vals), modal[phi], dtype=bool)
    left = _table(phi.left, vals, index, modal)
    right = _table(phi.right, vals, index, modal)
    if isinstance(phi, And):
        return left & right
    if isinstance(phi, Or):
        return left | right
    if isinstance(phi, Implies):
        return ~left | right
    if isinstance(phi, Iff):
        return left == right
    raise TypeError(f"not a formula: {phi!r}")


def evaluate(phi: Formula, assignment: dict[str, bool]) -> bool:
    """Classical truth value of a Boolean formula under one assignment."""
    if isinstance(phi, Atom):
        return assignment[phi.name]
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, Not):
        return not evaluate(phi.arg, assignment)
    if isinstance(phi, And):
        return evaluate(phi.left, assignment) and evaluate(phi.right, assignment)
    if isinstance(phi, Or):
        return evaluate(phi.left, assignment) or evaluate(phi.right, assignment)
    if isinstance(phi, Implies):
        return (not evaluate(phi.left, assignment)) or evaluate(phi.right, assignment)
    if isinstance(phi, Iff):
        return evaluate(phi.left, assignment) == evaluate(phi.right, assignment)
    raise NestingError(f"cannot evaluate {phi} pointwise")


@dataclass(frozen=True, order=True)
class Valuation:
    """A world: a truth assignment over a sorted vocabulary."""

    vocab: tuple[str, ...]
    index: int

    @classmethod
    def from_true_atoms(cls, vocab: Sequence[str], true_atoms: Iterable[str]) -> "Valuation":
        vocab = tuple(vocab)
        true_atoms = set(true_atoms)
        unknown = true_atoms - set(vocab)
        if unknown:
            raise ValueError(f"atoms {sorted(unknown)} not in vocabulary")
        n = len(vocab)
        return cls(vocab, sum(1 << (n - 1 - i) for i, p in enumerate(vocab) if p in true_atoms))

    @classmethod
    def from_bits(cls, vocab: Sequence[str], bits: str) -> "Valuation":
        return cls(tuple(vocab), int(bits, 2) if bits else 0)

    def __getitem__(self, atom: str) -> bool:
        i = self.vocab.index(atom)
        return bool((self.index >> (len(self.vocab) - 1 - i)) & 1)

    def as_dict(self) -> dict[str, bool]:
        return {p: self[p] for p in self.vocab}

    def satisfies(self, phi: Formula) -> bool:
        return evaluate(phi, self.as_dict())

    @property
    def bits(self) -> str:
        return format(self.index, f"0{len(self.vocab)}b") if self.vocab else ""

    @property
    def true_atoms(self) -> tuple[str, ...]:
        return tuple(p for p in self.vocab if self[p])

    def label(self) -> str:
        return world_label(self.vocab, self.index)

    def __str__(self) -> str:
        return self.label()


def world_label(vocab: Sequence[str], index: int) -> str:
    """Bar-notation label, ASCII: ``-a f n -r``."""
    n = len(vocab)
    if n == 0:
        return "(empty)"
    return " ".join(p if (index >> (n - 1 - i)) & 1 else f"-{p}" for i, p in enumerate(vocab))


def models_of(phi: Formula, vocab: Sequence[str]) -> set[Valuation]:
    """All valuations over ``vocab`` satisfying a Boolean formula."""
    vocab = _check_vocab(vocab)
    missing = set(atoms_of(phi)) - set(vocab)
    if missing:
        raise ValueError(f"atoms {sorted(missing)} not in vocabulary")
    table = truth_table(phi, vocab)
    return {Valuation(vocab, int(w)) for w in np.flatnonzero(table)}


def _joint_vocab(formulas: Iterable[Formula]) -> tuple[str, ...]:
    vocab = atoms_of(list(formulas))
    if len(vocab) > MAX_ATOMS:
        raise VocabularyOverflow(f"{len(vocab)} atoms exceeds the limit of {MAX_ATOMS}")
    return vocab


def pl_satisfiable(formulas: Iterable[Formula]) -> bool:
    formulas = list(formulas)
    vocab = _joint_vocab(formulas)
    table = np.ones(2 ** len(vocab), dtype=bool)
    for phi in formulas:
        table &= truth_table(phi, vocab)
    return bool(table.any())


def pl_entails(premises: Iterable[Formula], phi: Formula) -> bool:
    """Classical consequence ``premises |= phi`` by truth tables."""
    premises = list(premises)
    return not pl_satisfiable([*premises, Not(phi)])


def modal_tokens(formulas: Iterable[Formula]) -> list[Formula]:
    """Distinct ``Box``/``Diamond`` subformulas, in first-occurrence order."""
    seen: dict[Formula, None] = {}
    for phi in formulas:
        for node in subformulas(phi):
            if isinstance(node, (Box, Diamond)):
                seen.setdefault(node, None)
    return list(seen)


def s5_consistent(formulas: Iterable[Formula]) -> bool:
    """Satisfiability of a set of flat alethic formulas in S5.

    Each modal subformula is a token. For every truth assignment to the
    tokens, the necessary part is ``{A : []A true} | {~A : <>A false}``; the
    assignment is realizable iff the actual world can satisfy the Boolean
    skeleton together with the necessary part, and each ``<>A`` true and
    each ``[]A`` false (a ``<>~A``) has a witness world satisfying it together
    with the necessary part.
    """
    formulas = list(formulas)
    for phi in formulas:
        if not is_flat(phi):
            raise NestingError(f"nested modal operator in {phi}")
    tokens = modal_tokens(formulas)
    vocab = _joint_vocab(formulas)
    size = 2 ** len(vocab)
    inner = {tok: truth_table(tok.arg, vocab) for tok in tokens}

    for values in product((False, True), repeat=len(tokens)):
        assignment = dict(zip(tokens, values))
        necessary = np.ones(size, dtype=bool)
        witnesses = []
        for tok, value in assignment.items():
            body = inner[tok]
            if isinstance(tok, Box):
                if value:
                    necessary &= body
                else:
                    witnesses.append(~body)
            else:
                if value:
                    witnesses.append(body)
                else:
                    necessary &= ~body
        actual = necessary.copy()
        for phi in formulas:
            actual &= truth_table(phi, vocab, assignment)
        if not actual.any():
            continue
        if all((necessary & w).any() for w in witnesses):
            return True
    return False


def s5_entails(premises: Iterable[Formula], phi: Formula) -> bool:
    return not s5_consistent([*premises, Not(phi)])
