"""Bi-preferential models built from a theory, truth conditions and entailment.

A :class:`Model` is a set of worlds (valuations over the theory's
vocabulary) ordered by normality and ideality. Both orderings are functions
of the valuations alone, so every table is computed once over all
``2**n`` valuations and submodels only carry a different ``present`` mask.
The canonical model has every valuation present; it is replete, and every
replete model over the same vocabulary agrees with it on all queries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .formula import (
    NORMALITY, OBLIGATION, Box, Formula, Query, Rule,
    atoms_of, is_flat, NestingError,
)
from .norms import (
    DefeatGraph, IncoherentDefaultsError, Theory, contained_in, incoherent_subset,
)
from .normality import LMSequence, RankedPartition, lm_sequence, ranked_partition
from .propkernel import Valuation, modal_tokens, truth_table, world_label

__all__ = [
    "Model", "build_model", "eval_query", "eval_exists_forall", "entails",
    "EntailmentResult", "contained_in", "ResourceLimit", "REPLETE", "ALL_MODELS",
    "ALL_MODELS_MAX_ATOMS",
]

REPLETE = "replete"
ALL_MODELS = "all_models"
ALL_MODELS_MAX_ATOMS = 4
MAX_OBLIGATIONS = 62


class ResourceLimit(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Model:
    theory: Theory
    vocab: tuple[str, ...]
    seq: LMSequence
    partition: RankedPartition
    graph: DefeatGraph
    falsified: np.ndarray     # int64 bitmask over defaults, per valuation
    violated: np.ndarray      # int64 bitmask over obligations, per valuation
    tuples: np.ndarray        # (2**n, width) normality tuples
    nlevel: np.ndarray        # normality class, 0 = most normal
    present: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.present)

    @property
    def worlds(self) -> np.ndarray:
        return np.flatnonzero(self.present)

    def restrict(self, present: np.ndarray) -> "Model":
        """Submodel on the given nonempty set of valuations."""
        present = np.asarray(present, dtype=bool)
        if not present.any():
            raise ValueError("a model has at least one world")
        return Model(self.theory, self.vocab, self.seq, self.partition, self.graph,
                     self.falsified, self.violated, self.tuples, self.nlevel, present)

    def label(self, w: int) -> str:
        return world_label(self.vocab, int(w))

    def valuation(self, w: int) -> Valuation:
        return Valuation(self.vocab, int(w))

    # -- sets of worlds -----------------------------------------------------

    def extent(self, phi: Formula) -> np.ndarray:
        """Truth set of a Boolean formula among present worlds."""
        return truth_table(phi, self.vocab) & self.present

    def max_normal(self, mask: np.ndarray) -> np.ndarray:
        mask = mask & self.present
        if not mask.any():
            return mask
        return mask & (self.nlevel == self.nlevel[mask].min())

    def max_ideal(self, mask: np.ndarray) -> np.ndarray:
        mask = mask & self.present
        values = np.unique(self.violated[mask])
        # a violation set is dominated when a distinct subset of it is realized
        dominated = [v for v in values if any((u & ~v) == 0 and u != v for u in values)]
        return mask & ~np.isin(self.violated, dominated)

    def lifted_geq(self, u_mask: np.ndarray, v_mask: np.ndarray) -> bool:
        """Every world in ``v_mask`` is weakly dominated by a world in ``u_mask``."""
        u_vals = np.unique(self.violated[u_mask & self.present])
        v_vals = np.unique(self.violated[v_mask & self.present])
        return all(any((u & ~v) == 0 for u in u_vals) for v in v_vals)

    def ideality_geq(self, w1: int, w2: int) -> bool:
        return (self.violated[w1] & ~self.violated[w2]) == 0

    def normality_geq(self, w1: int, w2: int) -> bool:
        return self.nlevel[w1] <= self.nlevel[w2]

    # -- truth conditions ---------------------------------------------------

    def box(self, phi: Formula) -> bool:
        return not (self.present & ~truth_table(phi, self.vocab)).any()

    def diamond(self, phi: Formula) -> bool:
        return bool(self.extent(phi).any())

    def alethic(self, phi: Formula) -> np.ndarray:
        """Truth value of a flat alethic formula at every valuation."""
        if not is_flat(phi):
            raise NestingError(f"nested modal operator in {phi}")
        values = {tok: self.box(tok.arg) if isinstance(tok, Box) else self.diamond(tok.arg)
                  for tok in modal_tokens([phi])}
        return truth_table(phi, self.vocab, values)

    def normality(self, body: Formula, head: Formula) -> bool:
        """The most normal ``body``-worlds are ``head``-worlds."""
        best = self.max_normal(self.extent(body))
        return not (best & ~truth_table(head, self.vocab)).any()

    def obligation(self, body: Formula, head: Formula) -> bool:
        """The most normal violating worlds are not at least as good as the most normal complying ones."""
        head_t = truth_table(head, self.vocab)
        a = self.extent(body)
        return not self.lifted_geq(self.max_normal(a & ~head_t), self.max_normal(a & head_t))

    def hansson(self, body: Formula, head: Formula) -> bool:
        best = self.max_ideal(self.extent(body))
        return not (best & ~truth_table(head, self.vocab)).any()

    def obligation_exists_forall(self, body: Formula, head: Formula) -> bool:
        """Some most normal complying world is weakly dominated by no most normal violating world."""
        return self._exists_forall_witness(body, head) is not None

    def _exists_forall_witness(self, body, head):
        head_t = truth_table(head, self.vocab)
        a = self.extent(body)
        good = np.flatnonzero(self.max_normal(a & head_t))
        bad = np.flatnonzero(self.max_normal(a & ~head_t))
        hits = [v for v in good if not any(self.ideality_geq(u, v) for u in bad)]
        if not hits:
            return None
        return min(hits, key=lambda v: (bin(int(self.violated[v])).count("1"), v))

    def obligation_flat(self, body: Formula, head: Formula) -> bool:
        """Exists-forall clause read over all worlds; agrees with :meth:`obligation` without defaults."""
        a = self.extent(body)
        b = truth_table(head, self.vocab)
        material = ~a | b
        for v in np.flatnonzero(a & b):
            above = self.present & ((self.violated & ~self.violated[v]) == 0)
            if not (above & ~material).any():
                return True
        return False

    def obligation_witness(self, body: Formula, head: Formula) -> int | None:
        """World backing the verdict on ``O(head|body)``.

        If true, a most normal complying world no violating one matches. If
        false, a most normal violating world dominating as many most normal
        complying worlds as possible.
        """
        v = self._exists_forall_witness(body, head)
        if v is not None:
            return int(v)
        head_t = truth_table(head, self.vocab)
        a = self.extent(body)
        good = np.flatnonzero(self.max_normal(a & head_t))
        bad = np.flatnonzero(self.max_normal(a & ~head_t))
        if not len(good) or not len(bad):
            return None

        def score(u):
            covered = sum(self.ideality_geq(u, v) for v in good)
            return (-covered, bin(int(self.violated[u])).count("1"), u)
        return int(min(bad, key=score))

    def holds(self, query: Query) -> np.ndarray:
        """Truth value of ``query`` at every valuation (meaningful at present ones)."""
        if query.kind == "alethic":
            return self.alethic(query.formula)
        if query.kind == NORMALITY:
            value = self.normality(query.body, query.head)
        elif query.kind == OBLIGATION:
            value = self.obligation(query.body, query.head)
        else:
            value = self.hansson(query.body, query.head)
        return np.full(self.size, value, dtype=bool)

    def witness(self, query: Query) -> int | None:
        """World illustrating the verdict on a conditional query; None for alethic ones."""
        if query.kind == OBLIGATION:
            return self.obligation_witness(query.body, query.head)
        if query.kind == "alethic":
            return None
        best = (self.max_normal(self.extent(query.body)) if query.kind == NORMALITY
                else self.max_ideal(self.extent(query.body)))
        bad = np.flatnonzero(best & ~truth_table(query.head, self.vocab))
        return int(bad[0]) if len(bad) else None

    def gamma_mask(self) -> np.ndarray:
        mask = self.present.copy()
        for phi in self.theory.gamma:
            mask &= self.alethic(phi)
        return mask

    # -- reporting ----------------------------------------------------------

    def rows(self) -> list[dict]:
        """One record per present world: label, tuple, falsified and violated rules."""
        t = self.theory
        out = []
        for w in self.worlds:
            out.append({
                "label": self.label(w),
                "tuple": [int(x) for x in self.tuples[w]],
                "falsified": [str(r) for k, r in enumerate(t.r_norm) if self.falsified[w] >> k & 1],
                "violated": [str(r) for k, r in enumerate(t.r_oblig) if self.violated[w] >> k & 1],
            })
        return out


def _rule_masks(rules: Sequence[Rule], vocab, table_fn) -> np.ndarray:
    masks = np.zeros(2 ** len(vocab), dtype=np.int64)
    for k, r in enumerate(rules):
        masks |= table_fn(k, r).astype(np.int64) << k
    return masks


@lru_cache(maxsize=512)
def _incoherent_witness(r_norm: tuple[Rule, ...]):
    return incoherent_subset(r_norm)


def build_model(theory: Theory) -> Model:
    """Canonical model of a theory: every valuation over its vocabulary, once."""
    # checked outside the model cache: theories equal up to the flag share a model
    if not theory.allow_incoherent:
        witness = _incoherent_witness(theory.r_norm)
        if witness is not None:
            raise IncoherentDefaultsError(witness)
    return _build_model(theory)


@lru_cache(maxsize=512)
def _build_model(theory: Theory) -> Model:
    if len(theory.r_oblig) > MAX_OBLIGATIONS or len(theory.r_norm) > MAX_OBLIGATIONS:
        raise ResourceLimit(f"at most {MAX_OBLIGATIONS} rules of each kind are supported")
    vocab = theory.vocab
    seq = lm_sequence(theory.r_norm)
    partition = ranked_partition(seq)
    graph = theory.defeat

    def fals(_, r):
        return truth_table(r.body, vocab) & ~truth_table(r.head, vocab)

    falsified = _rule_masks(theory.r_norm, vocab, fals)

    bodies = [truth_table(r.body, vocab) for r in theory.r_oblig]

    def viol(k, r):
        v = bodies[k] & ~truth_table(r.head, vocab)
        for j in graph.defeaters(k):
            v &= ~bodies[j]
        return v

    violated = _rule_masks(theory.r_oblig, vocab, viol)

    # tuple columns: Delta_m (only if nonempty), then Delta_{m-1} ... Delta_0
    m = partition.order
    columns = list(range(m - 1, -1, -1))
    if partition.levels[m]:
        columns.insert(0, m)
    size = 2 ** len(vocab)
    tuples = np.zeros((size, len(columns)), dtype=np.int64)
    for c, level in enumerate(columns):
        for k in partition.levels[level]:
            tuples[:, c] += (falsified >> k) & 1
    if tuples.shape[1]:
        _, nlevel = np.unique(tuples, axis=0, return_inverse=True)
        nlevel = nlevel.reshape(-1)
    else:
        nlevel = np.zeros(size, dtype=np.int64)
    return Model(theory, vocab, seq, partition, graph, falsified, violated, tuples,
                 nlevel.astype(np.int64), np.ones(size, dtype=bool))


def _world_index(model: Model, w) -> int:
    if isinstance(w, Valuation):
        if w.vocab != model.vocab:
            w = Valuation.from_true_atoms(model.vocab, w.true_atoms)
        return w.index
    return int(w)


def eval_query(model: Model, w, query: Query | Formula) -> bool:
    """Truth of a query (or flat alethic formula) at world ``w`` of ``model``."""
    if isinstance(query, Formula):
        query = Query.alethic(query)
    return bool(model.holds(query)[_world_index(model, w)])


def eval_exists_forall(model: Model, query: Query) -> bool:
    if query.kind != OBLIGATION:
        raise ValueError("exists-forall truth conditions apply to obligations")
    return model.obligation_exists_forall(query.body, query.head)


@dataclass(frozen=True)
class EntailmentResult:
    query: Query
    entailed: bool
    mode: str
    world: str | None = None          # a world satisfying the facts but not the query
    countermodel: tuple[str, ...] | None = None   # worlds of the failing model (all_models mode)
    witness: str | None = None        # truth-condition witness, see Model.witness

    @property
    def verdict(self) -> str:
        return "yes" if self.entailed else "no"


def _check(model: Model, query: Query):
    failing = model.gamma_mask() & ~model.holds(query)
    return np.flatnonzero(failing)


def entails(theory: Theory, query: Query, mode: str = REPLETE) -> EntailmentResult:
    """Whether every world satisfying the facts satisfies ``query``.

    ``replete`` checks the canonical model. ``all_models`` checks every
    model whose worlds are a nonempty set of valuations over the vocabulary,
    which is only feasible for tiny vocabularies.
    """
    theory = theory.with_vocab(atoms_of(query))
    model = build_model(theory)
    if mode == REPLETE:
        failing = _check(model, query)
        w = model.witness(query)
        return EntailmentResult(
            query, not len(failing), mode,
            world=model.label(failing[0]) if len(failing) else None,
            countermodel=None,
            witness=model.label(w) if w is not None else None)
    if mode != ALL_MODELS:
        raise ValueError(f"unknown entailment mode {mode!r}")
    n = len(theory.vocab)
    if n > ALL_MODELS_MAX_ATOMS:
        raise ResourceLimit(f"all_models mode supports at most {ALL_MODELS_MAX_ATOMS} atoms, got {n}")
    size = 2 ** n
    bits = np.arange(size)
    for subset in range(1, 2 ** size):
        sub = model.restrict(((subset >> bits) & 1).astype(bool))
        failing = _check(sub, query)
        if len(failing):
            w = sub.witness(query)
            return EntailmentResult(
                query, False, mode,
                world=sub.label(failing[0]),
                countermodel=tuple(sub.label(v) for v in sub.worlds),
                witness=sub.label(w) if w is not None else None)
    w = model.witness(query)
    return EntailmentResult(query, True, mode, witness=model.label(w) if w is not None else None)
