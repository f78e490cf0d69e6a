"""Property checks shared by the property tests and the acceptance suite.

Each check takes a theory (and an RNG where it samples) and returns a list
of counterexample descriptions; an empty list means the property held.
Per-world definitions from ``normality`` and ``ideality`` serve as the
reference against the vectorized model.
"""

from __future__ import annotations

import itertools

import numpy as np

from bipref.formula import (
    NORMALITY, OBLIGATION, TOP, And, Atom, Diamond, Implies, Not, Query, Rule, atoms_of,
    conjoin, rename_atoms,
)
from bipref.generate import conjunction, random_boolean, random_rules, vocabulary
from bipref.ideality import ideality_geq, lifted_geq, max_ideal, violation_set
from bipref.iol import faithfulness_check, rewrite_defeaters
from bipref.model import ALL_MODELS, REPLETE, build_model, entails
from bipref.norms import Theory, coherent
from bipref.normality import (
    falsification_set, lex_geq_tuples, max_normal, rank, tuple_of,
)
from bipref.propkernel import Valuation, pl_satisfiable, truth_table


def valuations(model):
    return [Valuation(model.vocab, int(w)) for w in model.worlds]


def mask_of(model, worlds) -> np.ndarray:
    mask = np.zeros(model.size, dtype=bool)
    for v in worlds:
        mask[v.index] = True
    return mask


def sample_formulas(rng, theory, k=3):
    vocab = theory.vocab or ("p",)
    forms = [TOP, *(r.body for r in theory.r_norm), *(r.body for r in theory.r_oblig)]
    forms += [random_boolean(rng, vocab) for _ in range(k)]
    return list(dict.fromkeys(forms))


def _relation(items, geq):
    return np.array([[geq(x, y) for y in items] for x in items], dtype=bool)


def _preorder_failures(name, g, total=False):
    out = []
    if not g.diagonal().all():
        out.append(f"{name} not reflexive")
    gi = g.astype(np.int64)
    if ((gi @ gi > 0) & ~g).any():
        out.append(f"{name} not transitive")
    if total and not (g | g.T).all():
        out.append(f"{name} not total")
    return out


# -- orderings ----------------------------------------------------------------

def check_normality_order(theory):
    model = build_model(theory)
    vals = valuations(model)
    tup = [tuple_of(falsification_set(v, theory.r_norm), model.partition) for v in vals]
    g = _relation(tup, lex_geq_tuples)
    out = _preorder_failures("normality order", g, total=True)
    strict = g & ~g.T
    if strict.diagonal().any():
        out.append("strict normality order not irreflexive")
    # modularity: w1 > w2 implies w1 > w3 or w3 > w2
    n = len(vals)
    for i, j in zip(*np.nonzero(strict)):
        if not (strict[i, :] | strict[:, j]).all():
            out.append(f"strict normality order not modular at {vals[i]}, {vals[j]}")
            break
    vec = model.nlevel[model.worlds]
    if not (g == (vec[:, None] <= vec[None, :])).all():
        out.append("vectorized normality classes disagree with tuple comparison")
    assert n == len(tup)
    return out


def check_ideality_order(theory, rng):
    model = build_model(theory)
    vals = valuations(model)
    graph = theory.defeat
    g = _relation(vals, lambda x, y: ideality_geq(x, y, theory.r_oblig, graph))
    out = _preorder_failures("ideality order", g)
    vec = model.violated[model.worlds]
    if not (g == ((vec[:, None] & ~vec[None, :]) == 0)).all():
        out.append("vectorized violation masks disagree with violation sets")
    # smoothness: every world is a best one or is beaten by a best one
    for _ in range(3):
        subset = [v for v in vals if rng.random() < 0.5] or vals[:1]
        best = max_ideal(subset, theory.r_oblig, graph)
        for v in subset:
            if v in best:
                continue
            vv = violation_set(v, theory.r_oblig, graph)
            if not any(violation_set(b, theory.r_oblig, graph) < vv for b in best):
                out.append(f"ideality not smooth at {v}")
        if not (mask_of(model, best) == model.max_ideal(mask_of(model, subset))).all():
            out.append("vectorized best worlds disagree with per-world best worlds")
    # lifting: reflexive and transitive on random subsets
    sets = [[v for v in vals if rng.random() < 0.5] for _ in range(4)]
    lift = lambda u, v: lifted_geq(u, v, theory.r_oblig, graph)
    for u in sets:
        if not lift(u, u):
            out.append("lifting not reflexive")
    for u, v, w in itertools.permutations(sets, 3):
        if lift(u, v) and lift(v, w) and not lift(u, w):
            out.append("lifting not transitive")
        if lift(u, v) != model.lifted_geq(mask_of(model, u), mask_of(model, v)):
            out.append("vectorized lifting disagrees")
    return out


def check_smoothness(theory, rng):
    """Every A-world is most normal or beaten by a most normal A-world."""
    model = build_model(theory)
    vals = valuations(model)
    out = []
    for a in sample_formulas(rng, theory):
        ext = [v for v in vals if v.satisfies(a)]
        best = max_normal(ext, theory.r_norm, model.partition)
        if ext and not best:
            out.append(f"no most normal {a}-world")
        for w in ext:
            if w in best:
                continue
            tw = model.tuples[w.index]
            if not any(lex_geq_tuples(tuple(model.tuples[b.index]), tuple(tw))
                       and tuple(model.tuples[b.index]) != tuple(tw) for b in best):
                out.append(f"smoothness fails for {a} at {w}")
        if not (mask_of(model, best) == model.max_normal(model.extent(a))).all():
            out.append(f"vectorized most normal {a}-worlds disagree")
    return out


# -- truth conditions ------------------------------------------------------------

def check_truth_conditions(theory, rng):
    """Definitional lifting clause, derived exists-forall clause and (without defaults) the flat clause agree."""
    model = build_model(theory)
    vals = valuations(model)
    graph = theory.defeat
    out = []
    forms = sample_formulas(rng, theory)
    heads = [*(r.head for r in theory.r_oblig), random_boolean(rng, theory.vocab or ("p",))]
    for a, b in itertools.product(forms, heads):
        violating = max_normal([v for v in vals if v.satisfies(And(a, Not(b)))], theory.r_norm,
                               model.partition)
        complying = max_normal([v for v in vals if v.satisfies(And(a, b))], theory.r_norm,
                               model.partition)
        reference = not lifted_geq(violating, complying, theory.r_oblig, graph)
        lifted = model.obligation(a, b)
        derived = model.obligation_exists_forall(a, b)
        if not reference == lifted == derived:
            out.append(f"O({b} | {a}): reference {reference}, lifted {lifted}, derived {derived}")
        if not theory.r_norm and model.obligation_flat(a, b) != lifted:
            out.append(f"O({b} | {a}): flat clause disagrees without defaults")
    return out


# -- LM-sequence facts -------------------------------------------------------------

def check_sequence_facts(theory):
    model = build_model(theory)
    seq, part = model.seq, model.partition
    out = []
    levels = seq.levels
    if levels[0] != frozenset(range(len(theory.r_norm))):
        out.append("E0 is not the whole default set")
    for i in range(len(levels) - 1):
        if not levels[i + 1] < levels[i]:
            out.append(f"E{i + 1} is not a strict subset of E{i}")
    if seq.limit:
        out.append("E_inf nonempty for coherent defaults")
    m = seq.order
    for i in range(m + 1):
        union = frozenset().union(*part.levels[i:])
        if union != levels[i]:
            out.append(f"E{i} differs from the union of the partition from level {i}")
        if not part.levels[i] <= levels[i]:
            out.append(f"D{i} not inside E{i}")
    for r in theory.r_norm:
        if not pl_satisfiable([And(r.body, Not(r.head))]):
            continue
        ra, rab = rank(r.body, seq), rank(And(r.body, Not(r.head)), seq)
        if ra is None or rab is None or not ra < rab <= m:
            out.append(f"rank condition fails for {r}: {ra}, {rab}, m={m}")
    return out


def check_normality_inclusion(theory):
    out = []
    for r in theory.r_norm:
        if pl_satisfiable([And(r.body, Not(r.head))]) and \
                not entails(theory, Query.normality(r.body, r.head)).entailed:
            out.append(f"{r} not entailed")
    return out


# -- obligation inclusion and strengthening ---------------------------------------

def check_defeasible_strengthening(theory, rng):
    """An undefeated obligation survives antecedent strengthening once the strengthened case is possible.

    Returns (failures, number of instances whose hypotheses held).
    """
    out, hits = [], 0
    vocab = theory.vocab or ("p",)
    for i, r in enumerate(theory.r_oblig):
        for c in (TOP, conjunction(rng, vocab, 1, 2)):
            ext = theory.replace(gamma=(*theory.gamma, Diamond(conjoin([r.body, r.head, c]))))
            if ext.defeat.defeaters(i):
                continue
            hits += 1
            body = r.body if c == TOP else And(r.body, c)
            if not entails(ext, Query.obligation(body, r.head)).entailed:
                out.append(f"O({r.head} | {body}) not entailed with {r} undefeated")
    return out, hits


def no_drowning_instance(theory, i):
    """Extend ``theory`` to meet the no-drowning hypotheses for obligation ``i``; None if impossible."""
    r = theory.r_oblig[i]
    ext = theory.replace(gamma=(*theory.gamma, Diamond(And(r.body, r.head))))
    defeaters = ext.defeat.defeaters(i)
    if not defeaters:
        return None
    extra = [Rule(NORMALITY, TOP, Not(ext.r_oblig[j].body)) for j in sorted(defeaters)]
    r_norm = tuple(dict.fromkeys((*ext.r_norm, *extra)))
    if not coherent(r_norm):
        return None
    ext = ext.replace(r_norm=r_norm)
    model = build_model(ext)
    gamma_worlds = model.gamma_mask().any()
    if gamma_worlds and model.normality(TOP, Implies(r.body, r.head)):
        return None
    return ext


def check_no_drowning(theory):
    out, hits = [], 0
    for i, r in enumerate(theory.r_oblig):
        ext = no_drowning_instance(theory, i)
        if ext is None:
            continue
        hits += 1
        if not entails(ext, Query.obligation(r.body, r.head)).entailed:
            out.append(f"{r} drowned in {ext}")
    return out, hits


def override_theory(rng, n_atoms=4):
    """Random theory containing a general obligation and a more specific conflicting one."""
    vocab = vocabulary(n_atoms)
    atoms = list(rng.permutation(vocab))
    b = Atom(str(atoms[0]))
    b = Not(b) if rng.random() < 0.5 else b
    a = conjoin([Atom(str(atoms[1]))] if rng.random() < 0.5 else [])
    d = Atom(str(atoms[2]))
    d = Not(d) if rng.random() < 0.5 else d
    specific = Rule(OBLIGATION, And(a, d) if a != TOP else d, Not(b) if not isinstance(b, Not) else b.arg)
    general = Rule(OBLIGATION, a, b)
    others = random_rules(rng, vocab, OBLIGATION, 2)
    return Theory((), (), tuple(dict.fromkeys((general, specific, *others))), vocab)


# -- input/output bridge ----------------------------------------------------------

def check_rewrite_properties(theory):
    """Violation equals failing the rewritten pair; strict ideality is witnessed by some rewritten pair."""
    model = build_model(theory)
    pairs = rewrite_defeaters(theory)
    sat = np.array([truth_table(p.material(), model.vocab) for p in pairs], dtype=bool)
    sat = sat.reshape(len(pairs), model.size)
    out = []
    for k in range(len(pairs)):
        viol = ((model.violated >> k) & 1).astype(bool)
        if not (viol == ~sat[k]).all():
            out.append(f"violation of rule {k} differs from failing its rewritten pair")
    worlds = model.worlds
    for w, v in itertools.product(worlds, worlds):
        if model.ideality_geq(w, v) and not model.ideality_geq(v, w):
            if not any(sat[k, w] and not sat[k, v] for k in range(len(pairs))):
                out.append(f"{model.label(w)} strictly better than {model.label(v)} with no separating pair")
    return out


def check_faithfulness(theory, rng, pairs=4):
    """Returns (failures, converse gaps)."""
    vocab = theory.vocab or ("p",)
    out, gaps = [], []
    for _ in range(pairs):
        a, x = conjunction(rng, vocab, 0, 2), random_boolean(rng, vocab)
        rep = faithfulness_check(theory, a, x)
        tag = f"{theory.r_oblig} input {a} head {x}"
        if not rep.hansson_agrees:
            out.append(f"Hansson {rep.hansson_verdict} vs full meet {rep.iol_verdict}: {tag}")
        if not rep.forward_holds:
            out.append(f"full meet without exists-forall obligation: {tag}")
        if rep.bridge_mismatches:
            out.append(f"bridge mismatch at {rep.bridge_mismatches}: {tag}")
        if rep.converse_counterexample:
            gaps.append(tag)
    return out, gaps


# -- entailment modes and invariance ------------------------------------------------

def check_mode_soundness(theory, query):
    """Entailment over all models implies entailment in the canonical model."""
    every = entails(theory, query, ALL_MODELS).entailed
    canonical = entails(theory, query, REPLETE).entailed
    if every and not canonical:
        return [f"{query}: all models yes, canonical no"]
    return []


def check_invariance(theory, query, rng):
    out = []
    base = entails(theory, query)
    fresh = theory.with_vocab(["z1"])
    if entails(fresh, query).entailed != base.entailed:
        out.append(f"{query}: verdict changes with an extra atom")
    names = list(atoms_of(theory, query))
    perm = list(rng.permutation(names))
    # go through fresh names so the renaming is a bijection onto new identifiers
    mapping = {p: f"x{q}" for p, q in zip(names, perm)}
    renamed = theory.with_vocab(names).rename(mapping)
    res = entails(renamed, rename_atoms(query, mapping))
    if res.entailed != base.entailed:
        out.append(f"{query}: verdict changes under renaming {mapping}")
    ranks = sorted(map(tuple, build_model(theory.with_vocab(names)).tuples.tolist()))
    ranks_renamed = sorted(map(tuple, build_model(renamed).tuples.tolist()))
    if ranks != ranks_renamed:
        out.append("normality tuples change under renaming")
    return out

