"""Command-line interface: ``bipref check|rank|query|iol|crosscheck``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import __version__
from .formula import OBLIGATION, TOP, Atom, FormulaSyntaxError, Not, atoms_of, parse_boolean
from .generate import conjunction, random_boolean, random_rules, seeded, vocabulary
from .iol import InconsistentInput, faithfulness_check, maxfamily, out4plus_contains, rewrite_defeaters
from .model import ALL_MODELS, MAX_OBLIGATIONS, REPLETE, ResourceLimit, build_model, entails
from .norms import IncoherentDefaultsError, Theory, incoherent_subset
from .normality import fdis_count
from .propkernel import VocabularyOverflow, pl_satisfiable
from .theoryfile import load_theory

EXIT_OK = 0
EXIT_NOT_ENTAILED = 1
EXIT_PARSE = 2
EXIT_INCOHERENT = 3
EXIT_RESOURCE = 4
EXIT_IO = 5
EXIT_PRECONDITION = 6

PAIRS_PER_THEORY = 4


class Precondition(ValueError):
    pass


def _rules(rules, indices) -> str:
    return "{" + ", ".join(str(rules[k]) for k in sorted(indices)) + "}"


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=False, ensure_ascii=False))
    else:
        print("\n".join(lines))


def _load(args, allow_incoherent=False):
    tf = load_theory(args.file, allow_incoherent=allow_incoherent)
    for note in tf.warnings:
        print(f"warning: {note}", file=sys.stderr)
    return tf


# -- check -------------------------------------------------------------------

def cmd_check(args) -> int:
    tf = _load(args, allow_incoherent=True)
    t = tf.theory
    witness = incoherent_subset(t.r_norm)
    model = build_model(t)
    seq, part = model.seq, model.partition
    edges = t.defeat.sorted_edges()
    payload = {
        "vocab": list(t.vocab),
        "facts": [str(phi) for phi in t.gamma],
        "defaults": [str(r) for r in t.r_norm],
        "norms": [str(r) for r in t.r_oblig],
        "coherent": witness is None,
        "incoherent_witness": [str(r) for r in witness] if witness else None,
        "defeat": [{"defeater": j, "defeated": i,
                    "text": f"{t.r_oblig[j]} > {t.r_oblig[i]}"} for j, i in edges],
        "lm_sequence": [[str(t.r_norm[k]) for k in sorted(level)] for level in seq.levels],
        "partition": [[str(t.r_norm[k]) for k in sorted(level)] for level in part.levels],
    }
    lines = [
        f"vocabulary: {' '.join(t.vocab) or '(none)'}",
        f"facts: {len(t.gamma)}  defaults: {len(t.r_norm)}  norms: {len(t.r_oblig)}",
        "coherent: yes" if witness is None else
        f"coherent: no  witness: {{{', '.join(str(r) for r in witness)}}}",
        "defeat:" + ("" if edges else " none"),
        *(f"  {t.r_oblig[j]}  >  {t.r_oblig[i]}" for j, i in edges),
        "LM-sequence:",
        *(f"  E{i} = {_rules(t.r_norm, level)}" for i, level in enumerate(seq.levels)),
        "ranked partition:",
        *(f"  D{i} = {_rules(t.r_norm, level)}" for i, level in enumerate(part.levels)),
    ]
    _emit(args, payload, lines)
    return EXIT_OK if witness is None else EXIT_INCOHERENT


# -- rank --------------------------------------------------------------------

def cmd_rank(args) -> int:
    tf = _load(args)
    t = tf.theory
    model = build_model(t)
    rows = []
    for w, row in zip(model.worlds, model.rows()):
        count = fdis_count(model.valuation(w), t.r_norm)
        cls = int(model.nlevel[w]) if args.method == "lex" else count
        rows.append((cls, int(w), row, count))
    rows.sort(key=lambda r: (r[0], r[1]))
    if args.method == "fdis":
        # classes numbered densely from 0
        dense = {c: i for i, c in enumerate(sorted({r[0] for r in rows}))}
        rows = [(dense[c], w, row, n) for c, w, row, n in rows]

    payload = {"vocab": list(t.vocab), "method": args.method, "worlds": [
        {"class": c, "label": row["label"], "tuple": row["tuple"], "fdis": n,
         "falsified": row["falsified"], "violated": row["violated"]}
        for c, _, row, n in rows]}
    measure = "tuple" if args.method == "lex" else "f-DIS"
    width = max([len(row["label"]) for _, _, row, _ in rows] + [5])
    lines = [f"{'class':<6}{'world':<{width + 2}}{measure:<10}{'falsified':<28}violated"]
    for c, _, row, n in rows:
        m = "(" + ",".join(map(str, row["tuple"])) + ")" if args.method == "lex" else str(n)
        fals = ", ".join(row["falsified"]) or "-"
        viol = ", ".join(row["violated"]) or "-"
        lines.append(f"{c:<6}{row['label']:<{width + 2}}{m:<10}{fals:<28}{viol}")
    _emit(args, payload, lines)
    return EXIT_OK


# -- query -------------------------------------------------------------------

def cmd_query(args) -> int:
    tf = _load(args)
    if not tf.queries:
        raise Precondition(f"{args.file}: no query directives")
    mode = ALL_MODELS if args.mode == "all-models" else REPLETE
    results = [entails(tf.theory, q, mode) for q in tf.queries]
    # worlds over the full vocabulary, queries included
    model = build_model(tf.theory.with_vocab(atoms_of(tf.queries)))
    entries, lines = [], []
    for text, res in zip(tf.query_texts, results):
        entry = {"text": text, "verdict": res.verdict}
        if res.witness is not None:
            entry["witness"] = res.witness
        if res.world is not None:
            entry["failing_world"] = res.world
        if res.countermodel is not None:
            entry["countermodel"] = list(res.countermodel)
        entries.append(entry)
        line = f"{text}: {res.verdict}"
        if res.witness is not None:
            line += f"  witness: {res.witness}"
        if res.countermodel is not None:
            line += f"  countermodel: {{{'; '.join(res.countermodel)}}}"
        lines.append(line)
    payload = {"vocab": list(model.vocab), "mode": mode, "worlds": model.rows(), "queries": entries}
    _emit(args, payload, lines)
    return EXIT_OK if all(r.entailed for r in results) else EXIT_NOT_ENTAILED


# -- iol ---------------------------------------------------------------------

def _bare(theory: Theory, *extra) -> Theory:
    return Theory((), (), theory.r_oblig, tuple(sorted(set(theory.vocab) | set(atoms_of(*extra)))))


def cmd_iol(args) -> int:
    tf = _load(args)
    a, x = parse_boolean(args.input), parse_boolean(args.head)
    if not pl_satisfiable([a]):
        raise InconsistentInput(f"input {a} is inconsistent")
    if tf.theory.gamma or tf.theory.r_norm:
        print("note: facts and defaults are ignored by the I/O engine", file=sys.stderr)
    bare = _bare(tf.theory, a, x)
    norms = rewrite_defeaters(bare)
    family = maxfamily(norms, a)
    per_member = [out4plus_contains(family.pairs(h), a, x) for h in family]
    meet = all(per_member)
    report = faithfulness_check(bare, a, x)

    def fmt(h):
        return "{" + ", ".join(map(str, sorted(h))) + "}"

    payload = {
        "input": str(a), "head": str(x),
        "rewrite": [{"index": k, "pair": [str(p.body), str(p.head)], "from": str(r)}
                    for k, (p, r) in enumerate(zip(norms, bare.r_oblig))],
        "maxfamily": [sorted(h) for h in family],
        "members": [{"member": sorted(h), "verdict": "yes" if v else "no"}
                    for h, v in zip(family, per_member)],
        "full_meet": "yes" if meet else "no",
        "hansson": "yes" if report.hansson_verdict else "no",
    }
    lines = ["rewrite:"]
    lines += [f"  {k}: {p}   from {r}" for k, (p, r) in enumerate(zip(norms, bare.r_oblig))]
    lines.append(f"maxfamily for input {a}: " + (", ".join(fmt(h) for h in family) or "(empty)"))
    lines += [f"  {fmt(h)}: {x} {'yes' if v else 'no'}" for h, v in zip(family, per_member)]
    lines.append(f"full meet: {'yes' if meet else 'no'}")
    lines.append(f"OH({x} | {a}): {payload['hansson']}")
    _emit(args, payload, lines)
    return EXIT_OK if meet else EXIT_NOT_ENTAILED


# -- crosscheck --------------------------------------------------------------

@dataclass
class CrosscheckTally:
    theories: int = 0
    pairs: int = 0
    agree: int = 0
    forward: int = 0
    bridge: int = 0
    disagreements: list[str] = field(default_factory=list)
    converse: list[str] = field(default_factory=list)

    def add(self, label: str, reports) -> None:
        self.theories += 1
        self.pairs += len(reports)
        self.agree += all(r.hansson_agrees for r in reports)
        self.forward += all(r.forward_holds for r in reports)
        self.bridge += all(not r.bridge_mismatches for r in reports)
        for r in reports:
            tag = f"{label}: input {r.input}, head {r.head}"
            if not r.ok:
                self.disagreements.append(tag)
            if r.converse_counterexample:
                self.converse.append(tag)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def candidate_pairs(theory: Theory):
    """Inputs and heads drawn from the theory: TOP, literals, rule bodies and heads."""
    lits = [f for p in theory.vocab for f in (Atom(p), Not(Atom(p)))]
    inputs = list(dict.fromkeys([TOP, *lits, *(r.body for r in theory.r_oblig)]))
    heads = list(dict.fromkeys([*lits, *(r.head for r in theory.r_oblig)]))
    return [(a, x) for a in inputs if pl_satisfiable([a]) for x in heads]


def cmd_crosscheck(args) -> int:
    tally = CrosscheckTally()
    if args.file:
        tf = _load(args)
        if tf.theory.r_norm:
            raise Precondition("crosscheck requires a theory without defaults")
        theory = tf.theory
        tally.add(args.file, [faithfulness_check(theory, a, x) for a, x in candidate_pairs(theory)])
        header = f"file {args.file}: {tally.pairs} (input, head) pairs"
    else:
        if args.seed is None:
            raise Precondition("--random requires --seed")
        if args.random < 1 or not 1 <= args.rules <= MAX_OBLIGATIONS:
            raise Precondition(f"--random must be positive and --rules between 1 and {MAX_OBLIGATIONS}")
        try:
            vocab = vocabulary(args.atoms)
        except ValueError as exc:
            raise Precondition(str(exc)) from None
        rng = seeded(args.seed)
        for i in range(args.random):
            theory = Theory((), (), random_rules(rng, vocab, OBLIGATION, args.rules, 1), vocab)
            reports = [faithfulness_check(theory, conjunction(rng, vocab, 0, 2), random_boolean(rng, vocab))
                       for _ in range(PAIRS_PER_THEORY)]
            tally.add(f"theory {i} {{{', '.join(map(str, theory.r_oblig))}}}", reports)
        header = (f"seed {args.seed}: {tally.theories} theories over {args.atoms} atoms, "
                  f"up to {args.rules} norms, {tally.pairs} (input, head) pairs")
    n = tally.theories
    payload = {
        "summary": header,
        "hansson_fullmeet_agreement": [tally.agree, n],
        "exists_forall_forward": [tally.forward, n],
        "bridge": [tally.bridge, n],
        "failures": tally.disagreements,
        "converse_gaps": tally.converse,
    }
    lines = [
        header,
        f"Hansson vs full meet agreement: {tally.agree}/{n}",
        f"full meet implies exists-forall obligation: {tally.forward}/{n}",
        f"best input-worlds match maxfamily materializations: {tally.bridge}/{n}",
        *(f"  FAIL {d}" for d in tally.disagreements),
        f"converse gaps (informative, not failures): {len(tally.converse)}",
        *(f"  {c}" for c in tally.converse[:args.show]),
    ]
    if len(tally.converse) > args.show:
        lines.append(f"  ... {len(tally.converse) - args.show} more")
    _emit(args, payload, lines)
    return EXIT_OK if tally.ok else EXIT_NOT_ENTAILED


# -- entry point -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bipref",
        description="Defeasible conditional obligations over normality and ideality orderings.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, file_required=True):
        p = sub.add_parser(name, help=help_text)
        if file_required:
            p.add_argument("file", help="theory file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.set_defaults(func=func)
        return p

    add("check", cmd_check, "coherence, defeat graph, LM-sequence and ranked partition")
    p = add("rank", cmd_rank, "world table ordered by normality")
    p.add_argument("--method", choices=("lex", "fdis"), default="lex")
    p = add("query", cmd_query, "decide the file's queries")
    p.add_argument("--mode", choices=("replete", "all-models"), default="replete")
    p = add("iol", cmd_iol, "input/output logic verdict for one input and head")
    p.add_argument("--input", required=True, help="Boolean input formula")
    p.add_argument("--head", required=True, help="Boolean output formula")
    p = add("crosscheck", cmd_crosscheck, "compare the I/O and preference engines", file_required=False)
    p.add_argument("file", nargs="?", help="theory file without defaults")
    p.add_argument("--random", type=int, metavar="N", help="number of random theories")
    p.add_argument("--atoms", type=int, default=3)
    p.add_argument("--rules", type=int, default=3)
    p.add_argument("--seed", type=int)
    p.add_argument("--show", type=int, default=5, help="converse gaps to list")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "crosscheck" and (args.file is None) == (args.random is None):
        parser.error("crosscheck takes either a file or --random N")
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FormulaSyntaxError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except IncoherentDefaultsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCOHERENT
    except (ResourceLimit, VocabularyOverflow) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (Precondition, InconsistentInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
