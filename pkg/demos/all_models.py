"""Canonical-model entailment versus entailment over every model.

The canonical model contains every valuation, so it realizes every
consistent formula. Quantifying over all nonempty sets of valuations
instead also admits small models that lack some worlds. This is stricter,
and feasible only for a handful of atoms.
"""

from bipref import ALL_MODELS, REPLETE, Theory, entails, parse_query, parse_rule

theory = Theory((), (), (parse_rule("O(x)"), parse_rule("O(~x)")))
for text in ("<>x", "O(x)", "[] (x | ~x)", "O(y)"):
    q = parse_query(text)
    canonical = entails(theory, q, REPLETE)
    every = entails(theory, q, ALL_MODELS)
    line = f"{text:<12} canonical: {canonical.verdict:<4} all models: {every.verdict}"
    if every.countermodel:
        line += f"   countermodel worlds {{{'; '.join(every.countermodel)}}}"
    print(line)
