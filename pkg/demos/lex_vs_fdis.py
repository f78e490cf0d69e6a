"""Two ways of ranking worlds by how exceptional they are.

Defaults: food is normally not asparagus; rotten food is normally asparagus.
Counting falsified defaults (f-DIS) puts rotten non-asparagus on a par with
asparagus. The lexicographic ranking weighs the more specific default first
and separates them.
"""

from pathlib import Path

from bipref import build_model, load_theory
from bipref.normality import fdis_count

tf = load_theory(Path(__file__).resolve().parent.parent / "theories" / "exception_normality.thy")
model = build_model(tf.theory)

print("LM-sequence:")
for i, level in enumerate(model.seq.levels):
    print(f"  E{i}: {[str(tf.theory.r_norm[k]) for k in sorted(level)]}")

print("\nworld      f-DIS  LEX tuple  LEX class")
for w in sorted(model.worlds, key=lambda w: (model.nlevel[w], w)):
    n = fdis_count(model.valuation(w), tf.theory.r_norm)
    print(f"  {model.label(w):<8} {n:>3}    {tuple(model.tuples[w].tolist())}     {model.nlevel[w]}")

print("\nf-DIS ties '-a r' with the asparagus worlds; LEX ranks it last, since it")
print("falsifies the more specific default r => a.")
