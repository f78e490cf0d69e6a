"""Adding information can retract an obligation.

The smaller theory has the prohibition O(~f) and the fact that a
fingers-free asparagus meal is possible; it entails O(~f | a). The larger
theory adds the asparagus exception, and the conclusion is withdrawn.
"""

from pathlib import Path

from bipref import contained_in, entails, load_theory

DIR = Path(__file__).resolve().parent.parent / "theories"
weak = load_theory(DIR / "nonmono_weak.thy")
strong = load_theory(DIR / "nonmono_strong.thy")

print("smaller theory contained in larger:", contained_in(weak.theory, strong.theory))
for name, tf in (("smaller", weak), ("larger", strong)):
    res = entails(tf.theory, tf.queries[0])
    print(f"{name:>8}: {tf.query_texts[0]} -> {res.verdict} (witness {res.witness})")
