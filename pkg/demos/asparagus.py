"""Eating asparagus with your fingers.

Two defaults say asparagus is unusual (and rotten food usually is
asparagus). Three norms: no fingers, fingers for asparagus, wear a napkin.
The script prints both orderings over all sixteen worlds and then decides
the four classic questions.
"""

from pathlib import Path

from bipref import build_model, entails, load_theory

HERE = Path(__file__).resolve().parent
tf = load_theory(HERE.parent / "theories" / "asparagus.thy")
model = build_model(tf.theory)

print("worlds by normality class, with the norms each one violates\n")
rows = dict(zip(model.worlds.tolist(), model.rows()))
for w in sorted(rows, key=lambda w: (model.nlevel[w], w)):
    row = rows[w]
    violated = ", ".join(row["violated"]) or "nothing"
    print(f"  class {model.nlevel[w]}  {row['label']:<14} tuple {tuple(row['tuple'])}  violates {violated}")

print("\nO(f | a) overrides O(~f): at a & f the general prohibition is excused.\n")
for text, q in zip(tf.query_texts, tf.queries):
    res = entails(tf.theory, q)
    print(f"  {text:<10} {res.verdict:<4} witness {res.witness}")

print("""
O(~f) survives although asparagus worlds exist: only the most normal worlds
(no asparagus) are compared, so the general prohibition does not drown.
O(~a) fails: the best asparagus world (a f n) violates nothing, so being
served asparagus is not itself forbidden.""")

flat = load_theory(HERE.parent / "theories" / "drowning_flat.thy")
res = entails(flat.theory, flat.queries[0])
print(f"\nWithout the defaults every world counts and O(~f) comes out {res.verdict!r} "
      f"(the world {res.witness} matches every compliant world).")
