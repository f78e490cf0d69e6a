"""The Hansson-style obligation and constrained input/output logic agree.

Each norm is rewritten so its body also denies the bodies of the norms
that override it. The maximal subsets consistent with the input are then
collected, and a head counts as obligatory when every such subset outputs
it. The preference side asks whether the best input-worlds all satisfy the head.
"""

from pathlib import Path

from bipref import faithfulness_check, load_theory, parse_boolean
from bipref.cli import candidate_pairs

DIR = Path(__file__).resolve().parent.parent / "theories"

for name in ("asparagus_norms.thy", "conflict.thy", "gentle_murder.thy"):
    theory = load_theory(DIR / name).theory
    print(f"== {name}")
    reports = [faithfulness_check(theory, a, x) for a, x in candidate_pairs(theory)]
    agree = sum(r.hansson_agrees for r in reports)
    gaps = [r for r in reports if r.converse_counterexample]
    print(f"   {agree}/{len(reports)} (input, head) pairs agree")
    for r in gaps[:2]:
        print(f"   O({r.head} | {r.input}) holds but {r.head} is not in the full meet")

rep = faithfulness_check(load_theory(DIR / "asparagus_norms.thy").theory, parse_boolean("a"),
                         parse_boolean("f"))
print("\nasparagus, input a, head f:")
print("   rewritten norms:", ", ".join(map(str, rep.norms)))
print("   maxfamily:", [sorted(h) for h in rep.family])
print("   full meet:", rep.iol_verdict, " Hansson obligation:", rep.hansson_verdict)
