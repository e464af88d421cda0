"""An instance the certificate searches cannot settle.

The update [[0, 2], [1, 0]] has characteristic polynomial X^2 - 2.  The only
points where a Gordan certificate could live are roots of that polynomial,
and none is rational, so the NO side has nothing to try.  No positive
element of low degree exists either.  The procedure answers INCONCLUSIVE
and reports where the interval check got stuck (close to sqrt 2).
"""

from loopterm.dsl import parse_loop_dsl
from loopterm.positivity import SearchConfig
from loopterm.termination import decide_nontermination

sys = parse_loop_dsl("while x1 >= 0 do { x := [0,2;1,0] * x }")
dec = decide_nontermination(sys, SearchConfig(max_degree=6))
print("decision:", dec.answer)
for I, diag in dec.trace[-1].positivity.diagnostics.items():
    print(f"subset {I}:")
    print("  positive-element search tried degrees up to", diag["max_degree_tried"])
    print("  rational Gordan candidates:", diag["candidate_points"] or "none")
    print("  box check:", diag["box_check"], "-", diag["box_detail"])
