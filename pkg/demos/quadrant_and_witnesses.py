"""Loops that do run forever, and what the procedure can say about them.

For diag(2, 1/2) on the positive quadrant every module element vanishes at
some positive point, so the dual orbit cone is salient and a separating
halfspace exists.  The procedure proves existence only; the point (1, 1) is
checked separately by simulation.  When the recursion ends at a one
dimensional base case, an explicit witness is pulled back instead.
"""

from loopterm.dsl import parse_loop_dsl
from loopterm.oracle import orbit_simulate
from loopterm.termination import decide_nontermination

quad = parse_loop_dsl("while x1 >= 0 && x2 >= 0 do { x := [2,0;0,1/2] * x }")
dec = decide_nontermination(quad)
print("quadrant:", dec.answer)
for I, cert in dec.trace[0].positivity.refutations.items():
    print(f"  subset {I}: Gordan point a={[str(x) for x in cert.point]} y={[str(x) for x in cert.dual]}")
print("  orbit of (1, 1) stays in the guard for 10 steps:", orbit_simulate((1, 1), quad, 10))

block = parse_loop_dsl("while x1 >= 0 && x3 >= 0 do { x := [0,-1,0;1,0,0;0,0,2] * x }")
dec = decide_nontermination(block)
print("rotation times doubling:", dec.answer)
for t, level in enumerate(dec.trace):
    print(f"  level {t}: dimension {level.dimension}, outcome {level.outcome}")
print("  pulled-back witness:", [str(x) for x in dec.witness])
print("  simulated to depth 12:", orbit_simulate(dec.witness, block, 12))
