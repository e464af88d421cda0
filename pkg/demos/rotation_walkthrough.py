"""Why a quarter-turn rotation cannot run forever inside a half-plane.

The loop is ``while x1 >= 0 do x := R x`` with R the rotation by 90 degrees.
Brute force: v and R^2 v = -v must both satisfy x1 >= 0, and so must R v
and R^3 v, which pins v to the origin.  The decision procedure reaches the
same conclusion through the kernel module: X^2 + 1 is a positive element,
so the dual orbit cone is not salient, and the invariant closure of the
extracted vector is the whole plane.
"""

from loopterm.dsl import parse_loop_dsl
from loopterm.kermod import kernel_module_basis
from loopterm.oracle import oracle_no_witness, truncated_orbit_generators
from loopterm.polyring import pv_str
from loopterm.termination import decide_nontermination

sys = parse_loop_dsl("while x1 >= 0 do { x := [0,-1;1,0] * x }")

print("orbit of the guard normal under R^T (words of length <= 3):")
for v in truncated_orbit_generators(sys, 3):
    print("  ", [str(x) for x in v])

basis = kernel_module_basis(sys)
print("kernel module generators:", [pv_str(g) for g in basis.generators])

dec = decide_nontermination(sys)
top = dec.trace[0]
print("positive element:", pv_str(top.positivity.certificate.element))
print("extracted w:", [str(x) for x in top.w], " invariant closure has dimension", top.subspace.dim)
print("decision:", dec.answer)

for L in range(5):
    print(f"brute-force cone at depth {L}:", oracle_no_witness(sys, L) or "not yet {0}")
