"""U(3): sigma (x) conj(sigma) for the fundamental and the adjoint, by Monte Carlo characters.

Prints each constituent with its multiplicity, the squared norm of the
projected highest tensor, and the dimension of its invariants under the
stabilizer of the highest weight.
"""
from flagq import Weight, build_irrep, mc_rule
from flagq.berezin import decompose, invariant_dimension_estimate
from flagq.conical import levi_blocks

rule = mc_rule(3, 100000, seed=1)
for lam in (Weight((1, 0)), Weight((1, 1))):
    rep = build_irrep(lam)
    blocks = levi_blocks(lam)
    print(f"lambda = {lam.label()}  d = {rep.dim}  L blocks = {blocks}")
    for c in decompose(rep, rule):
        pi = build_irrep(c.pi)
        inv, s = invariant_dimension_estimate(pi, blocks, count=40000, seed=2)
        print(f"   {c.label:>14s}  d_pi = {c.dim_pi:2d}  m = {c.multiplicity}"
              f"  ||(v x v)^pi||^2 = {c.norm2:.4f}  dim H^L = {inv.real:.3f} +- {s:.3f}")
