"""Concentration of h_1 and h_2 on SU(2).

h_1 is the Berezin kernel: its sup away from the identity coset decays
like (lambda+1) cos(theta0/2)^(2 lambda).  h_2 integrates to one exactly,
but the L1 norm of its modulus settles near 4/3.
"""
import numpy as np

from flagq import Weight, hk_integral, hk_l1_norm, su2_product_rule, sup_outside_neighborhood

for n in (2, 5, 10, 20, 40):
    lam = Weight((n,))
    sup1 = sup_outside_neighborhood(lam, 1, np.pi / 2)
    # the exact iterated integral is quadratic in the node count; keep it to small lambda
    integral = f"{hk_integral(lam, 2, su2_product_rule(2 * n)).real:.12f}" if n <= 10 else "-"
    l1 = hk_l1_norm(lam, 2)
    print(f"lambda_1={n:3d}  sup h_1 = {sup1:.3e}  int h_2 = {integral:>14s}  ||h_2||_1 = {l1:.4f}")
print(f"4/3 = {4 / 3:.4f}")
