# coding: utf-8

# # Growth estimates for sin(pi z)
#
# sin(pi z) has type exactly pi along the real axis, and all of its
# admissible data at 0 and 1 vanish. It is the extremal case.

# In[1]:

import math

from lidstone.exprcalc import parse_expression
from lidstone.growth import estimate_directional_type, polya_threshold, sup_norm

f = parse_expression("sin(pi*x1)")
d = estimate_directional_type(f, [1])
print("type", d.type, "vs pi", math.pi, "order", d.order)


# In[2]:

for r in (1, 5, 10):
    print(r, sup_norm(f, r, n=1).value, math.sinh(math.pi * r))


# Threshold beyond which the tail bound drops below 1.

# In[3]:

for A in (0.0, 0.5, 1.0, 2.0):
    print(A, [polya_threshold(A, eta) for eta in (0.5, 0.1, 0.01)])
