# coding: utf-8

# # Rebuilding a polynomial from its admissible data

# In[1]:

import random
from fractions import Fraction as Q

from lidstone import AffinePointFrame, extract_data, reconstruct, reconstruct_general
from lidstone.polycore import random_poly

rng = random.Random(7)
p = random_poly(rng, 2, 4)
print("p =", p)


# Data at the canonical points 0, e_1, e_2 determine p.

# In[2]:

data = extract_data(p, max_norm=p.degree)
print(len(data.entries), "nonzero data")
print(reconstruct(data, p.degree) == p)


# The same works at any affinely independent rational frame, and the
# coefficients stay rational.

# In[3]:

frame = AffinePointFrame([[Q(1, 3), 0], [2, Q(1, 2)], [-1, 3]])
q = reconstruct_general(extract_data(p, frame, p.degree), p.degree)
print(q == p)
