# coding: utf-8

# # Admissible index pairs and the dual basis
#
# A pair (t, i) is admissible when |t| is even and the first i entries of t
# are even. The basis polynomial for (t, i) has D^t equal to 1 at s_i and
# every other admissible datum equal to 0.

# In[1]:

from lidstone import enumerate_index_set, lidstone_basis, univariate_lidstone

pairs = enumerate_index_set(2, 2)
print(len(pairs), "admissible pairs with |t| <= 2 in two variables")
for p in pairs:
    print(tuple(p.t), p.i)


# One variable gives back the classical polynomials.

# In[2]:

for k in range(4):
    print(k, univariate_lidstone(k))


# Two variables. Note that some elements have degree below |t| + 1.

# In[3]:

for p in pairs:
    elem = lidstone_basis(2, p.t, p.i)
    print(tuple(p.t), p.i, "degree", elem.degree, ":", elem.poly)
