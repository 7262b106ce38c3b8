# coding: utf-8

# # Test functions with vanishing or integral data

# In[1]:

from fractions import Fraction as Q

from lidstone.exprcalc import ExampleSpec, build_example, verify_data_property

f = build_example(ExampleSpec(1, 2, (0, 0), (1, Q(3, 2))))
print(f.expr)


# Every even order derivative vanishes at every point, exactly.

# In[2]:

rep = verify_data_property(f.expr, f.frame, 6, restrict_to_T=False)
print(rep.passed, len(rep.entries))


# Cross-check with Cauchy quadrature, which never looks at the formula.

# In[3]:

num = verify_data_property(f.expr, f.frame, 6, restrict_to_T=False, method="contour")
print(num.passed, max(abs(complex(e.value.value)) for e in num.entries))


# The third family has integer data in one variable but grows too fast.

# In[4]:

from lidstone.growth import check_growth_condition

g = build_example(ExampleSpec(3, 1, (0,), (1,)))
print(verify_data_property(g.expr, g.frame, 8, predicate="integer", restrict_to_T=False).passed)
print(check_growth_condition(g.expr, g.frame).verdict)
