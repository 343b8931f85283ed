"""Comparing partitions whose node sets differ.

Plain NMI needs both partitions to cover the same nodes.  UNMI scores the
union (nodes missing on one side sit in a placeholder group there), INMI
scores only the nodes the two partitions share.
"""
from tempcomm import augment_union, inmi, nmi, unmi

# %% same nodes: all three agree
a = {"ann": 0, "bob": 0, "cat": 1, "dan": 1}
b = {"ann": 0, "bob": 0, "cat": 1, "dan": 0}
print("same nodes   nmi=%.4f unmi=%.4f inmi=%.4f" % (nmi(a, b), unmi(a, b), inmi(a, b)))

# %% dan leaves, eve arrives in dan's old group
c = {"ann": 0, "bob": 0, "cat": 1, "eve": 1}
aug = augment_union(a, c)
print("augmented left :", aug.labels1)
print("augmented right:", aug.labels2)
print("turnover     unmi=%.4f inmi=%.4f" % (unmi(a, c), inmi(a, c)))

# %% the shared nodes keep their grouping, so INMI stays at 1 while UNMI
# drops as more of the network is replaced
base = {i: i % 4 for i in range(40)}
for swapped in (0, 5, 10, 20):
    later = {i: i % 4 for i in range(swapped, 40 + swapped)}
    print(f"replaced {swapped:2d}/40  unmi={unmi(base, later):.3f} inmi={inmi(base, later):.3f}")
