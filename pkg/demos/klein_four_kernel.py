"""Walk through the H' kernel for the Klein four-group with n = 4.

H' is the augmentation kernel of (Z/4)[G].  The script computes H^1(G, H'),
shows it is generated by the image of 1 under the connecting map from
H^0(G, Z/4), restricts every class to the cyclic subgroups, and reads off
the classes that die on all of them.
"""
from math import gcd

from finitecoh import (
    Cochain,
    augmentation_sequence,
    cohomology_group,
    connecting,
    cyclic_subgroups,
    get_group,
    restrict,
    sha1_omega,
)

G, n = get_group("V4"), 4
S = augmentation_sequence(G, n)
H1 = cohomology_group(G, S.A, 1)
print(f"G = {G.name}, |G| = {G.size}, exponent {G.exponent}, n = {n}")
print(f"H^1(G, H') = {H1.presentation}")

H0 = cohomology_group(G, S.C, 0)
for m in range(n):
    y = connecting(S, H0.class_of(Cochain(S.C, 0, [[m]])))
    print(f"  d'({m}) has coordinates {y.coords}, order {y.order}")

subs = [C for C in cyclic_subgroups(G) if C.order > 1]
print("restriction of each class to the cyclic subgroups:")
for x in H1.elements():
    orders = [restrict(x, C).order for C in subs]
    print(f"  class {x.coords}: orders {orders}{'  <- dies everywhere' if set(orders) == {1} else ''}")

sha = sha1_omega(G, S.A)
N, Np = gcd(n, G.size), gcd(n, G.exponent)
print(f"kernel = {sha.subgroup}, closed form N/N' = {N}/{Np} = {N // Np}")
