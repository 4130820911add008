"""Tabulate the sign relating cup products with the two connecting maps.

For x in H^r(G, H) and m in Z/n the relation is x cup d'(m) = e * m * d(x).
The script prints, for each small group and degree, the signs e that fit
every x and m.  When H^{r+1}(G, Z/n) is killed by 2 both signs fit.
"""
from finitecoh import catalog, cup_connecting_signs

n = 4
print(f"n = {n}")
print(f"{'group':10} {'degree':>6}  signs")
for G in catalog(8).values():
    if G.size == 1:
        continue
    for r in (1, 2):
        check = cup_connecting_signs(G, n, r)
        signs = ", ".join(f"{e:+d}" for e in check.signs) or "none"
        print(f"{G.name:10} {r:>6}  {signs}")
