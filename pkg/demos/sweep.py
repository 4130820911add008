"""Run the H' kernel sweep over the catalog and print the result table.

Each cell compares the kernel computed by linear algebra with the closed
form gcd(n, |G|) / gcd(n, exp G).  Pass a job count to use several cores.
"""
import sys

from finitecoh import SweepConfig, certify_propdata

jobs = int(sys.argv[1]) if len(sys.argv) > 1 else 1
report = certify_propdata(SweepConfig(jobs=jobs))
for rec in report.records:
    d = rec["details"]
    print(f"{rec['outcome']:5} {d['group_name']:10} n={d['n']:<3} N={d['N']:<3} N'={d['Nprime']:<3} "
          f"kernel={d['sha_invariants']} H^1={d['h1_invariants']}")
print(report.summary)
