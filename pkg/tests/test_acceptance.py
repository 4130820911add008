"""Acceptance criteria, one test each, with their runtime limits.

Run with pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly: ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import sys
import time
from contextlib import contextmanager
from math import gcd

import numpy as np
import pytest

from finitecoh.cohomology import (
    Cochain,
    cohomology_group,
    connecting,
    cup,
    cup_connecting_signs,
    long_exact_sequence,
)
from finitecoh.gmodules import (
    augmentation_sequence,
    cartier_pairing,
    diagonal_sequence,
    regular_module,
    verify_duality,
)
from finitecoh.groups import catalog, get_group
from finitecoh.harness import (
    DEFAULT_N_LIST,
    SweepConfig,
    _dd_suite,
    _infres_suite,
    _section_suite,
    _snf_suite,
    certify_propdata,
    infres_pairs,
)
from finitecoh.sha import propdata_certificate, sha1_omega

# criterion number -> (title, passed, elapsed seconds, limit seconds or None)
RESULTS: dict[int, tuple[str, bool, float, float | None]] = {}


@contextmanager
def criterion(number: int, title: str, limit: float | None):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        RESULTS[number] = (title, False, time.perf_counter() - t0, limit)
        raise
    elapsed = time.perf_counter() - t0
    within = limit is None or elapsed < limit
    RESULTS[number] = (title, within, elapsed, limit)
    assert within, f"criterion {number} took {elapsed:.1f}s, limit {limit}s"


def summary_lines() -> list[str]:
    lines = []
    for number in sorted(RESULTS):
        title, ok, elapsed, limit = RESULTS[number]
        bound = f" (limit {limit:g}s)" if limit is not None else ""
        lines.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  {elapsed:.2f}s{bound}")
    return lines


def _dprime(G, n, m):
    S = augmentation_sequence(G, n)
    H0 = cohomology_group(G, S.C, 0)
    return connecting(S, H0.class_of(Cochain(S.C, 0, [[m % n]])))


def test_criterion_1_v4_certificate():
    with criterion(1, "H' kernel for V4, n = 4", 1.0):
        G = get_group("V4")
        cert = propdata_certificate(G, 4)
        assert (cert.N, cert.Nprime) == (4, 2)
        assert cert.sha_invariants.invariant_factors == (2,)
        assert cert.ok
        sha = sha1_omega(G, augmentation_sequence(G, 4).A)
        y = _dprime(G, 4, 2)
        assert sha.contains(y) and not y.is_zero() and y.order == sha.order == 2


def test_criterion_2_propdata_sweep():
    with criterion(2, "H' kernel sweep, order <= 12, n in {2,3,4,6,8,12}", 300.0):
        config = SweepConfig(max_group_order=12, n_list=DEFAULT_N_LIST, jobs=1)
        cells = config.cells()
        assert len(cells) >= 60
        report = certify_propdata(config)
        assert len(report.records) == len(cells)
        for rec in report.records:
            d = rec["details"]
            G = get_group(rec["inputs"]["group"])
            n = rec["inputs"]["n"]
            assert rec["outcome"] == "PASS", rec
            assert d["expected_order"] == gcd(n, G.size) // gcd(n, G.exponent)
            assert int(np.prod(d["sha_invariants"])) == d["expected_order"]
            assert len(d["sha_invariants"]) <= 1


def test_criterion_3_shapiro_vanishing():
    with criterion(3, "H^r(G, (Z/n)[G]) = 0, r in {1,2}, order <= 8", 120.0):
        for G in catalog(8).values():
            for n in (2, 3, 4, 8):
                for r in (1, 2):
                    H = cohomology_group(G, regular_module(G, n), r)
                    assert H.order == 1, (G.name, n, r, H.invariant_factors)


def test_criterion_4_long_exact_sequences():
    with criterion(4, "long exact sequences exact through degree 2, order <= 8", None):
        for G in catalog(8).values():
            for n in (2, 4):
                for S in (diagonal_sequence(G, n), augmentation_sequence(G, n)):
                    les = long_exact_sequence(S, 2)
                    assert les.exact, (G.name, n, les.to_json())
                    assert len(les.checks) == 9


def test_criterion_5_duality():
    with criterion(5, "dual of the diagonal sequence is the augmentation sequence, order <= 12", None):
        for G in catalog(12).values():
            for n in (2, 3, 4, 8):
                rep = verify_duality(G, n)
                assert rep.ok, (G.name, n, rep.failure)
                if G.size > 1:
                    assert set(rep.isomorphisms) == {"phi_A", "phi_B", "phi_C"}


def test_criterion_6_cup_connecting():
    with criterion(6, "cup/connecting compatibility for V4, n = 4", 120.0):
        G, n = get_group("V4"), 4
        D = diagonal_sequence(G, n)
        P = cartier_pairing(G, n)
        for r in (1, 2):
            check = cup_connecting_signs(G, n, r)
            assert check.signs and not check.failures
            eps = check.signs[0]
            HC = cohomology_group(G, D.C, r)
            assert HC.order > 1
            for x in HC.gens():
                dx = connecting(D, x)
                for m in range(n):
                    assert cup(x, _dprime(G, n, m), P) == dx * (eps * m)
                assert cup(x, _dprime(G, n, 2), P) in (dx * 2, dx * -2)


def test_criterion_7_property_suites():
    with criterion(7, "property suites: SNF, d o d, sections, inflation-restriction", 60.0):
        groups = [G for G in catalog(8).values() if G.size > 1]
        ok, info = _snf_suite(np.random.default_rng([7, 0]), 200)
        assert ok, info
        ok, info = _dd_suite(np.random.default_rng([7, 1]), groups, 100)
        assert ok, info
        ok, info = _section_suite(np.random.default_rng([7, 2]), groups, 20)
        assert ok, info
        pairs = infres_pairs(10)
        assert len(pairs) == 10
        ok, info = _infres_suite(pairs)
        assert ok, info


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
