#!/usr/bin/env python3
"""Smoke test for the scdforge_py extension module.

Build the module and point PYTHONPATH at it first; see the repository README
for the two-line recipe.
"""

import scdforge_py as scd


def main() -> None:
    ids = [entry_id for entry_id, _ in scd.catalog_entries()]
    assert "L3" in ids and "Pt" in ids, ids

    # q-binomial oracle.
    assert scd.q_binomial(2, 2) == [1, 1, 2, 1, 1]
    assert scd.q_binomial(3, 2) == [1, 1, 2, 2, 2, 1, 1]

    # Exact discretization round-trips through the verifier.
    l3 = scd.Decomposition.from_catalog("L3")
    chains = l3.discretize(4)
    report = l3.verify(chains)
    assert report["ok"], report
    assert len(chains["chains"]) == max(l3.rank_profile(4))
    assert l3.validate([1, 2, 3], seed=7)

    # Condition tables: L(3) passes everything, L(5) has documented failures.
    assert all(row["strong_ok"] and row["weak_ok"] for row in l3.check())
    l5 = scd.Decomposition.from_catalog("L5")
    assert any(not row["strong_ok"] for row in l5.check())
    assert any(not row["weak_ok"] for row in l5.check())

    # Covering chains in L(5, 27).
    cover = l5.cover(1)
    assert cover["n"] == 27
    covered = {tuple(27 * x for x in p) for c in cover["chains"] for p in map(tuple, [pt for pt in c["points"]])}
    for point in l5.lattice_points(1):
        assert tuple(27 * x for x in point) in covered

    # The deformed family: weak condition holds, asymptotic walk reports.
    pt = scd.Decomposition.from_catalog("Pt", t="2")
    assert all(row["weak_ok"] for row in pt.check())
    rep = pt.asymptotic(8)
    assert rep["total_points"] == rep["discarded_points"] + rep["trimmed_points"] + sum(
        len(c["points"]) for c in rep["kept"]["chains"]
    )

    # Volume statistics and rendering.
    stats = l3.stats()
    assert stats["volume"] == "1/6"
    assert stats["snake_total_matches_volume"]
    svg = scd.Decomposition.from_catalog("L2").render_svg()
    assert svg.startswith("<?xml")

    # Exhaustive search on a tiny poset.
    found = scd.search_scd("L2", 2)
    assert found is not None and len(found["chains"]) == 2

    print("scdforge_py smoke test: ok")


if __name__ == "__main__":
    main()
