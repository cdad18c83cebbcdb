"""Smoke tests for the python module: tables, twists, commutation, ledger."""

import twistlab as tl

A3 = dict(vertices=["v1", "v2", "v3"],
          edges=[("v1", "v2", 1, 1), ("v2", "v3", 1, 1)])


def make_a3():
    return tl.zigzag(A3["vertices"], A3["edges"], d=2)


def test_algebra_and_tables():
    alg = make_a3()
    assert alg.dimension == 10
    assert alg.cy_dimension == 2
    p1 = tl.projective(alg, "v1")
    p2 = tl.projective(alg, "v2")
    p3 = tl.projective(alg, "v3")
    assert tl.ext_table(p1, p1) == {0: 1, 2: 1}
    assert tl.ext_table(p1, p2) == {1: 1}
    assert tl.ext_table(p1, p3) == {}
    assert tl.is_spherical(p1, 2)
    assert tl.classify(p1, 2)["exceptional"]


def test_twist_and_membership():
    alg = make_a3()
    p1 = tl.projective(alg, "v1")
    p2 = tl.projective(alg, "v2")
    assert tl.is_isomorphic(tl.twist(p1, p1), tl.shift(p1, -1))
    assert tl.is_isomorphic(tl.inverse_twist(p1, tl.twist(p1, p2)), p2)
    member = tl.thick_membership(p1, tl.shift(p1, 3), 2)
    assert member["in_thick_subcategory"]
    assert member["filtration_shifts"] == [3]
    assert not tl.thick_membership(p1, p2, 2)["in_thick_subcategory"]


def test_commute_and_ktheory():
    alg = make_a3()
    p1 = tl.projective(alg, "v1")
    p2 = tl.projective(alg, "v2")
    p3 = tl.projective(alg, "v3")
    gens = [("P1", p1), ("P2", p2), ("P3", p3)]
    assert tl.commute_classify(p1, p3, gens)["kind"] == "COMMUTE_ORTHOGONAL"
    assert tl.commute_classify(p1, p2, gens)["kind"] == "NOT_COMMUTE"
    assert tl.commute_classify(p1, tl.shift(p1, 2), gens)["witness_shift"] == 2
    assert tl.gram_matrix(alg) == [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    assert tl.class_of(tl.shift(p1, 1)) == [-1, 0, 0]


def test_recover_and_ledger():
    alg = make_a3()
    p1 = tl.projective(alg, "v1")
    p3 = tl.projective(alg, "v3")
    m = tl.direct_sum(alg, [p1, p1, p3])
    rec = tl.recover_collection(m, 2, seed=1)
    assert rec["ok"]
    assert sorted(rec["multiplicities"]) == [1, 2]

    out = tl.run_ledger(
        "\n".join([
            "params r d r2",
            "assume d > 2",
            "assume r >= 1",
            "assume r2 >= 1",
            "entity F EH Ox",
            "ses S1: F -> EH -> Ox",
            "maxdeg 3",
            "fact hom(EH, EH) = r2",
            "fact hom(EH, Ox) = r2",
            "fact ext(EH, EH, i=1) = 0",
            "fact ext(EH, Ox, i>0) = 0",
            "fact ext(Ox, EH, i<d) = 0",
            "fact hom(Ox, Ox) = 1",
            "fact ext(Ox, Ox, i=1) = d",
            "map boundary(hom(F,F) -> ext1(Ox,F)) nonzero",
            "map hom(EH,EH) -> hom(EH,Ox) injective",
            "derive hom(F, F)",
            "derive ext1(F, F)",
        ]))
    assert out["hom(F,F)"]["exact"] and out["hom(F,F)"]["lo"] == "1"
    assert out["ext1(F,F)"]["exact"] and out["ext1(F,F)"]["lo"] == "d"
    assert any("hom(F,F) + d - 1" in line for line in out["ext1(F,F)"]["trace"])


def test_run_scenario():
    text = "\n".join([
        "field rationals",
        "cy 2",
        "graph {",
        "  vertices v1 v2",
        "  edge v1 v2 1 1",
        "}",
        "object P1 = proj v1",
        "expect spherical P1 = true",
        "expect table P1 P1 = { 0:1, 2:1 }",
    ])
    assert tl.run_scenario(text)
