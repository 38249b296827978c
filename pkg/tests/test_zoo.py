import numpy as np
import pytest

from fusionseed import criterion as cr, modrep as mr, zoo
from fusionseed.errors import HeavyComputeDisabled, InvalidParams
from fusionseed.grp import class_GG, o_pprime


def test_sl2p_simple_modules():
    g, v = zoo.sl2p(5, ("Vi", 4))
    assert v.dim == 4
    rep = class_GG(g)
    assert mr.jordan_profile(v, rep.sylow.u) == [4]
    assert rep.status == "in_GG"
    g3, v3 = zoo.sl2p(5, ("Vi", 3))
    assert v3.dim == 3 and g3.order() == 480   # projective group x scalars
    with pytest.raises(InvalidParams):
        zoo.sl2p(5, ("Vi", 6))


def test_sl2p_projective_cover():
    g, v = zoo.sl2p(5, ("V1p21",))
    assert v.dim == 5
    rep = class_GG(g)
    assert mr.jordan_profile(v, rep.sylow.u) == [5]
    assert zoo.socle_min_dim(v) == 1 and zoo.top_min_dim(v) == 1
    assert mr.is_indecomposable(v, rep.sylow)


def test_sl2p_dim_p_plus_1_socles():
    for i in (2, 3, 4):
        g, v = zoo.sl2p(5, ("Vji", 6 - i, i))
        assert v.dim == 6
        assert zoo.socle_min_dim(v) == i
        assert zoo.top_min_dim(v) == 6 - i
        rep = class_GG(g)
        assert rep.status == "in_GG"
        assert mr.is_minimally_active(v, rep.sylow)


def test_sl2p_dim_p_minus_1():
    g, vs = zoo.sl2p(5, ("Vext_pm1", "sub"))
    assert vs.dim == 4 and zoo.socle_min_dim(vs) == 1
    g2, vq = zoo.sl2p(5, ("Vext_pm1", "quot"))
    assert vq.dim == 4 and zoo.socle_min_dim(vq) == 3
    for v in (vs, vq):
        rep = class_GG(v.group)
        assert mr.is_minimally_active(v, rep.sylow)
        assert mr.is_indecomposable(v, rep.sylow)


def test_symmetric_families():
    g, v = zoo.symmetric(5, 5, "deleted", "S", 1)
    assert v.dim == 3
    rep = class_GG(g)
    assert mr.is_minimally_active(v, rep.sylow)
    assert mr.is_indecomposable(v, rep.sylow)
    g, v = zoo.symmetric(7, 8, "deleted", "S", 1)
    assert v.dim == 7
    g, v = zoo.symmetric(5, 5, "full", "S", 1)
    assert v.dim == 5
    assert mr.is_indecomposable(v, class_GG(g).sylow)   # type 1/W/1
    with pytest.raises(InvalidParams):
        zoo.symmetric(5, 11, "deleted")


def test_symmetric_sub_quot_types():
    g, v = zoo.symmetric(5, 5, "sub", "S", 1)     # zero-sum, type W/1
    assert v.dim == 4 and zoo.socle_min_dim(v) == 1
    g, v = zoo.symmetric(5, 5, "quot", "S", 1)    # mod constants, type 1/W
    assert v.dim == 4 and zoo.socle_min_dim(v) == 3


def test_monomial_construction():
    g, v = zoo.monomial(5, 5, 4, "full", "S")
    assert g.order() == 122880   # |C_4 wr S_5|
    with pytest.raises(InvalidParams):
        zoo.monomial(5, 5, 1, "full", "S")
    with pytest.raises(InvalidParams):
        zoo.monomial(5, 5, 3, "full", "S")  # 3 does not divide 4


def test_monomial_pgl2():
    g, v = zoo.monomial(5, 6, 2, "trivial", "PGL2")
    k = zoo.monomial_k_order(5, 6, 2, "trivial")
    assert g.order() == 120 * k
    # the permutation part acts 2-transitively on the diagonal characters:
    # count orbits on ordered distinct pairs via the permutation generators
    perms = []
    for gen in g.generators:
        a = gen.a
        if (a != 0).sum() == 6 and ((a == 1).sum() == 6):
            img = [int(np.nonzero(a[:, j])[0][0]) for j in range(6)]
            perms.append(img)
    pairs = {(i, j) for i in range(6) for j in range(6) if i != j}
    seen = set()
    orbit = [(0, 1)]
    seen.add((0, 1))
    while orbit:
        cur = orbit.pop()
        for img in perms:
            nxt = (img[cur[0]], img[cur[1]])
            if nxt not in seen:
                seen.add(nxt)
                orbit.append(nxt)
    assert seen == pairs


def test_monomial_k_characters_distinct():
    # V restricted to the diagonal part splits into n pairwise distinct
    # characters (the coordinate characters)
    g, v = zoo.monomial(5, 5, 4, "full", "S")
    diags = [gen.a.diagonal() for gen in g.generators
             if (gen.a == np.diag(gen.a.diagonal())).all()]
    n = 5
    for i in range(n):
        for j in range(i + 1, n):
            assert any(d[i] != d[j] for d in diags)


def test_extraspecial_p3():
    g, v = zoo.extraspecial(3)
    assert g.order() == 48
    rep = class_GG(g)
    assert mr.jordan_profile(v, rep.sylow.u) == [2]
    assert mr.is_minimally_active(v, rep.sylow)


def test_extraspecial_p5():
    g, v = zoo.extraspecial(5)
    assert g.order() == 46080    # |C_4 o 2^{1+4}| * |S_6|
    gg = class_GG(g)
    assert gg.status == "in_GG"
    opp = o_pprime(g, gg.sylow)
    # the odd-order part has the full symmetric-group quotient
    assert g.order() // 64 == 720


def test_extraspecial_p7_gate():
    with pytest.raises(HeavyComputeDisabled):
        zoo.extraspecial(7)


def test_gl23_two_two_module():
    g, v = zoo.build_family(zoo.FamilySpec("gl2_3", {"p": 3}))
    assert v.dim == 4 and g.order() == 48
    rep = cr.evaluate(v)
    assert rep.passes
    assert rep.mu_report["recognized"]["name"] == "Delta_-1"
    assert all(x["verdict"] == "exotic" for x in rep.exotic)


def test_corpus_size_and_metadata():
    entries = zoo.table_corpus()
    assert len([e for e in entries if e.instantiable]) >= 16
    assert any(not e.instantiable for e in entries)
    # the non-realizable-at-desk-scale rows stay as metadata
    meta = [e for e in entries if not e.instantiable]
    assert any("2F4" in str(e.params) for e in meta)


def test_emit_instance_roundtrip():
    spec = [e for e in zoo.table_corpus() if e.tag == "sn_deleted"][0]
    payload = zoo.emit_instance(spec)
    assert payload["p"] == 5 and payload["dim"] == 3
    assert payload["family"]["tag"] == "sn_deleted"
    assert all(len(gen) == 9 for gen in payload["generators"])


def test_zoo_modules_minimally_active_and_indecomposable():
    """Every instantiable zoo module is minimally active; the criterion's
    indecomposability oracle agrees with the splitter."""
    mods = []
    mods.append(zoo.sl2p(5, ("Vi", 3))[1])
    mods.append(zoo.sl2p(5, ("Vi", 4))[1])
    mods.append(zoo.sl2p(5, ("Vji", 2, 4))[1])
    mods.append(zoo.symmetric(5, 5, "deleted", "S", 4)[1])
    mods.append(zoo.symmetric(5, 6, "deleted", "S", 1)[1])
    mods.append(zoo.extraspecial(5)[1])
    for v in mods:
        rep = class_GG(v.group)
        assert mr.is_minimally_active(v, rep.sylow)
        assert mr.is_indecomposable(v, rep.sylow)
        # dim Z0 = 1 and m = min(dim, p) on minimally active modules
        cs = mr.canonical_subspaces(v, rep.sylow)
        assert cs.Z0.dim == 1
        assert cs.m == min(v.dim, v.p.p)


def test_ext_minact_inheritance():
    """Indecomposable summands of dim <= p+1 of modules with minimally
    active constituents stay minimally active."""
    nat = zoo.sl2p(5, ("Vi", 2))[1]
    big = mr.tensor(nat, mr.sym_power(nat, 2))   # dim 6
    for w, _ in mr.split_summands(big):
        if w.dim <= 6:
            rep = class_GG(w.group)
            assert mr.is_minimally_active(w, rep.sylow)


def test_monomial_other_permutation_parts():
    # affine part at n = p: the diagonal subgroup keeps U non-normal
    g, v = zoo.monomial(5, 5, 4, "trivial", "CpCp-1")
    k = zoo.monomial_k_order(5, 5, 4, "trivial")
    assert g.order() == k * 20
    rep = class_GG(g)
    assert rep.status == "in_GG"
    # alternating part at n = p + 2
    g, v = zoo.monomial(5, 7, 2, "trivial", "A")
    k = zoo.monomial_k_order(5, 7, 2, "trivial")
    assert g.order() == k * 2520


def test_strongly_closed_example_constructors():
    g, v = zoo.strongly_closed_example(5, "a")
    assert g.order() == 240 and v.dim == 5
    g, v = zoo.strongly_closed_example(5, "c")
    assert v.dim == 4
    rep = cr.evaluate(v)
    assert rep.passes and "d3" in rep.cases


def test_mu_law_helper():
    assert zoo.mu_law_holds(5)
