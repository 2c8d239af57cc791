"""Ordered locale core: constructors, axiom checker with witnesses,
derived causal structure, order constructions."""

import random

import pytest

from ordloc import gen, lattice as L, olocale as O, ospace as S
from ordloc.errors import (
    AxiomVFailure,
    ConesDoNotPreserveJoins,
    NotAMonad,
)
from ordloc.lattice import bits, mask_of_iter

from conftest import grid


def pts(*ids):
    return mask_of_iter(ids)


@pytest.fixture(scope="module")
def b4():
    return L.frame_from_topology(2, [0, 1, 2, 3])


# -- constructors -------------------------------------------------------------------


def test_equality_order_cones(b4):
    eq = O.equality_order(b4)
    assert eq.up_map == list(b4.elements())
    assert eq.down_map == list(b4.elements())
    for u in b4.elements():
        for v in b4.elements():
            assert eq.related(u, v) == (u == v)


def test_inclusion_order_cones(b4):
    inc = O.inclusion_order(b4)
    for u in b4.elements():
        assert inc.down_map[u] == u
        assert inc.up_map[u] == b4.top
        for v in b4.elements():
            assert inc.related(u, v) == b4.leq(u, v)
    assert O.check_axiom(inc, "V").ok
    # nullary join breaks C-join: the future cone of bottom is the top
    rep = O.check_axiom(inc, "C-join")
    assert not rep.ok and rep.witness == (b4.bottom, b4.bottom)


def test_from_relation_saturates(b4):
    a, b = b4.id_of_mask(1), b4.id_of_mask(2)
    # relate the two atoms downward-crossing; join closure must add tops
    olx = O.ordered_locale_from_relation(b4, [(a, b)])
    assert olx.related(a, b)
    assert O.check_axiom(olx, "V").ok
    with pytest.raises(AxiomVFailure):
        O.ordered_locale_from_relation(b4, [(a, b), (b, a)], strict=True)


def test_from_monads_rejects_non_monads(b4):
    broken = O.ConePair(b4, [b4.bottom] * b4.m, list(b4.elements()))
    with pytest.raises(NotAMonad):
        broken.validate()


def test_from_relation_matches_induced(m22):
    loc = S.induced_locale(m22, "em")
    f = m22.frame
    pairs = [(u, v) for u in f.elements() for v in f.elements()
             if loc.related(u, v)]
    explicit = O.ordered_locale_from_relation(f, pairs)
    assert explicit.up_map == loc.up_map
    assert explicit.down_map == loc.down_map
    for u in f.elements():
        for v in f.elements():
            assert explicit.related(u, v) == loc.related(u, v)


# -- axiom counterexamples -------------------------------------------------------------


def test_lower_order_fails_empty(m33):
    low = S.induced_locale(m33, "lower")
    rep = O.check_axiom(low, "empty")
    assert not rep.ok
    assert low.up_map[low.frame.bottom] == low.frame.top
    assert O.revalidate(low, rep)
    par = O.check_axiom(low, "parallel")
    assert not par.ok and "empty" in par.note


def test_lower_order_satisfies_wedge(m22):
    low = S.induced_locale(m22, "lower")
    assert O.check_axiom(low, "wedge+").ok
    assert O.check_axiom(low, "wedge-").ok
    assert not O.check_axiom(low, "parallel").ok


def test_non_oc_fails_Fplus(non_oc):
    loc = S.induced_locale(non_oc, "em")
    rep = O.check_axiom(loc, "F+")
    assert not rep.ok
    f = non_oc.frame
    u, v = rep.witness
    assert f.mask_of(u) == pts(1, 2, 3) and f.mask_of(v) == pts(0)
    assert O.revalidate(loc, rep)
    # the stated computation: down(U) & V = {*}, down(U & up(V)) = empty
    assert f.mask_of(f.meet(loc.down_map[u], v)) == pts(0)
    assert loc.down_map[f.meet(u, loc.up_map[v])] == f.bottom


def test_two_speed_parallel_witness():
    ts = gen.suite_instance("two_speed_2x3")
    rep = O.check_axiom(ts, "parallel")
    assert not rep.ok
    assert O.revalidate(ts, rep)
    f = ts.frame
    masks = {f.mask_of(w) for w in rep.witness}
    lbl = {l: i for i, l in enumerate(f.labels)}
    assert masks == {1 << lbl["(0,2)"], 1 << lbl["(1,0)"]}


def test_wedge_equals_corder_plus_frobenius_small():
    # both routes computed and compared, on frames small enough for triples
    insts = [S.induced_locale(gen.suite_instance("bowtie"), "em"),
             S.induced_locale(gen.suite_instance("non_oc"), "em"),
             S.induced_locale(gen.suite_instance("chain3"), "em"),
             O.inclusion_order(L.frame_from_topology(2, [0, 1, 2, 3]))]
    for olx in insts:
        for sign in "+-":
            direct = _wedge_direct(olx, sign)
            via = (O.check_axiom(olx, "C-order").ok
                   and O.check_axiom(olx, f"F{sign}").ok)
            assert direct == via, (olx.meta, sign)


def _wedge_direct(olx, sign):
    f = olx.frame
    for v in f.elements():
        for vq in f.elements():
            if not olx.related(v, vq):
                continue
            for u in f.elements():
                if sign == "+":
                    if f.leq(u, v) and not any(
                            olx.related(u, uq) and f.leq(uq, vq)
                            for uq in f.elements()):
                        return False
                else:
                    if f.leq(u, vq) and not any(
                            olx.related(w, u) and f.leq(w, v)
                            for w in f.elements()):
                        return False
    return True


def test_parallel_disjointness_property(loc22):
    f = loc22.frame
    for u in f.elements():
        for v in f.elements():
            left = f.meet(u, loc22.down_map[v]) == f.bottom
            right = f.meet(loc22.up_map[u], v) == f.bottom
            assert left == right


# -- cone invariants ---------------------------------------------------------------------


def test_cone_monad_laws_and_order_items(loc22):
    f = loc22.frame
    for u in f.elements():
        assert f.leq(u, loc22.up_map[u])
        assert loc22.up_map[loc22.up_map[u]] == loc22.up_map[u]
        assert loc22.related(u, loc22.up_map[u])       # U rel up(U)
        assert loc22.related(loc22.down_map[u], u)     # down(U) rel U
        for v in f.elements():
            if loc22.related(u, v):
                assert f.leq(u, loc22.down_map[v])
                assert f.leq(v, loc22.up_map[u])
            if f.leq(u, v):
                assert f.leq(loc22.up_map[u], loc22.up_map[v])
            # lax join/meet laws
            j, m = f.join(u, v), f.meet(u, v)
            assert f.leq(f.join(loc22.up_map[u], loc22.up_map[v]),
                         loc22.up_map[j])
            assert f.leq(loc22.up_map[m],
                         f.meet(loc22.up_map[u], loc22.up_map[v]))
            # cone meets are cone-fixed
            cm = f.meet(loc22.up_map[u], loc22.up_map[v])
            assert loc22.up_map[cm] == cm


def test_monads_order_round_trip(loc22):
    pair = O.ConePair(loc22.frame, list(loc22.up_map), list(loc22.down_map))
    rebuilt = O.ordered_locale_from_monads(pair)
    f = loc22.frame
    assert rebuilt.up_map == loc22.up_map and rebuilt.down_map == loc22.down_map
    for u in f.elements():
        for v in f.elements():
            assert rebuilt.related(u, v) == loc22.related(u, v)


def test_order_to_monads_round_trip_iff_corder(b4):
    a, b = b4.id_of_mask(1), b4.id_of_mask(2)
    olx = O.ordered_locale_from_relation(b4, [(a, b4.top), (b4.bottom, a)])
    corder = O.check_axiom(olx, "C-order").ok
    pair = O.ConePair(b4, list(olx.up_map), list(olx.down_map))
    back = O.ordered_locale_from_monads(pair)
    same = all(back.related(u, v) == olx.related(u, v)
               for u in b4.elements() for v in b4.elements())
    assert same == corder


# -- monotone maps ---------------------------------------------------------------------


def test_identity_is_monotone(loc22):
    fmap = L.identity_map(loc22.frame)
    assert O.is_monotone(fmap, loc22, loc22).ok


def test_pasts_inclusion_monotonicity(m33, loc33):
    # quotient onto im(down) with the restricted order: monotone iff the
    # subframe is closed under both cones; it is not closed under up
    sub, fmap = O.pasts_frame(loc33)
    f = loc33.frame
    pos = {amb: i for i, amb in enumerate(fmap.preimage)}
    pairs = [(i, j) for i in sub.elements() for j in sub.elements()
             if loc33.related(fmap.preimage[i], fmap.preimage[j])]
    subord = O.ordered_locale_from_relation(sub, pairs)
    rep = O.is_monotone(fmap, loc33, subord)
    assert not rep.ok
    # the reported witness genuinely violates the cone inclusion: the
    # ambient up cone of a small down-set escapes every down-set candidate
    w = rep.witness[0]
    assert not f.leq(loc33.up_map[fmap.preimage[w]],
                     fmap.preimage[subord.up_map[w]]) or \
        not f.leq(loc33.down_map[fmap.preimage[w]],
                  fmap.preimage[subord.down_map[w]])
    assert sub.mask_of(w) == m33.frame.mask_of(grid(m33, (0, 0)))


def test_collapsing_map_not_monotone(b4):
    # source relates the two atoms; the target forgets the relation, so the
    # identity map collapses a related pair onto an unrelated one
    a, b = b4.id_of_mask(1), b4.id_of_mask(2)
    related = O.ordered_locale_from_relation(b4, [(a, b)])
    unrelated = O.equality_order(b4)
    fmap = L.identity_map(b4)
    assert O.is_monotone(fmap, related, related).ok
    rep = O.is_monotone(fmap, related, unrelated)
    assert not rep.ok


# -- hulls, complements, diamonds ---------------------------------------------------------


def test_hull_example(m33, loc33):
    u = grid(m33, (0, 0), (2, 0))
    h = O.convex_hull(loc33, u)
    assert h == grid(m33, (0, 0), (1, 0), (1, 1), (2, 0))


def test_hull_laws(m33, loc33):
    f = loc33.frame
    rng = random.Random(5)
    elems = [rng.randrange(f.m) for _ in range(300)]
    for u in elems:
        h = O.convex_hull(loc33, u)
        assert f.leq(u, h)
        assert O.convex_hull(loc33, h) == h
        assert loc33.up_map[h] == loc33.up_map[u]
        assert loc33.down_map[h] == loc33.down_map[u]
        up = loc33.up_map[u]
        assert O.convex_hull(loc33, up) == up      # cones are convex
        v = rng.randrange(f.m)
        if f.leq(u, v):
            assert f.leq(h, O.convex_hull(loc33, v))


def test_hull_antisymmetry_lemma(loc22):
    f = loc22.frame
    for u in f.elements():
        for v in f.elements():
            both = loc22.related(u, v) and loc22.related(v, u)
            hulls_equal = O.convex_hull(loc22, u) == O.convex_hull(loc22, v)
            assert both == hulls_equal  # C-order holds here


def test_convex_locale_m33_discrete(loc33):
    assert O.is_convex_locale(loc33).ok


def test_complement_and_diamond_examples(m33, loc33):
    c = grid(m33, (1, 1))
    assert O.causal_complement(loc33, c) == grid(m33, (1, 0), (1, 2))
    assert O.diamond(loc33, c) == c
    assert O.causal_complement(loc33, loc33.frame.top) == loc33.frame.bottom


def test_complement_laws(loc22):
    f = loc22.frame
    X, bot = f.top, f.bottom
    assert O.causal_complement(loc22, bot) == X          # (d) under empty-axiom
    for u in f.elements():
        cu = O.causal_complement(loc22, u)
        assert f.meet(u, cu) == bot                       # (a)
        assert f.leq(u, O.diamond(loc22, u))              # (e)
        assert f.leq(O.convex_hull(loc22, u), O.diamond(loc22, u))
        d = O.diamond(loc22, u)
        assert O.convex_hull(loc22, d) == d               # diamonds convex
        for v in f.elements():
            if f.leq(u, v):                               # (b) antitone
                assert f.leq(O.causal_complement(loc22, v), cu)
            assert f.leq(u, O.causal_complement(loc22, v)) == \
                f.leq(v, cu)                              # (f)
            j = O.causal_complement(loc22, f.join(u, v))  # (g) under C-join
            assert j == f.meet(cu, O.causal_complement(loc22, v))
    # parallel: negation swaps cone images
    for u in f.elements():
        ndn = f.neg(loc22.down_map[u])
        assert loc22.up_map[ndn] == ndn
        nup = f.neg(loc22.up_map[u])
        assert loc22.down_map[nup] == nup


def test_negation_order_iso_on_cone_images(loc22):
    # parallel + regular cones: negation is an order iso im(down) -> im(up)^op
    assert O.check_regular_cones(loc22).ok
    f = loc22.frame
    downs = sorted(set(loc22.down_map))
    ups = sorted(set(loc22.up_map))
    image = sorted(f.neg(d) for d in downs)
    assert image == ups
    for d1 in downs:
        for d2 in downs:
            assert f.leq(d1, d2) == f.leq(f.neg(d2), f.neg(d1))
    for d in downs:
        assert f.neg(f.neg(d)) == d


# -- futures and pasts frames ----------------------------------------------------------


def _downsets_of_points(space):
    # independent enumeration of down-closed point sets
    out = {0}
    work = [0]
    while work:
        s = work.pop()
        for p in range(space.n):
            if not s >> p & 1:
                t = s | space.down[p]
                if t not in out:
                    out.add(t)
                    work.append(t)
    return out


def test_pasts_frame_m33_is_downset_lattice(m33, loc33):
    pas, fmap = O.pasts_frame(loc33)
    expected = _downsets_of_points(m33)
    got = {pas.mask_of(i) for i in pas.elements()}
    assert got == expected
    assert pas.m == len(expected)    # number of antichains of the grid order
    fmap.validate()


def test_pasts_adjoint_example(m33, loc33):
    sub, fmap = O.pasts_frame(loc33)
    u = grid(m33, (0, 0), (1, 1))
    star = L.right_adjoint(fmap, u)
    assert sub.mask_of(star) == m33.frame.mask_of(grid(m33, (0, 0)))


def test_futures_frame_equality_is_whole(b4):
    eq = O.equality_order(b4)
    fut, fmap = O.futures_frame(eq)
    assert fut.m == b4.m


def test_futures_frame_inclusion_degenerate(b4):
    inc = O.inclusion_order(b4)
    fut, fmap = O.futures_frame(inc)
    assert fut.m == 2
    assert fut.meta.get("adjoined_bottom")
    assert fmap.preimage == [b4.bottom, b4.top]


def test_cones_must_preserve_joins_for_cone_frames():
    # relating {0,1} upward while leaving the atoms alone breaks the
    # binary join law: up(a v b) jumps to the top
    f = L.frame_from_topology(3, range(8))
    ab = f.id_of_mask(3)
    olx = O.ordered_locale_from_relation(f, [(ab, f.top)])
    a, b = f.id_of_mask(1), f.id_of_mask(2)
    assert olx.up_map[ab] == f.top
    assert olx.up_map[a] == a and olx.up_map[b] == b
    rep = O.check_axiom(olx, "C-join")
    assert not rep.ok and O.revalidate(olx, rep)
    with pytest.raises(ConesDoNotPreserveJoins):
        O.futures_frame(olx)


# -- biframe ----------------------------------------------------------------------------


def test_biframe_m33_and_vertical(loc33):
    assert O.is_biframe(loc33).ok
    lv = gen.em_locale("vertical33")
    assert O.is_biframe(lv).ok


def test_biframe_bowtie_fails(bowtie):
    loc = S.induced_locale(bowtie, "em")
    rep = O.is_biframe(loc)
    assert not rep.ok
    f = bowtie.frame
    assert f.mask_of(rep.witness[0]) == pts(0, 1, 3)   # {x,z,t}


# -- causal Heyting implication ------------------------------------------------------------


def test_causal_heyting_vacuous(loc33):
    f = loc33.frame
    v = grid(gen.suite_instance("m33"), (1, 1))
    assert O.causal_heyting(loc33, f.bottom, v, "past") == f.top


def test_causal_heyting_example(m33, loc33):
    u = grid(m33, (1, 1))
    v = grid(m33, (0, 1))
    w = O.causal_heyting(loc33, u, v, "past")
    assert w == grid(m33, (0, 0), (0, 1), (0, 2), (1, 0), (1, 2))


def test_causal_heyting_adjunction_and_direct_image(loc22):
    f = loc22.frame
    _, pmap = O.pasts_frame(loc22)
    for u in f.elements():
        for v in f.elements():
            h = O.causal_heyting(loc22, u, v, "past")
            for w in f.elements():
                assert f.leq(f.meet(u, loc22.down_map[w]), v) == f.leq(w, h)
            # eta_* identity: h equals the largest past set under u -> v
            star = pmap.preimage[L.right_adjoint(pmap, f.heyting(u, v))]
            assert star == loc22.down_map[h]


def test_causal_heyting_on_equality_is_ordinary(b4):
    eq = O.equality_order(b4)
    for u in b4.elements():
        for v in b4.elements():
            assert O.causal_heyting(eq, u, v, "past") == b4.heyting(u, v)
            assert O.causal_heyting(eq, u, v, "future") == b4.heyting(u, v)


# -- meets of orders -------------------------------------------------------------------


def test_meet_with_equality_is_equality(loc22):
    f = loc22.frame
    eq = O.equality_order(f)
    met = O.meet_of_orders([loc22, eq])
    for u in f.elements():
        for v in f.elements():
            assert met.related(u, v) == (u == v)


def test_empty_meet_is_total(b4):
    total = O.meet_of_orders([], frame=b4)
    assert all(total.related(u, v) for u in b4.elements() for v in b4.elements())


def test_meet_of_upper_and_lower_is_em(m33, loc33):
    up = S.induced_locale(m33, "upper")
    low = S.induced_locale(m33, "lower")
    met = O.meet_of_orders([up, low])
    assert met.rel_rows() == loc33.rel_rows()
    # cones of the meet are the meets of the cones (all inputs cone-determined)
    f = m33.frame
    for u in f.elements():
        assert met.up_map[u] == f.meet(up.up_map[u], low.up_map[u])
        assert met.down_map[u] == f.meet(up.down_map[u], low.down_map[u])


# -- orders from maps ------------------------------------------------------------------


def test_order_from_identity_is_cone_closure(b4):
    a, b = b4.id_of_mask(1), b4.id_of_mask(2)
    olx = O.ordered_locale_from_relation(b4, [(a, b4.top), (b4.bottom, a)])
    fmap = L.identity_map(b4)
    derived = O.order_from_map(fmap, olx)
    # the derived order is the cone-determined closure of the original
    pair = O.ConePair(b4, list(olx.up_map), list(olx.down_map))
    closure = O.ordered_locale_from_monads(pair)
    for u in b4.elements():
        for v in b4.elements():
            assert derived.related(u, v) == closure.related(u, v)
    if O.check_axiom(olx, "C-order").ok:
        assert derived.rel_rows() == olx.rel_rows()


def test_order_from_map_is_largest_monotone(b4):
    tgt = O.ordered_locale_from_relation(
        b4, [(b4.id_of_mask(1), b4.top)])
    fmap = L.identity_map(b4)
    derived = O.order_from_map(fmap, tgt)
    assert O.is_monotone(fmap, derived, tgt).ok
    rows = derived.rel_rows()
    for u in b4.elements():
        for v in b4.elements():
            if rows[u] >> v & 1:
                continue
            bigger = [r for r in rows]
            bigger[u] |= 1 << v
            enlarged = O.ordered_locale_from_relation(
                b4, [(x, y) for x in b4.elements() for y in bits(bigger[x])])
            assert not O.is_monotone(fmap, enlarged, tgt).ok, (u, v)


def test_order_from_dn_inclusion_boolean(m33, loc33):
    # Boolean frame: the double negation sublocale is the identity
    sub, dn_map = L.double_negation_frame(loc33.frame)
    derived = O.order_from_map(dn_map, loc33)
    assert derived.rel_rows() == loc33.rel_rows()


# -- regular cones -----------------------------------------------------------------------


def test_regular_cones(loc33, bowtie):
    assert O.check_regular_cones(loc33).ok          # Boolean frame
    eqb = O.equality_order(bowtie.frame)
    rep = O.check_regular_cones(eqb)
    assert not rep.ok
    u = rep.witness[0]
    f = bowtie.frame
    assert f.neg(f.neg(u)) != u


# -- ideal completion ----------------------------------------------------------------------


def test_ideal_completion_instances(b4, loc22):
    for olx in (O.equality_order(b4), O.inclusion_order(b4), loc22):
        idl, fmap = O.ideal_completion(olx)
        f = olx.frame
        assert idl.frame.m == f.m
        for u in f.elements():
            assert idl.up_map[u] == olx.up_map[u]
            for v in f.elements():
                assert f.leq(u, v) == idl.frame.leq(u, v)
        if O.check_axiom(olx, "C-join").ok:
            assert O.is_monotone(fmap, olx, idl).ok
