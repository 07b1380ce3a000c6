import random

import pytest

from wtcalc import exactalg as ea
from wtcalc import liealg as la
from wtcalc import trees as tr
from wtcalc import towergroups as tg
from wtcalc.exactalg import GroupStructure
from wtcalc.trees import Inner, Twisted


def G(rank=0, *torsion):
    return GroupStructure(rank, tuple(torsion))


# ---- oracle: plain groups from planar (non-canonical) trees ---------------


def planar_rooted(n, m):
    if n == 0:
        return list(range(1, m + 1))
    out = []
    for k in range(n):
        for a in planar_rooted(k, m):
            for b in planar_rooted(n - 1 - k, m):
                out.append((a, b))
    return out


def swaps(t):
    """All rooted trees obtained from t by one branch swap."""
    if isinstance(t, int):
        return
    a, b = t
    yield (b, a)
    for x in swaps(a):
        yield (x, b)
    for x in swaps(b):
        yield (a, x)


def planar_group(n, m):
    gens = [(a, b) for k in range(n + 1)
            for a in planar_rooted(k, m) for b in planar_rooted(n - k, m)]
    idx = {g: i for i, g in enumerate(gens)}
    rels = []

    def add(terms):
        r = {}
        for g, c in terms:
            r[idx[g]] = r.get(idx[g], 0) + c
        r = {k: v for k, v in r.items() if v}
        if r:
            rels.append(r)

    for a, b in gens:
        add([((a, b), 1), ((b, a), -1)])
        if not isinstance(a, int):
            add([((a, b), 1), ((a[0], (a[1], b)), -1)])
        for x in swaps(a):
            add([((a, b), 1), ((x, b), 1)])
        if not isinstance(a, int) and not isinstance(b, int):
            (p, q), (r, s) = a, b
            add([(((p, q), (r, s)), 1), (((q, r), (p, s)), 1), (((r, p), (q, s)), 1)])
    return ea.structure_of(rels, len(gens))


@pytest.mark.parametrize("n,m", [(0, 1), (0, 3), (1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2), (4, 1)])
def test_plain_group_matches_planar_oracle(n, m):
    assert tg.tower_group(n, m, tg.PLAIN).structure == planar_group(n, m)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [0, 1, 2, 3, 4])
def test_plain_rank_is_witt_count(n, m):
    # rank T_n = rank D_n = m W(n+1) - W(n+2)
    assert tg.tower_group(n, m).structure.rank == m * la.witt_rank(m, n + 1) - la.witt_rank(m, n + 2)


# ---- examples --------------------------------------------------------------


def test_group_examples():
    assert tg.tower_group(1, 1, tg.PLAIN).structure == G(0, 2)
    assert tg.tower_group(1, 1, tg.TWISTED).structure.is_trivial
    assert tg.tower_group(0, 2, tg.PLAIN).structure == G(3)
    assert tg.tower_group(1, 2, tg.REDUCED).structure == G(0, 2, 2, 2)
    assert tg.tower_group(2, 1, tg.TWISTED).structure == G(0, 2)
    assert tg.tower_group(2, 2, tg.TWISTED).structure == G(1, 2, 2)
    assert tg.tower_group(0, 2, tg.TWISTED).structure == G(3)
    assert tg.tower_group(1, 1).name == "T_1(m=1)"


def test_bad_arguments():
    with pytest.raises(ValueError):
        tg.tower_group(1, 1, "framed")
    with pytest.raises(ValueError):
        tg.tower_group(-1, 1)
    with pytest.raises(ValueError):
        tg.tower_group(1, 0)


def test_delta_examples():
    assert tg.delta(Inner(1, 2)) == tg.FormalSum.from_terms(
        [(Inner(1, (2, 2)), 1), (Inner(2, (1, 1)), 1)])
    assert tg.delta(Inner(1, 1)) == tg.FormalSum.from_terms([(Inner(1, (1, 1)), 2)])
    y = Inner(1, (2, 3))
    d = tg.delta(y)
    assert len(d.terms) == 3 and d.order == 3
    expect = [Inner(1, ((2, 3), (2, 3))), Inner(2, ((3, 1), (3, 1))), Inner(3, ((1, 2), (1, 2)))]
    assert {t for t, _ in d.terms} == {tr.canonicalize(t)[0] for t in expect}
    with pytest.raises(TypeError):
        tg.delta(Twisted(1))


def test_reduce_examples():
    g = tg.tower_group(2, 2)
    t = Inner((1, 2), (1, 2))
    s = tg.FormalSum.from_terms([(t, 1), (tr.swap_inner(t, 0, ()), 1)])
    assert tg.is_zero_in(s, g)
    for p, q in tr.internal_edges(tr.enumerate_trees(2, 2)[-1]):
        assert tg.is_zero_in(tg.FormalSum.from_terms(tr.ihx_terms(p, q)), g)
    g4 = tg.tower_group(2, 2, tg.TWISTED)
    for j in tr.enumerate_rooted(1, 2):
        s = tg.FormalSum.from_terms([(Twisted(j), 2), (Inner(j, j), -1)])
        assert tg.is_zero_in(s, g4)
    with pytest.raises(tg.ForeignGeneratorError):
        tg.reduce_element(tg.FormalSum.from_terms([(Inner(1, (2, 3)), 1)]), tg.tower_group(1, 2))
    with pytest.raises(tg.ForeignGeneratorError):
        tg.reduce_element(tg.FormalSum.from_terms([(Twisted(1), 1)]), tg.tower_group(0, 1))


def test_tau_of_data():
    g = tg.tower_group(2, 2, tg.TWISTED)
    assert not tg.tau_of_data(tg.IntersectionData(), g)
    t = Inner((1, 2), (1, 2))
    assert tg.tau_of_data(tg.IntersectionData(points=((t, -1),)), g) == -tg.FormalSum.from_terms([(t, 1)])
    j = (1, 2)
    s = tg.tau_of_data(tg.IntersectionData(twists=((j, 2),)), g)
    assert tg.is_zero_in(s - tg.FormalSum.from_terms([(Inner(j, j), 1)]), g)
    with pytest.raises(tg.IntersectionDataError):
        tg.tau_of_data(tg.IntersectionData(twists=((1, 1),)), tg.tower_group(1, 1, tg.TWISTED))
    with pytest.raises(tg.IntersectionDataError):
        tg.tau_of_data(tg.IntersectionData(twists=((j, 1),)), tg.tower_group(2, 2, tg.PLAIN))
    with pytest.raises(tg.IntersectionDataError):
        tg.tau_of_data(tg.IntersectionData(points=((t, 2),)), g)
    with pytest.raises(tg.IntersectionDataError):
        tg.tau_of_data(tg.IntersectionData(points=((Inner(1, 2), 1),)), g)


def test_formal_sum_parse():
    s = tg.parse_formal_sum("2*<(1,2),3> - tw((1,2))")
    assert s.as_dict() == {tr.canonicalize(Inner((1, 2), 3))[0]: 2, Twisted((1, 2)): -1}
    assert tg.parse_formal_sum("0") == tg.FormalSum.zero()
    assert tg.parse_formal_sum("<1,2> - <2,1>") == tg.FormalSum.zero()
    assert tg.parse_formal_sum(str(s)) == s
    with pytest.raises(tr.TreeSyntaxError):
        tg.parse_formal_sum("<1,2> <1,2>")
    with pytest.raises(tr.TreeSyntaxError):
        tg.parse_formal_sum("(1,2)")


# ---- properties ------------------------------------------------------------


@pytest.mark.parametrize("n,m", [(1, 1), (1, 2), (1, 3), (3, 1), (3, 2), (3, 3)])
def test_delta_is_two_torsion_and_dies_in_twisted(n, m):
    k = (n + 1) // 2
    plain = tg.tower_group(n, m, tg.PLAIN)
    twisted = tg.tower_group(n, m, tg.TWISTED)
    for t in tr.enumerate_trees(k - 1, m):
        d = tg.delta(t)
        assert tg.is_zero_in(d.scale(2), plain)
        assert tg.is_zero_in(d, twisted)


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", [0, 2, 4])
def test_plain_equals_reduced_in_even_order(n, m):
    a = tg.tower_group(n, m, tg.PLAIN)
    b = tg.tower_group(n, m, tg.REDUCED)
    assert a.structure == b.structure and a.generators == b.generators


@pytest.mark.parametrize("flavor", tg.FLAVORS)
@pytest.mark.parametrize("n,m", [(1, 3), (2, 3), (3, 2), (2, 2)])
def test_relabeling_invariance(n, m, flavor):
    rng = random.Random(n * 10 + m)
    g = tg.tower_group(n, m, flavor)
    perm = list(range(1, m + 1))
    rng.shuffle(perm)
    p = dict(zip(range(1, m + 1), perm))
    # the permuted relators present the same group on the same generators
    rows = []
    for r in g.relators():
        terms = [(tr.relabel(g.generators[i], p), c) for i, c in r.items()]
        rows.append(tg.FormalSum.from_terms(terms).vector(g))
    assert ea.structure_of(rows, len(g.generators)) == g.structure
    # and permuting generators is an automorphism
    mapping = [tg.FormalSum.from_terms([(tr.relabel(x, p), 1)]).vector(g) for x in g.generators]
    dense = [[r.get(j, 0) for j in range(len(g.generators))] for r in mapping]
    rep = ea.hom_analysis(g.presentation, g.presentation, dense)
    assert rep.well_defined and rep.is_isomorphism
