import random

import pytest
from hypothesis import given, settings, strategies as st

from wtcalc import homs
from wtcalc import liealg as la
from wtcalc import towergroups as tg
from wtcalc import trees as tr
from wtcalc.exactalg import GroupStructure
from wtcalc.trees import Inner, Twisted

from test_liealg import oracle_presentation


def G(rank=0, *torsion):
    return GroupStructure(rank, tuple(torsion))


# ---- oracle: eta expanded in the tensor algebra ---------------------------


def poly_of_eta(d: dict) -> dict:
    out: dict = {}
    for (i, k), c in d.items():
        for w, x in la.expand(k):
            out[(i,) + w] = out.get((i,) + w, 0) + c * x
    return {w: c for w, c in out.items() if c}


def direct_eta_poly(t: Inner) -> dict:
    """Sum over univalent v of X_l(v) (x) B_v, expanded without any Hall basis."""
    out: dict = {}
    for i, tv in tr.leaf_rootings(t):
        for w, x in la.expand(tv):
            out[(i,) + w] = out.get((i,) + w, 0) + x
    return {w: c for w, c in out.items() if c}


def random_inner(rng, n, m):
    trees = tr.enumerate_trees(n, m)
    return rng.choice(trees)


@pytest.mark.parametrize("n,m", [(0, 2), (1, 3), (2, 2), (3, 2), (4, 2), (2, 4)])
def test_eta_matches_expansion_oracle(n, m):
    for t in tr.enumerate_trees(n, m):
        assert poly_of_eta(homs.eta_tree(t, m)) == direct_eta_poly(t)


def test_eta_oracle_on_rerooted_forms():
    rng = random.Random(3)
    for _ in range(100):
        t = random_inner(rng, rng.randint(1, 4), 3)
        # every rooting of the same tree gives the same expansion
        for side, path in tr.inner_vertices(t):
            u = tr.swap_inner(t, side, path)
            assert direct_eta_poly(u) == {w: -c for w, c in direct_eta_poly(t).items()}


@pytest.mark.parametrize("k,m", [(1, 1), (1, 2), (1, 3), (2, 2)])
def test_eta_twisted_is_half_of_square(k, m):
    for j in tr.enumerate_rooted(k, m):
        half = poly_of_eta(homs.eta_tree(Twisted(j), m))
        full = direct_eta_poly(Inner(j, j))
        assert {w: 2 * c for w, c in half.items()} == full


# ---- examples --------------------------------------------------------------


def test_eta_examples():
    assert str(homs.eta_element(Inner(1, 2), 2)) == "X1(x)X2 + X2(x)X1"
    y = homs.eta_element(Inner(1, (1, 1)), 1, la.QUASI)
    assert str(y) == "X1(x)[X1,X1]"
    assert homs.eta_element(Inner(1, (1, 1)), 1, la.LIE).is_zero()
    assert homs.eta_element(Twisted(1), 1).to_dict() == {(1, 1): 1}
    with pytest.raises(ValueError):
        homs.eta_tree(Twisted(1), 1, la.QUASI)


@pytest.mark.parametrize("n,m", [(n, m) for n in range(5) for m in (1, 2)] + [(n, 3) for n in range(4)])
def test_levine_instances(n, m):
    rep = homs.verify_levine(n, m)
    assert rep.well_defined and rep.is_isomorphism


@pytest.mark.parametrize("m", [1, 2, 3])
def test_twisted_kernel(m):
    r = homs.kernel_eta_twisted(1, m)
    assert r.report.kernel == G(0, *([2] * m))
    assert r.match
    assert [str(t) for t in r.symmetric_generators] == [f"tw(({i},{i}))" for i in range(1, m + 1)]
    assert r.to_dict()["order"] == 2


def test_twisted_kernel_order_six():
    assert homs.kernel_eta_twisted(2, 1).report.kernel.is_trivial
    assert homs.kernel_eta_twisted(2, 2).match
    with pytest.raises(ValueError):
        homs.kernel_eta_twisted(0, 1)


@pytest.mark.parametrize("m", [1, 2])
@pytest.mark.parametrize("order", [0, 2, 4])
def test_framed_vs_twisted(order, m):
    r = homs.framed_vs_twisted(order, m)
    assert r.match
    if order == 0:
        assert r.cok == G(0, *([2] * m)) and r.ker is None


def test_framed_vs_twisted_examples():
    r = homs.framed_vs_twisted(2, 1)
    assert r.cok == G(0, 2) and r.ker == G(0, 2)
    with pytest.raises(ValueError):
        homs.framed_vs_twisted(3, 1)


def test_classify_examples():
    c = homs.classify(1, 1)
    assert c.predicted_w == G(0, 2) and c.status_w == homs.CONJECTURAL
    c = homs.classify(2, 1)
    assert c.status_w_inf == homs.CONJECTURAL
    assert c.eta.kernel == G(0, 2)
    c = homs.classify(3, 2)
    assert c.status_w == homs.PROVED and c.status_w_inf == homs.PROVED
    d = c.to_dict()
    assert set(d) >= {"order", "labels", "groups", "eta", "predicted"}
    assert set(d["groups"]) == {"T", "T_tilde", "T_inf", "D", "D_prime"}


@pytest.mark.parametrize("n,m", [(n, m) for n in range(5) for m in (1, 2)] + [(1, 3), (3, 3)])
def test_eta_twisted_iso_off_order_two(n, m):
    c = homs.classify(n, m)
    if n % 4 != 2:
        assert c.eta.is_isomorphism
        assert c.groups["T_inf"] == c.groups["D"] == c.predicted_w_inf
    else:
        assert c.eta.kernel == homs.z2_tensor(homs.lie_structure(m, (n + 2) // 4))


# ---- well-definedness --------------------------------------------------------


@pytest.mark.parametrize("flavor", tg.FLAVORS)
@pytest.mark.parametrize("n,m", [(n, m) for n in range(5) for m in (1, 2, 3)])
def test_eta_well_defined(n, m, flavor):
    e = homs.eta(n, m, flavor)
    assert e.relator_failures() == []
    assert e.outside_kernel() == []


@settings(max_examples=30)
@given(st.integers(0, 3), st.permutations([1, 2, 3]), st.randoms(use_true_random=False))
def test_eta_relabel_equivariant(n, perm, rnd):
    p = dict(zip((1, 2, 3), perm))
    t = rnd.choice(tr.enumerate_trees(n, 3))
    lhs = poly_of_eta(homs.eta_tree(tr.relabel(t, p), 3))
    rhs = {tuple(p[a] for a in w): c for w, c in direct_eta_poly(t).items()}
    assert lhs == rhs


@pytest.mark.parametrize("m", [2, 3])
def test_sl_matches_quasi_presentation_route(m):
    """sl(x) read off in L'_4 presented by monomials, with no Hall rewriting involved."""
    mons, pres = oracle_presentation(4, m, la.QUASI)
    idx = {t: i for i, t in enumerate(mons)}
    rng = random.Random(50 + m)
    basis = la.bracket_kernel(2, m, la.LIE).basis
    etas = [homs.eta_element(g, m) for g in tg.tower_group(2, m, tg.TWISTED).generators]
    samples = []
    for _ in range(50):
        x = la.TensorElement.from_dict({}, m, 2)
        for b in basis:
            x = x + b.scale(rng.randint(-4, 4))
        samples.append(x)
    for x in samples + etas:
        v = la.sl_map(x)
        lhs: dict = {}
        for (i, k), c in x.to_dict().items():
            lhs[idx[(i, k)]] = lhs.get(idx[(i, k)], 0) + c
        rhs = {idx[(h, h)]: 1 for h, c in v.to_dict().items() if c % 2}
        assert pres.coordinates(lhs) == pres.coordinates(rhs)
