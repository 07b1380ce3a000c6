"""Tree groups T_n, the framing quotients ~T_n, and the twisted groups T^oo_n.

Each group is a presented abelian group whose generators are canonical
unrooted trees (plus twisted trees J^oo in even twisted orders).  Relators are
kept grouped by the relation family that produced them so that maps out of
these groups can be checked relation by relation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

from . import exactalg
from . import trees as tr
from .trees import Inner, Twisted

PLAIN = "plain"
REDUCED = "reduced"
TWISTED = "twisted"
FLAVORS = (PLAIN, REDUCED, TWISTED)

# twisted IHX relators are generated at every internal edge of J, not just the
# edges at the root vertex; see CONVENTIONS.md
TWISTED_IHX_ALL_EDGES = True


class ForeignGeneratorError(KeyError):
    pass


@dataclass(frozen=True)
class TreeGroup:
    order: int
    labels: int
    flavor: str
    presentation: exactalg.PresentedGroup = field(repr=False)
    relator_families: tuple = field(repr=False)

    @property
    def generators(self) -> tuple:
        return self.presentation.generator_index

    @property
    def structure(self) -> exactalg.GroupStructure:
        return self.presentation.structure

    def index(self, gen) -> int:
        try:
            return self.presentation.index(gen)
        except KeyError:
            raise ForeignGeneratorError(f"{gen} is not a generator of {self.name}") from None

    @property
    def name(self) -> str:
        sym = {PLAIN: "T", REDUCED: "~T", TWISTED: "T^oo"}[self.flavor]
        return f"{sym}_{self.order}(m={self.labels})"

    def relators(self, kind: str | None = None) -> list[dict]:
        return [r for k, rows in self.relator_families if kind in (None, k) for r in rows]


# --------------------------------------------------------------------------
# formal sums


@dataclass(frozen=True)
class FormalSum:
    """A finite Z-combination of canonical generators."""

    terms: tuple  # sorted (generator, coeff) pairs, no zero coefficients

    @classmethod
    def from_terms(cls, pairs) -> "FormalSum":
        out: dict = {}
        for t, c in pairs:
            ct, s = tr.canonicalize(t)
            out[ct] = out.get(ct, 0) + s * c
        return cls(_sorted_terms({k: v for k, v in out.items() if v}))

    @classmethod
    def zero(cls) -> "FormalSum":
        return cls(())

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return FormalSum.from_terms(list(self.terms) + list(other.terms))

    def __neg__(self) -> "FormalSum":
        return FormalSum(tuple((t, -c) for t, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int) -> "FormalSum":
        return FormalSum.from_terms([(t, k * c) for t, c in self.terms])

    def __bool__(self):
        return bool(self.terms)

    @property
    def order(self):
        orders = {t.order for t, _ in self.terms}
        return orders.pop() if len(orders) == 1 else None

    def vector(self, g: TreeGroup) -> dict:
        return {g.index(t): c for t, c in self.terms}

    def vector_in(self, index: dict) -> dict:
        out = {}
        for t, c in self.terms:
            try:
                out[index[t]] = c
            except KeyError:
                raise ForeignGeneratorError(str(t)) from None
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for t, c in self.terms:
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append(("+ " if c > 0 else "- ") + mag + str(t))
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _gen_key(t):
    if isinstance(t, Twisted):
        return (1, tr.key(t.tree))
    return (0, tr.inner_key(t))


def _sorted_terms(d: dict) -> tuple:
    return tuple(sorted(d.items(), key=lambda kc: _gen_key(kc[0])))


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+)\s*\*)?\s*")


def parse_formal_sum(text: str, m: int | None = None) -> FormalSum:
    """Parse e.g. ``"2*<(1,2),3> - tw((1,2))"``."""
    pos = 0
    pairs = []
    text = text.strip()
    if text in ("", "0"):
        return FormalSum.zero()
    while pos < len(text):
        mt = _TERM.match(text, pos)
        sign = -1 if mt.group(1) == "-" else 1
        coef = int(mt.group(2)) if mt.group(2) else 1
        if not pairs and mt.group(1) is None:
            pass
        elif pairs and mt.group(1) is None:
            raise tr.TreeSyntaxError("expected '+' or '-' between terms", mt.start())
        pos = mt.end()
        end = _tree_end(text, pos)
        pairs.append((tr.parse_tree(text[pos:end], m), sign * coef))
        pos = end
        while pos < len(text) and text[pos].isspace():
            pos += 1
    for t, _ in pairs:
        if not isinstance(t, (Inner, Twisted)):
            raise tr.TreeSyntaxError("formal sums contain unrooted or twisted trees only", 0)
    return FormalSum.from_terms(pairs)


def _tree_end(text: str, pos: int) -> int:
    depth = 0
    i = pos
    while i < len(text):
        ch = text[i]
        if ch in "(<":
            depth += 1
        elif ch in ")>":
            depth -= 1
            if depth == 0:
                return i + 1
        elif depth == 0 and ch in "+-":
            return i
        i += 1
    return i


# --------------------------------------------------------------------------
# framing map and relation families


def delta(t: Inner) -> FormalSum:
    """Framing map: sum over univalent v of <i(v), (T_v, T_v)>."""
    if not isinstance(t, Inner):
        raise TypeError("delta takes an unrooted tree")
    return FormalSum.from_terms(
        [(Inner(i, (tv, tv)), 1) for i, tv in tr.leaf_rootings(t)]
    )


def boundary_twist(i: int, j) -> Inner:
    return Inner((i, j), j)


def _subtree_paths(t, prefix=()):
    """Paths to pair nodes having at least one pair child."""
    if isinstance(t, int):
        return
    if not isinstance(t[0], int) or not isinstance(t[1], int):
        yield prefix
    yield from _subtree_paths(t[0], prefix + (0,))
    yield from _subtree_paths(t[1], prefix + (1,))


def _at(t, path):
    for step in path:
        t = t[step]
    return t


def _replace(t, path, new):
    if not path:
        return new
    if path[0] == 0:
        return (_replace(t[0], path[1:], new), t[1])
    return (t[0], _replace(t[1], path[1:], new))


def rooted_jacobi_triples(j, root_only: bool = False):
    """Triples (J1, J2, J3) of rooted trees with J1 + J2 + J3 = 0 by one IHX.

    One triple per internal edge of J (edges below a pair child of a vertex).
    """
    for path in _subtree_paths(j):
        if root_only and path:
            continue
        node = _at(j, path)
        for side in (0, 1):
            w, c = node[side], node[1 - side]
            if isinstance(w, int):
                continue
            a, b = w
            # node = +/-((a,b),c); Jacobi ((a,b),c) + ((b,c),a) + ((c,a),b) = 0
            sign = 1 if side == 0 else -1
            terms = [((a, b), c), ((b, c), a), ((c, a), b)]
            yield sign, tuple(_replace(j, path, x) for x in terms)


def twisted_ihx_terms(j1, j2, j3) -> list:
    """J1 + J2 + J3 = 0 gives J1^oo = J2^oo + J3^oo + <J2, J3>."""
    return [(Twisted(j1), 1), (Twisted(j2), -1), (Twisted(j3), -1), (Inner(j2, j3), -1)]


def _vec(pairs, index) -> dict:
    out: dict = {}
    for t, c in pairs:
        ct, s = tr.canonicalize(t)
        try:
            i = index[ct]
        except KeyError:
            raise ForeignGeneratorError(str(ct)) from None
        out[i] = out.get(i, 0) + s * c
    return {i: c for i, c in out.items() if c}


def _nonzero(rows):
    return [r for r in rows if r]


@lru_cache(maxsize=None)
def tower_group(n: int, m: int, flavor: str = PLAIN, limit_rows: int | None = None) -> TreeGroup:
    """Presentation of T_n, ~T_n or T^oo_n on m labels."""
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    trees = tr.enumerate_trees(n, m)
    gens = list(trees)
    twisted_even = flavor == TWISTED and n % 2 == 0
    if twisted_even:
        gens += [Twisted(j) for j in tr.enumerate_rooted(n // 2, m)]
    index = {g: i for i, g in enumerate(gens)}
    families = [
        ("AS", tr.as_relators(trees, index)),
        ("IHX", tr.ihx_relators(trees, index)),
    ]
    if n % 2 == 1 and flavor in (REDUCED, TWISTED):
        k = (n + 1) // 2
        families.append(
            ("framing", _nonzero(delta(t).vector_in(index) for t in tr.enumerate_trees(k - 1, m)))
        )
    if n % 2 == 1 and flavor == TWISTED:
        k = (n + 1) // 2
        families.append((
            "boundary-twist",
            _nonzero(_vec([(boundary_twist(i, j), 1)], index)
                     for j in tr.enumerate_rooted(k - 1, m) for i in range(1, m + 1)),
        ))
    if twisted_even:
        k = n // 2
        rooted = tr.enumerate_rooted(k, m)
        families.append((
            "interior-twist",
            [_vec([(Twisted(j), 2), (Inner(j, j), -1)], index) for j in rooted],
        ))
        rows = []
        for j in rooted:
            for _, triple in rooted_jacobi_triples(j, root_only=not TWISTED_IHX_ALL_EDGES):
                for r in range(3):
                    j1, j2, j3 = triple[r:] + triple[:r]
                    rows.append(_vec(twisted_ihx_terms(j1, j2, j3), index))
        families.append(("twisted-IHX", tr._dedupe(_nonzero(rows))))
    all_rows = [r for _, rows in families for r in rows]
    pres = exactalg.group_from_presentation(tuple(gens), all_rows, limit_rows=limit_rows)
    return TreeGroup(n, m, flavor, pres, tuple((k, tuple(rows)) for k, rows in families))


def reduce_element(s: FormalSum, g: TreeGroup) -> tuple:
    """Canonical (torsion, free) coordinates of a formal sum in g."""
    return g.presentation.coordinates(s.vector(g))


def is_zero_in(s: FormalSum, g: TreeGroup) -> bool:
    return not any(reduce_element(s, g))


# --------------------------------------------------------------------------
# intersection data


class IntersectionDataError(ValueError):
    pass


@dataclass(frozen=True)
class IntersectionData:
    points: tuple = ()   # (Inner, sign)
    twists: tuple = ()   # (rooted J, omega)


def tau_of_data(d: IntersectionData, g: TreeGroup) -> FormalSum:
    """Sum of signed trees plus omega-weighted twisted trees."""
    if d.twists and not (g.flavor == TWISTED and g.order % 2 == 0):
        raise IntersectionDataError("twisted Whitney disks only occur in even twisted orders")
    pairs = []
    for t, s in d.points:
        if s not in (1, -1):
            raise IntersectionDataError("intersection signs must be +1 or -1")
        if t.order != g.order:
            raise IntersectionDataError(f"tree {t} has order {t.order}, expected {g.order}")
        pairs.append((t, s))
    for j, w in d.twists:
        if 2 * tr.order(j) != g.order:
            raise IntersectionDataError(f"twisted tree {tr.fmt(j)} has the wrong order")
        pairs.append((Twisted(j), w))
    s = FormalSum.from_terms(pairs)
    s.vector(g)  # raises on foreign labels
    return s
