"""Labeled vertex-oriented unitrivalent trees.

A rooted tree is either an int label (>= 1) or a pair ``(left, right)``; the
pair is the rooted product, and its trivalent vertex carries the cyclic order
(left, right, root).  Swapping the two children is one AS move (sign -1).

An unrooted tree is an :class:`Inner` pair <I, J> obtained by gluing the roots
of I and J.  The re-rooting moves

    <I, J> = <J, I>,   <(A, B), C> = <A, (B, C)> = <B, (C, A)>

preserve vertex orientations, so every edge of an unrooted tree can be reached
without a sign change.  A :class:`Twisted` generator J^oo is stored by the
canonical rooted tree J, with the sign of J forgotten.

Conventions used throughout the package are collected in CONVENTIONS.md.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

Rooted = Union[int, tuple]


class TreeSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


@dataclass(frozen=True)
class Inner:
    left: Rooted
    right: Rooted

    @property
    def order(self) -> int:
        return order(self.left) + order(self.right)

    def __str__(self):
        return f"<{fmt(self.left)},{fmt(self.right)}>"


@dataclass(frozen=True)
class Twisted:
    """The generator J^oo, of order 2*order(J) in the even twisted group."""

    tree: Rooted

    @property
    def order(self) -> int:
        return 2 * order(self.tree)

    @property
    def half_order(self) -> int:
        return order(self.tree)

    def __str__(self):
        return f"tw({fmt(self.tree)})"


Tree = Union[Inner, Twisted]


# --------------------------------------------------------------------------
# basic structure


def is_leaf(t) -> bool:
    return isinstance(t, int)


@lru_cache(maxsize=None)
def order(t: Rooted) -> int:
    if isinstance(t, int):
        return 0
    return order(t[0]) + order(t[1]) + 1


def labels(t) -> list[int]:
    if isinstance(t, Inner):
        return labels(t.left) + labels(t.right)
    if isinstance(t, Twisted):
        return labels(t.tree)
    if isinstance(t, int):
        return [t]
    return labels(t[0]) + labels(t[1])


def fmt(t) -> str:
    if isinstance(t, (Inner, Twisted)):
        return str(t)
    if isinstance(t, int):
        return str(t)
    return f"({fmt(t[0])},{fmt(t[1])})"


def rooted_product(i: Rooted, j: Rooted) -> Rooted:
    return (i, j)


def relabel(t, perm):
    """Apply a label map (dict or callable) to every leaf."""
    f = perm if callable(perm) else perm.__getitem__
    if isinstance(t, Inner):
        return Inner(relabel(t.left, f), relabel(t.right, f))
    if isinstance(t, Twisted):
        return Twisted(relabel(t.tree, f))
    if isinstance(t, int):
        return f(t)
    return (relabel(t[0], f), relabel(t[1], f))


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(tw\(|\d+|[(),<>])")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise TreeSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    out.append(("", len(text)))
    return out


class _Parser:
    def __init__(self, text, m):
        self.toks = _tokens(text)
        self.i = 0
        self.m = m

    def peek(self):
        return self.toks[self.i]

    def take(self, want=None):
        tok, pos = self.toks[self.i]
        if want is not None and tok != want:
            raise TreeSyntaxError(f"expected {want!r}, found {tok or 'end of input'!r}", pos)
        self.i += 1
        return tok, pos

    def rooted(self):
        tok, pos = self.peek()
        if tok.isdigit():
            self.take()
            k = int(tok)
            if k < 1 or (self.m is not None and k > self.m):
                raise TreeSyntaxError(f"label {k} outside 1..{self.m if self.m else 'm'}", pos)
            return k
        if tok == "(":
            self.take()
            a = self.rooted()
            self.take(",")
            b = self.rooted()
            self.take(")")
            return (a, b)
        raise TreeSyntaxError(f"expected a label or '(', found {tok or 'end of input'!r}", pos)

    def any(self):
        tok, pos = self.peek()
        if tok == "<":
            self.take()
            a = self.rooted()
            self.take(",")
            b = self.rooted()
            self.take(">")
            return Inner(a, b)
        if tok == "tw(":
            self.take()
            j = self.rooted()
            self.take(")")
            return Twisted(j)
        return self.rooted()


def parse_tree(text: str, m: int | None = None):
    """Parse a rooted tree, an unrooted tree <I,J>, or a twisted tree tw(J).

    No canonicalization is applied.

    >>> parse_tree("<(1,2),3>")
    Inner(left=(1, 2), right=3)
    """
    p = _Parser(text, m)
    t = p.any()
    tok, pos = p.peek()
    if tok:
        raise TreeSyntaxError(f"trailing input {tok!r}", pos)
    return t


# --------------------------------------------------------------------------
# canonical forms


@lru_cache(maxsize=None)
def key(t: Rooted) -> tuple:
    """Total order on canonical rooted trees: by order, then recursively."""
    if isinstance(t, int):
        return (0, t)
    return (order(t), key(t[0]), key(t[1]))


@lru_cache(maxsize=None)
def canon_rooted(t: Rooted) -> tuple[Rooted, int, bool]:
    """Return (canonical, sign, self_negating) for a rooted tree.

    ``self_negating`` records a vertex whose two (canonical) branches agree,
    which forces the tree to equal its own negative under AS.
    """
    if isinstance(t, int):
        return t, 1, False
    a, sa, na = canon_rooted(t[0])
    b, sb, nb = canon_rooted(t[1])
    sign = sa * sb
    if key(a) > key(b):
        a, b = b, a
        sign = -sign
    return (a, b), sign, na or nb or a == b


def edges(t: Inner) -> Iterator[tuple[Rooted, Rooted]]:
    """Every edge of an unrooted tree, as an orientation-preserving <P, Q>."""
    yield t.left, t.right
    yield from _descend(t.left, t.right)
    yield from _descend(t.right, t.left)


def _descend(x, y):
    if isinstance(x, int):
        return
    a, b = x
    p = (b, y)
    yield a, p
    yield from _descend(a, p)
    q = (y, a)
    yield b, q
    yield from _descend(b, q)


def leaf_rootings(t: Inner) -> Iterator[tuple[int, Rooted]]:
    """Pairs (label of v, T_v(t)) with t = <v, T_v(t)> for each univalent v."""
    for p, q in edges(t):
        if isinstance(p, int):
            yield p, q
        if isinstance(q, int):
            yield q, p


def internal_edges(t: Inner) -> Iterator[tuple[tuple, tuple]]:
    for p, q in edges(t):
        if not isinstance(p, int) and not isinstance(q, int):
            yield p, q


@lru_cache(maxsize=None)
def _canon_inner(t: Inner) -> tuple[Inner, int, bool]:
    best = None
    signs = set()
    selfneg = False
    for p, q in edges(t):
        cp, sp, np_ = canon_rooted(p)
        cq, sq, nq = canon_rooted(q)
        if key(cp) > key(cq):
            cp, cq = cq, cp
        k = (key(cp), key(cq))
        if best is None or k < best[0]:
            best = (k, Inner(cp, cq), sp * sq)
            signs = {sp * sq}
            selfneg = np_ or nq
        elif k == best[0]:
            signs.add(sp * sq)
            selfneg = selfneg or np_ or nq
    return best[1], best[2], selfneg or len(signs) > 1


def canonicalize(t, m: int | None = None):
    """Return (canonical, sign) with t = sign * canonical under AS.

    Twisted trees drop the sign of J (J^oo = (-J)^oo), so their sign is +1.
    """
    if m is not None and any(k < 1 or k > m for k in labels(t)):
        raise ValueError(f"label outside 1..{m}")
    if isinstance(t, Inner):
        c, s, _ = _canon_inner(t)
        return c, s
    if isinstance(t, Twisted):
        return Twisted(canon_rooted(t.tree)[0]), 1
    c, s, _ = canon_rooted(t)
    return c, s


def is_self_negating(t) -> bool:
    """True when t = -t follows from AS alone (an orientation-reversing symmetry)."""
    if isinstance(t, Inner):
        return _canon_inner(t)[2]
    if isinstance(t, Twisted):
        return False
    return canon_rooted(t)[2]


def inner_product(i: Rooted, j: Rooted) -> tuple[Inner, int]:
    return canonicalize(Inner(i, j))


def swap_at(t: Rooted, path: tuple) -> Rooted:
    """Swap the children of the vertex reached by following ``path`` (0/1 steps)."""
    if not path:
        return (t[1], t[0])
    if path[0] == 0:
        return (swap_at(t[0], path[1:]), t[1])
    return (t[0], swap_at(t[1], path[1:]))


def vertex_paths(t: Rooted, prefix=()) -> Iterator[tuple]:
    if isinstance(t, int):
        return
    yield prefix
    yield from vertex_paths(t[0], prefix + (0,))
    yield from vertex_paths(t[1], prefix + (1,))


def swap_inner(t: Inner, side: int, path: tuple) -> Inner:
    if side == 0:
        return Inner(swap_at(t.left, path), t.right)
    return Inner(t.left, swap_at(t.right, path))


def inner_vertices(t: Inner) -> Iterator[tuple[int, tuple]]:
    for p in vertex_paths(t.left):
        yield 0, p
    for p in vertex_paths(t.right):
        yield 1, p


# --------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=None)
def enumerate_rooted(n: int, m: int) -> tuple:
    """Canonical rooted trees of order n on labels 1..m, sorted by key."""
    if n == 0:
        return tuple(range(1, m + 1))
    out = []
    for k in range(n):
        left = enumerate_rooted(k, m)
        right = enumerate_rooted(n - 1 - k, m)
        for a in left:
            ka = key(a)
            for b in right:
                if ka <= key(b):
                    out.append((a, b))
    out.sort(key=key)
    return tuple(out)


def inner_key(t: Inner) -> tuple:
    return (key(t.left), key(t.right))


@lru_cache(maxsize=None)
def enumerate_trees(n: int, m: int) -> tuple:
    """One canonical representative per unrooted tree of order n on labels 1..m."""
    if n < 0 or m < 1:
        raise ValueError("need n >= 0 and m >= 1")
    seen = set()
    for k in range(n // 2 + 1):
        for a in enumerate_rooted(k, m):
            for b in enumerate_rooted(n - k, m):
                seen.add(canonicalize(Inner(a, b))[0])
    return tuple(sorted(seen, key=inner_key))


# --------------------------------------------------------------------------
# relators


def _vector(terms, index: dict) -> dict:
    out: dict[int, int] = {}
    for t, c in terms:
        ct, s = canonicalize(t)
        i = index[ct]
        out[i] = out.get(i, 0) + s * c
    return {i: c for i, c in out.items() if c}


def as_relators(trees, index: dict) -> list[dict]:
    rows = []
    for t in trees:
        i = index[t]
        for side, path in inner_vertices(t):
            row = _vector([(t, 1), (swap_inner(t, side, path), 1)], index)
            if row:
                rows.append(row)
        if is_self_negating(t):
            rows.append({i: 2})
    return _dedupe(rows)


def ihx_terms(p: tuple, q: tuple) -> list[tuple[Inner, int]]:
    """The Jacobi triple at the internal edge of <(A,B),(C,D)>."""
    a, b = p
    c, d = q
    return [(Inner((a, b), (c, d)), 1), (Inner((b, c), (a, d)), 1), (Inner((c, a), (b, d)), 1)]


def ihx_relators(trees, index: dict) -> list[dict]:
    rows = []
    for t in trees:
        for p, q in internal_edges(t):
            row = _vector(ihx_terms(p, q), index)
            if row:
                rows.append(row)
    return _dedupe(rows)


def _dedupe(rows):
    seen = set()
    out = []
    for r in rows:
        k = tuple(sorted(r.items()))
        neg = tuple(sorted((i, -c) for i, c in r.items()))
        if k in seen or neg in seen:
            continue
        seen.add(k)
        out.append(r)
    return out


def relators(n: int, m: int, kind: str) -> list[dict]:
    """AS or IHX relators of order n as sparse vectors over enumerate_trees(n, m)."""
    trees = enumerate_trees(n, m)
    index = {t: i for i, t in enumerate(trees)}
    kind = kind.upper()
    if kind == "AS":
        return as_relators(trees, index)
    if kind == "IHX":
        return ihx_relators(trees, index)
    raise ValueError(f"unknown relator kind {kind!r}")
