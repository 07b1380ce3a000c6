"""Pure braids: parsing, longitudes through the Artin action, and tree realization.

Braid words act on F = F<x_1..x_m> by
    s_k:    x_k -> x_k x_{k+1} x_k^-1,  x_{k+1} -> x_k
    s_k^-1: x_k -> x_{k+1},             x_{k+1} -> x_{k+1}^-1 x_k x_{k+1}
as a right action: w = a_1 ... a_r acts by first applying a_1, then a_2, and
so on, i.e. phi_w = phi_{a_r} o ... o phi_{a_1}.  For a pure braid phi_w(x_i) is a
conjugate l_i x_i l_i^-1; l_i normalized to zero x_i-exponent is the longitude.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from . import homs
from . import liealg as la
from . import milnor as mi
from . import trees as tr
from .milnor import FreeWord, StringLinkData
from .trees import Inner


class BraidError(ValueError):
    pass


class RealizationError(AssertionError):
    pass


@dataclass(frozen=True)
class PureBraid:
    strands: int
    word: tuple  # nonzero ints: k is s_k, -k is s_k^-1

    def __post_init__(self):
        for a in self.word:
            if not 1 <= abs(a) < self.strands:
                raise BraidError(f"s{abs(a)} out of range for {self.strands} strands")
        if permutation(self.word, self.strands) != tuple(range(self.strands)):
            raise BraidError("braid is not pure (its permutation is not the identity)")

    def __mul__(self, other: "PureBraid") -> "PureBraid":
        return PureBraid(self.strands, self.word + other.word)

    def inverse(self) -> "PureBraid":
        return PureBraid(self.strands, tuple(-a for a in reversed(self.word)))

    def __str__(self):
        if not self.word:
            return "1"
        return " ".join(f"s{a}" if a > 0 else f"s{-a}^-1" for a in self.word)


def permutation(word, m: int) -> tuple:
    perm = list(range(m))
    for a in word:
        k = abs(a) - 1
        perm[k], perm[k + 1] = perm[k + 1], perm[k]
    return tuple(perm)


def pure_generator(i: int, j: int) -> tuple:
    """A(i,j) = (s_{j-1} ... s_{i+1}) s_i^2 (s_{i+1}^-1 ... s_{j-1}^-1)."""
    if not 1 <= i < j:
        raise BraidError(f"A({i},{j}) needs 1 <= i < j")
    conj = tuple(range(j - 1, i, -1))
    return conj + (i, i) + tuple(-a for a in reversed(conj))


def _inv(w: tuple) -> tuple:
    return tuple(-a for a in reversed(w))


def _comm(u: tuple, v: tuple) -> tuple:
    return u + v + _inv(u) + _inv(v)


_BTOK = re.compile(r"\s*(s\d+|A\(\s*\d+\s*,\s*\d+\s*\)|\^-?\d+|[\[\](),]|1)")


class _BraidParser:
    def __init__(self, text: str, m: int):
        self.toks = mi._lex(text, _BTOK)
        self.i = 0
        self.m = m
        self.n = len(text)

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def pos(self):
        return self.toks[self.i][1] if self.i < len(self.toks) else self.n

    def take(self, want=None):
        t = self.peek()
        if t is None or (want is not None and t != want):
            raise mi.WordSyntaxError(f"expected {want or 'a token'}", self.pos())
        self.i += 1
        return t

    def word(self, stop=(None,)) -> tuple:
        w: tuple = ()
        while self.peek() not in stop:
            w += self.factor()
        return w

    def factor(self) -> tuple:
        t = self.peek()
        p = self.pos()
        if t is None:
            raise mi.WordSyntaxError("unexpected end of input", p)
        if t.startswith("s"):
            self.take()
            k = int(t[1:])
            if not 1 <= k < self.m:
                raise BraidError(f"s{k} out of range for {self.m} strands")
            base: tuple = (k,)
        elif t.startswith("A("):
            self.take()
            i, j = (int(x) for x in t[2:-1].split(","))
            if not 1 <= i < j <= self.m:
                raise BraidError(f"A({i},{j}) needs 1 <= i < j <= {self.m}")
            base = pure_generator(i, j)
        elif t == "1":
            self.take()
            base = ()
        elif t == "[":
            self.take()
            u = self.word(stop=(",",))
            self.take(",")
            v = self.word(stop=("]",))
            self.take("]")
            base = _comm(u, v)
        elif t == "(":
            self.take()
            base = self.word(stop=(")",))
            self.take(")")
        else:
            raise mi.WordSyntaxError(f"unexpected {t!r}", p)
        if self.peek() and self.peek().startswith("^"):
            e = int(self.take()[1:])
            base = (base if e >= 0 else _inv(base)) * abs(e)
        return base


def parse_braid(text: str, strands: int) -> PureBraid:
    """Parse e.g. ``"[A(1,3),A(2,3)] s1^-1 s1"`` on the given number of strands."""
    if strands < 1:
        raise BraidError("need at least one strand")
    return PureBraid(strands, _BraidParser(text, strands).word())


# --------------------------------------------------------------------------
# Artin action and longitudes


def _generator_images(a: int, m: int) -> list:
    k = abs(a)
    imgs = [FreeWord.gen(i) for i in range(1, m + 1)]
    xk, xk1 = FreeWord.gen(k), FreeWord.gen(k + 1)
    if a > 0:
        imgs[k - 1] = xk * xk1 * xk.inverse()
        imgs[k] = xk
    else:
        imgs[k - 1] = xk1
        imgs[k] = xk1.inverse() * xk * xk1
    return imgs


def artin_images(b: PureBraid) -> tuple:
    """phi_b(x_i) for i = 1..m, exact in F."""
    m = b.strands
    imgs = [FreeWord.gen(i) for i in range(1, m + 1)]
    for a in b.word:
        gen = _generator_images(a, m)
        imgs = [w.substitute(gen) for w in imgs]
    return tuple(imgs)


def _conjugator(w: FreeWord, i: int) -> FreeWord:
    n = len(w)
    if n % 2 == 0 or w.letters[n // 2] != i:
        raise BraidError(f"image {w} is not a conjugate of x{i}")
    lam = FreeWord(w.letters[: n // 2])
    if lam * FreeWord.gen(i) * lam.inverse() != w:
        raise BraidError(f"image {w} is not a conjugate of x{i}")
    return lam * FreeWord.gen(i, -lam.exponent_sum(i))


def braid_longitudes(b: PureBraid) -> StringLinkData:
    imgs = artin_images(b)
    lons = tuple(_conjugator(w, i) for i, w in enumerate(imgs, start=1))
    return StringLinkData(b.strands, lons, "braid")


# --------------------------------------------------------------------------
# realizing distinct-label trees


def _rooted_to_braid(t, j: int) -> tuple:
    if isinstance(t, int):
        return pure_generator(t, j)
    return _comm(_rooted_to_braid(t[0], j), _rooted_to_braid(t[1], j))


def realization_word(t: Inner, strands: int | None = None) -> PureBraid:
    """The commutator braid of t rooted at its largest label (no verification)."""
    labs = tr.labels(t)
    if len(set(labs)) != len(labs):
        raise BraidError("realization needs pairwise distinct labels")
    j = max(labs)
    m = strands or j
    if j > m:
        raise BraidError(f"label {j} exceeds {m} strands")
    for lab, tv in tr.leaf_rootings(t):
        if lab == j:
            return PureBraid(m, _rooted_to_braid(tv, j))
    raise AssertionError("unreachable")


def realize_tree(t: Inner, strands: int | None = None, verify: bool = True) -> tuple[PureBraid, int]:
    """Commutator pure braid realizing t, with the sign s such that mu_n = s * eta_n(t).

    Verification runs the Milnor pipeline and raises RealizationError on mismatch.
    """
    b = realization_word(t, strands)
    if not verify:
        return b, 0
    n = t.order
    mu = mi.total_milnor(braid_longitudes(b), n)
    e = la.TensorElement.from_dict(homs.eta_tree(t, b.strands, la.LIE), b.strands, n, la.LIE)
    if mu == e:
        return b, 1
    if mu == -e:
        return b, -1
    raise RealizationError(f"mu_{n} of the realizing braid is {mu}, eta is {e}")
