"""Free group words, truncated Magnus expansions and Milnor invariants of string links.

A word is a tuple of nonzero ints: ``i`` is x_i and ``-i`` is x_i^-1.  The
Magnus expansion sends x_i to 1 + X_i.  Conventions (see CONVENTIONS.md):
the Artin automorphism of a string link sends x_i to l_i x_i l_i^-1, and the
longitude l_i has zero exponent sum in x_i (0-framing).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product

from . import liealg as la


class WordSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class MilnorError(ValueError):
    pass


class LowerOrderError(MilnorError):
    """A lower-order Milnor invariant does not vanish."""

    def __init__(self, order: int):
        super().__init__(f"Milnor invariant of order {order} is nonzero")
        self.order = order


# --------------------------------------------------------------------------
# free words


def reduce_word(letters) -> tuple:
    out: list = []
    for a in letters:
        if a == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


@dataclass(frozen=True)
class FreeWord:
    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", reduce_word(self.letters))

    @classmethod
    def gen(cls, i: int, e: int = 1) -> "FreeWord":
        return cls((i,) * e if e >= 0 else (-i,) * -e)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple(-a for a in reversed(self.letters)))

    def __pow__(self, k: int) -> "FreeWord":
        base = self if k >= 0 else self.inverse()
        return FreeWord(base.letters * abs(k))

    def __len__(self):
        return len(self.letters)

    def __bool__(self):
        return bool(self.letters)

    def exponent_sum(self, i: int) -> int:
        return sum(1 if a == i else -1 for a in self.letters if abs(a) == i)

    def max_generator(self) -> int:
        return max((abs(a) for a in self.letters), default=0)

    def substitute(self, images) -> "FreeWord":
        """Apply the endomorphism x_i -> images[i-1]."""
        out: list = []
        for a in self.letters:
            w = images[abs(a) - 1]
            out.extend(w.letters if a > 0 else w.inverse().letters)
        return FreeWord(tuple(out))

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"x{a}" if a > 0 else f"x{-a}^-1" for a in self.letters)


def commutator(u: FreeWord, v: FreeWord) -> FreeWord:
    """[u, v] = u v u^-1 v^-1."""
    return u * v * u.inverse() * v.inverse()


_WTOK = re.compile(r"\s*(x\d+|\^-?\d+|[\[\](),]|1)")


def _lex(text: str, tok: re.Pattern):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        mt = tok.match(text, pos)
        if not mt:
            while text[pos].isspace():
                pos += 1
            raise WordSyntaxError(f"unexpected character {text[pos]!r}", pos)
        out.append((mt.group(1), mt.start(1)))
        pos = mt.end()
    return out


class _WordParser:
    def __init__(self, text: str, m: int | None):
        self.toks = _lex(text, _WTOK)
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
            raise WordSyntaxError(f"expected {want or 'a token'}", self.pos())
        self.i += 1
        return t

    def word(self, stop=(None,)) -> FreeWord:
        w = FreeWord()
        while self.peek() not in stop:
            w = w * self.factor()
        return w

    def factor(self) -> FreeWord:
        t = self.peek()
        p = self.pos()
        if t is None:
            raise WordSyntaxError("unexpected end of input", p)
        if t.startswith("x"):
            self.take()
            k = int(t[1:])
            if k < 1 or (self.m is not None and k > self.m):
                raise WordSyntaxError(f"generator x{k} out of range", p)
            base = FreeWord.gen(k)
        elif t == "1":
            self.take()
            base = FreeWord()
        elif t == "[":
            self.take()
            u = self.word(stop=(",",))
            self.take(",")
            v = self.word(stop=("]",))
            self.take("]")
            base = commutator(u, v)
        elif t == "(":
            self.take()
            base = self.word(stop=(")",))
            self.take(")")
        else:
            raise WordSyntaxError(f"unexpected {t!r}", p)
        if self.peek() and self.peek().startswith("^"):
            base = base ** int(self.take()[1:])
        return base


def parse_word(text: str, m: int | None = None) -> FreeWord:
    """Parse e.g. ``"x1 x2^-1 [x1,x2]"``."""
    p = _WordParser(text, m)
    w = p.word()
    return w


# --------------------------------------------------------------------------
# Magnus expansion


@dataclass(frozen=True)
class MagnusSeries:
    """Truncated series: sparse map from words in X_1..X_m (tuples) to ints."""

    q: int
    coeffs: tuple  # sorted (word, coeff) pairs

    @classmethod
    def from_dict(cls, d: dict, q: int) -> "MagnusSeries":
        return cls(q, tuple(sorted((w, c) for w, c in d.items() if c and len(w) <= q)))

    @classmethod
    def one(cls, q: int) -> "MagnusSeries":
        return cls(q, (((), 1),))

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    def coefficient(self, word) -> int:
        return self.as_dict().get(tuple(word), 0)

    def part(self, d: int) -> dict:
        return {w: c for w, c in self.coeffs if len(w) == d}

    def __mul__(self, other: "MagnusSeries") -> "MagnusSeries":
        q = min(self.q, other.q)
        out: dict = {}
        for wa, ca in self.coeffs:
            for wb, cb in other.coeffs:
                if len(wa) + len(wb) <= q:
                    w = wa + wb
                    out[w] = out.get(w, 0) + ca * cb
        return MagnusSeries.from_dict(out, q)

    def first_nonconstant_degree(self) -> int | None:
        """Smallest d >= 1 with a nonzero degree-d coefficient, or None."""
        degs = [len(w) for w, c in self.coeffs if w]
        return min(degs) if degs else None

    def __str__(self):
        parts = []
        for w, c in self.coeffs:
            mono = "".join(f"X{i}" for i in w) or "1"
            if not w:
                parts.append(f"+ {c}")
            else:
                parts.append(("+ " if c > 0 else "- ") + (mono if abs(c) == 1 else f"{abs(c)}*{mono}"))
        s = " ".join(parts) or "+ 0"
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _mul_letter(d: dict, a: int, q: int) -> dict:
    i = abs(a)
    out: dict = {}
    for w, c in d.items():
        out[w] = out.get(w, 0) + c
        if a > 0:
            if len(w) < q:
                w1 = w + (i,)
                out[w1] = out.get(w1, 0) + c
        else:
            # (1 + X)^-1 = 1 - X + X^2 - ...
            s = -1
            for k in range(1, q - len(w) + 1):
                wk = w + (i,) * k
                out[wk] = out.get(wk, 0) + s * c
                s = -s
    return {w: c for w, c in out.items() if c}


def magnus(w: FreeWord, q: int) -> MagnusSeries:
    """Magnus expansion of w truncated above degree q."""
    if q < 0:
        raise ValueError("truncation degree must be >= 0")
    d = {(): 1}
    for a in w.letters:
        d = _mul_letter(d, a, q)
    return MagnusSeries.from_dict(d, q)


def lower_central_depth(w: FreeWord, q: int) -> int | None:
    """Largest c <= q with w in F_c, or None if w lies in F_{q+1}."""
    d = magnus(w, q).first_nonconstant_degree()
    return d


def equal_mod(u: FreeWord, v: FreeWord, depth: int) -> bool:
    """u == v in F / F_depth."""
    if depth <= 1:
        return True
    return magnus(u.inverse() * v, depth - 1).first_nonconstant_degree() is None


# --------------------------------------------------------------------------
# string link data and Milnor invariants


@dataclass(frozen=True)
class StringLinkData:
    strands: int
    longitudes: tuple  # FreeWords
    source: str = "explicit"

    def __post_init__(self):
        if len(self.longitudes) != self.strands:
            raise MilnorError(f"expected {self.strands} longitudes, got {len(self.longitudes)}")
        for lw in self.longitudes:
            if lw.max_generator() > self.strands:
                raise MilnorError(f"longitude {lw} uses a generator beyond x{self.strands}")

    @classmethod
    def trivial(cls, m: int) -> "StringLinkData":
        return cls(m, tuple(FreeWord() for _ in range(m)), "explicit")

    @classmethod
    def parse(cls, texts, m: int | None = None) -> "StringLinkData":
        texts = list(texts)
        m = m or len(texts)
        return cls(m, tuple(parse_word(t, m) for t in texts), "explicit")

    def power(self, k: int) -> "StringLinkData":
        return StringLinkData(self.strands, tuple(lw ** k for lw in self.longitudes), self.source)


def milnor_mu(s: StringLinkData, index) -> int:
    """mu(i_1 ... i_k j): coefficient of X_{i_1}...X_{i_k} in the Magnus expansion of l_j."""
    index = tuple(index)
    if len(index) < 2:
        raise MilnorError("a Milnor index needs at least two letters")
    if any(i < 1 or i > s.strands for i in index):
        raise MilnorError("index letter out of range")
    *word, j = index
    return magnus(s.longitudes[j - 1], len(word)).coefficient(word)


def milnor_numbers(s: StringLinkData, length: int) -> dict:
    """All nonzero mu of a given length, keyed by index strings like "123"."""
    out = {}
    m = s.strands
    series = [magnus(lw, length - 1) for lw in s.longitudes]
    for idx in product(range(1, m + 1), repeat=length):
        c = series[idx[-1] - 1].coefficient(idx[:-1])
        if c:
            out["".join(map(str, idx)) if m < 10 else ",".join(map(str, idx))] = c
    return out


def first_nonvanishing(s: StringLinkData, max_order: int) -> int | None:
    """Smallest order n <= max_order with mu_n(s) != 0."""
    best = None
    for lw in s.longitudes:
        d = magnus(lw, max_order + 1).first_nonconstant_degree()
        if d is not None and (best is None or d < best):
            best = d
    return None if best is None else best - 1


def total_milnor(s: StringLinkData, n: int) -> la.TensorElement:
    """mu_n = sum_i X_i (x) [l_i] in L_1 (x) L_{n+1}; checks lower orders and D_n membership."""
    if n < 0:
        raise ValueError("order must be >= 0")
    m = s.strands
    low = first_nonvanishing(s, n - 1) if n >= 1 else None
    if low is not None:
        raise LowerOrderError(low)
    out: dict = {}
    for i, lw in enumerate(s.longitudes, start=1):
        poly = magnus(lw, n + 1).part(n + 1)
        try:
            lie = la.poly_to_hall(poly, m, n + 1)
        except ValueError:
            raise MilnorError(f"degree {n + 1} part of l_{i} is not a Lie element") from None
        for k, c in lie.items():
            out[(i, k)] = c
    x = la.TensorElement.from_dict(out, m, n, la.LIE)
    if not la.in_bracket_kernel(x):
        raise MilnorError(f"mu_{n} is not in D_{n}; the longitudes are not those of a string link")
    return x


def sato_levine(s: StringLinkData, order: int) -> la.LieElement:
    """SL_{2n-1} = sl(mu_{2n}), valued in Z_2 (x) L_{n+1}."""
    if order < 1 or order % 2 == 0:
        raise ValueError("Sato-Levine invariants live in odd orders")
    return la.sl_map(total_milnor(s, order + 1))


# --------------------------------------------------------------------------
# Artin representation


@dataclass(frozen=True)
class ArtinAutomorphism:
    """x_i -> images[i-1] on F / F_depth."""

    strands: int
    depth: int
    images: tuple

    @classmethod
    def identity(cls, m: int, depth: int) -> "ArtinAutomorphism":
        return cls(m, depth, tuple(FreeWord.gen(i) for i in range(1, m + 1)))

    def apply(self, w: FreeWord) -> FreeWord:
        return w.substitute(self.images)

    def compose(self, other: "ArtinAutomorphism") -> "ArtinAutomorphism":
        """self followed by other (right action), i.e. other o self as maps."""
        depth = min(self.depth, other.depth)
        return ArtinAutomorphism(self.strands, depth, tuple(other.apply(w) for w in self.images))

    def equals(self, other: "ArtinAutomorphism") -> bool:
        depth = min(self.depth, other.depth)
        return self.strands == other.strands and all(
            equal_mod(a, b, depth) for a, b in zip(self.images, other.images)
        )

    def is_identity(self) -> bool:
        return self.equals(ArtinAutomorphism.identity(self.strands, self.depth))

    def fixes_product(self) -> bool:
        p = FreeWord(tuple(range(1, self.strands + 1)))
        return equal_mod(self.apply(p), p, self.depth)

    def to_dict(self) -> dict:
        return {"depth": self.depth, "images": {f"x{i}": str(w) for i, w in enumerate(self.images, 1)}}


def artin_rep(s: StringLinkData, n: int) -> ArtinAutomorphism:
    """x_i -> l_i x_i l_i^-1 on F / F_{n+2}."""
    m = s.strands
    images = tuple(
        lw * FreeWord.gen(i) * lw.inverse() for i, lw in enumerate(s.longitudes, start=1)
    )
    a = ArtinAutomorphism(m, n + 2, images)
    if not a.fixes_product():
        raise MilnorError("the automorphism does not fix x_1...x_m; invalid longitudes")
    return a
