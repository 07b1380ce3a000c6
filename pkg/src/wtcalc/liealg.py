"""Free Lie and free quasi-Lie rings over Z on generators X_1..X_m.

Brackets are written as rooted trees: ``(a, b)`` is [a, b] and an int i is
X_i.  Elements are sparse dicts ``{basis_key: coeff}``.  Hall basis keys are
Hall trees; in the quasi-Lie ring an even degree additionally carries the
order-2 squares ``Sq(h) = [h, h]`` for Hall trees h of half the degree.

The Hall set is the mirror of M. Hall's basic commutators: a pair (u, v) of
Hall trees is Hall iff u < v and, when v = (x, y), x <= u.  Hall trees are
ordered by degree, then by the positions of their factors.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import lru_cache

from . import exactalg
from .exactalg import GroupStructure

LIE = "lie"
QUASI = "quasi"


@dataclass(frozen=True)
class Sq:
    """The 2-torsion square [h, h] of a Hall tree h (quasi-Lie only)."""

    h: object

    def __str__(self):
        return f"[{bracket_str(self.h)},{bracket_str(self.h)}]"


def degree(t) -> int:
    if isinstance(t, Sq):
        return 2 * degree(t.h)
    if isinstance(t, int):
        return 1
    return degree(t[0]) + degree(t[1])


def bracket_str(t) -> str:
    if isinstance(t, Sq):
        return str(t)
    if isinstance(t, int):
        return f"X{t}"
    return f"[{bracket_str(t[0])},{bracket_str(t[1])}]"


def _check_flavor(flavor):
    if flavor not in (LIE, QUASI):
        raise ValueError(f"unknown flavor {flavor!r}")


# --------------------------------------------------------------------------
# Witt ranks and Hall sets


def mobius(n: int) -> int:
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


def witt_rank(m: int, d: int) -> int:
    """Rank of the degree-d part of the free Lie ring on m generators."""
    if m < 1 or d < 1:
        raise ValueError("need m >= 1 and d >= 1")
    total = sum(mobius(e) * m ** (d // e) for e in range(1, d + 1) if d % e == 0)
    return total // d


@lru_cache(maxsize=None)
def _hall_levels(m: int, d: int) -> tuple:
    """Hall trees of degrees 1..d, grouped by degree."""
    levels = [(), tuple(range(1, m + 1))]
    pos = {i: (1, k) for k, i in enumerate(levels[1])}
    for deg in range(2, d + 1):
        out = []
        for du in range(1, deg // 2 + 1):
            dv = deg - du
            for u in levels[du]:
                for v in levels[dv]:
                    if not pos[u] < pos[v]:
                        continue
                    if not isinstance(v, int) and pos[v[0]] > pos[u]:
                        continue
                    out.append((u, v))
        out.sort(key=lambda t: (pos[t[0]], pos[t[1]]))
        for k, t in enumerate(out):
            pos[t] = (deg, k)
        levels.append(tuple(out))
    return tuple(levels), pos


def hall_position(m: int, t) -> tuple:
    levels, pos = _hall_levels(m, degree(t))
    return pos[t]


@lru_cache(maxsize=None)
def hall_trees(m: int, d: int) -> tuple:
    if m < 1 or d < 1:
        raise ValueError("need m >= 1 and d >= 1")
    return _hall_levels(m, d)[0][d]


@dataclass(frozen=True)
class HallBasis:
    m: int
    degree: int
    flavor: str
    elements: tuple
    squares: tuple

    @property
    def keys(self) -> tuple:
        return self.elements + tuple(Sq(h) for h in self.squares)

    def __len__(self):
        return len(self.elements) + len(self.squares)

    def index(self) -> dict:
        return {k: i for i, k in enumerate(self.keys)}

    def moduli(self) -> tuple:
        return (0,) * len(self.elements) + (2,) * len(self.squares)


@lru_cache(maxsize=None)
def hall_basis(m: int, d: int, flavor: str = LIE) -> HallBasis:
    """Hall basis of L_d(m); the quasi flavor appends [H,H] in even degree.

    >>> [bracket_str(h) for h in hall_basis(2, 2).elements]
    ['[X1,X2]']
    """
    _check_flavor(flavor)
    sq = hall_trees(m, d // 2) if flavor == QUASI and d % 2 == 0 else ()
    return HallBasis(m, d, flavor, hall_trees(m, d), tuple(sq))


# --------------------------------------------------------------------------
# rewriting into the Hall basis


def _add(out: dict, other: dict, c: int = 1):
    for k, x in other.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)


def _normalize(d: dict) -> dict:
    out = {}
    for k, x in d.items():
        if isinstance(k, Sq):
            x %= 2
        if x:
            out[k] = x
    return out


def _max_label(t) -> int:
    if isinstance(t, Sq):
        return _max_label(t.h)
    if isinstance(t, int):
        return t
    return max(_max_label(t[0]), _max_label(t[1]))


@lru_cache(maxsize=None)
def _bracket_hall(m: int, u, v, flavor: str) -> tuple:
    """[u, v] for Hall trees u, v, as a sorted tuple of (key, coeff)."""
    if u == v:
        return ((Sq(u), 1),) if flavor == QUASI else ()
    pu, pv = hall_position(m, u), hall_position(m, v)
    if pu > pv:
        return tuple((k, -c) for k, c in _bracket_hall(m, v, u, flavor))
    if isinstance(v, int) or hall_position(m, v[0]) <= pu:
        return (((u, v), 1),)
    # v = (x, y) with x > u:  [u,[x,y]] = [[u,x],y] + [x,[u,y]]
    x, y = v
    out: dict = {}
    for k, c in _bracket_hall(m, u, x, flavor):
        if not isinstance(k, Sq):
            _add(out, dict(_bracket_hall(m, k, y, flavor)), c)
    for k, c in _bracket_hall(m, u, y, flavor):
        if not isinstance(k, Sq):
            _add(out, dict(_bracket_hall(m, x, k, flavor)), c)
    return tuple(sorted(_normalize(out).items(), key=lambda kc: _sort_key(m, kc[0])))


def _sort_key(m, k):
    if isinstance(k, Sq):
        return (1,) + hall_position(m, k.h)
    return (0,) + hall_position(m, k)


def bracket(a: dict, b: dict, flavor: str = LIE, m: int | None = None) -> dict:
    """Bilinear bracket of two reduced elements."""
    _check_flavor(flavor)
    if m is None:
        m = max((_max_label(k) for k in list(a) + list(b)), default=1)
    out: dict = {}
    for ka, ca in a.items():
        if isinstance(ka, Sq):
            continue  # squares are central in the quasi-Lie ring
        for kb, cb in b.items():
            if isinstance(kb, Sq):
                continue
            _add(out, dict(_bracket_hall(m, ka, kb, flavor)), ca * cb)
    return _normalize(out)


def reduce_bracket(t, flavor: str = LIE, m: int | None = None) -> dict:
    """Hall normal form of a bracket monomial given as a rooted tree."""
    _check_flavor(flavor)
    if m is None:
        m = _max_label(t)
    if isinstance(t, int):
        return {t: 1}
    return bracket(reduce_bracket(t[0], flavor, m), reduce_bracket(t[1], flavor, m), flavor, m)


@dataclass(frozen=True)
class LieElement:
    flavor: str
    m: int
    degree: int
    coords: tuple

    @classmethod
    def from_dict(cls, d: dict, m: int, deg: int, flavor: str = LIE) -> "LieElement":
        basis = hall_basis(m, deg, flavor)
        idx = basis.index()
        coords = [0] * len(basis)
        for k, c in d.items():
            coords[idx[k]] = c
        return cls(flavor, m, deg, tuple(coords))

    def to_dict(self) -> dict:
        keys = hall_basis(self.m, self.degree, self.flavor).keys
        return {k: c for k, c in zip(keys, self.coords) if c}

    def is_zero(self) -> bool:
        return not any(self.coords)

    def mod2(self) -> "LieElement":
        return LieElement(self.flavor, self.m, self.degree, tuple(c % 2 for c in self.coords))

    def __str__(self):
        return format_element(self.to_dict())


def lie_reduce(expr, flavor: str = LIE, m: int | None = None) -> LieElement:
    """Reduce a bracket monomial (or list of (coeff, monomial)) to Hall coordinates.

    >>> lie_reduce((2, 1)).to_dict()
    {(1, 2): -1}
    """
    terms = expr if isinstance(expr, list) else [(1, expr)]
    if m is None:
        m = max(_max_label(t) for _, t in terms)
    degs = {degree(t) for _, t in terms}
    if len(degs) != 1:
        raise ValueError("expression is not homogeneous")
    out: dict = {}
    for c, t in terms:
        _add(out, reduce_bracket(t, flavor, m), c)
    return LieElement.from_dict(_normalize(out), m, degs.pop(), flavor)


def format_element(d: dict) -> str:
    if not d:
        return "0"
    parts = []
    for k, c in d.items():
        name = bracket_str(k)
        if c == 1:
            parts.append(f"+ {name}")
        elif c == -1:
            parts.append(f"- {name}")
        else:
            parts.append(f"{'+' if c > 0 else '-'} {abs(c)}*{name}")
    s = " ".join(parts)
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


# --------------------------------------------------------------------------
# tensor-algebra route: expansion into noncommutative polynomials


@lru_cache(maxsize=None)
def expand(t) -> tuple:
    """Noncommutative polynomial of a bracket tree, as sorted (word, coeff) pairs."""
    if isinstance(t, int):
        return (((t,), 1),)
    a, b = dict(expand(t[0])), dict(expand(t[1]))
    out: dict = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            out[wa + wb] = out.get(wa + wb, 0) + ca * cb
            out[wb + wa] = out.get(wb + wa, 0) - ca * cb
    return tuple(sorted((w, c) for w, c in out.items() if c))


def _word_index(w, m) -> int:
    k = 0
    for x in w:
        k = k * m + (x - 1)
    return k


@lru_cache(maxsize=None)
def _hall_solver(m: int, d: int):
    trees = hall_trees(m, d)
    rows = [{_word_index(w, m): c for w, c in expand(h)} for h in trees]
    basis, kernel, transforms = exactalg.echelon(rows, m ** d, track="all")
    assert not kernel, "Hall polynomials are linearly dependent"
    return basis, transforms


def poly_to_hall(poly: dict, m: int, d: int) -> dict:
    """Hall coordinates of a homogeneous Lie polynomial {word: coeff}.

    Raises ValueError if the polynomial is not in the integral Lie span.
    """
    trees = hall_trees(m, d)
    basis, transforms = _hall_solver(m, d)
    vec = {_word_index(w, m): c for w, c in poly.items() if c}
    if any(len(w) != d for w, c in poly.items() if c):
        raise ValueError("polynomial is not homogeneous of the stated degree")
    rem, coeffs = exactalg.reduce_by_basis(vec, basis)
    if rem:
        raise ValueError("polynomial is not an integral Lie element")
    out: dict = {}
    for q, tr in zip(coeffs, transforms):
        if q:
            for i, x in tr.items():
                out[trees[i]] = out.get(trees[i], 0) + q * x
    return {k: c for k, c in out.items() if c}


def lie_reduce_via_expansion(t, m: int) -> dict:
    """Hall coordinates through the tensor algebra; independent of the rewriting."""
    return poly_to_hall(dict(expand(t)), m, degree(t))


# --------------------------------------------------------------------------
# bracketing map L_1 (x) L_{n+1} -> L_{n+2} and its kernel


@dataclass(frozen=True)
class TensorSpace:
    """L_1 (x) L_{n+1} with coordinates indexed by (i, Hall key)."""

    m: int
    n: int
    flavor: str

    @property
    def keys(self) -> tuple:
        return _tensor_keys(self.m, self.n, self.flavor)

    def index(self) -> dict:
        return _tensor_index(self.m, self.n, self.flavor)

    def group(self) -> exactalg.PresentedGroup:
        return _tensor_group(self.m, self.n, self.flavor)


@lru_cache(maxsize=None)
def _tensor_keys(m, n, flavor):
    keys = hall_basis(m, n + 1, flavor).keys
    return tuple((i, k) for i in range(1, m + 1) for k in keys)


@lru_cache(maxsize=None)
def _tensor_index(m, n, flavor):
    return {k: j for j, k in enumerate(_tensor_keys(m, n, flavor))}


@lru_cache(maxsize=None)
def _tensor_group(m, n, flavor):
    keys = _tensor_keys(m, n, flavor)
    rels = [{j: 2} for j, (_, k) in enumerate(keys) if isinstance(k, Sq)]
    return exactalg.group_from_presentation(keys, rels)


@dataclass(frozen=True)
class TensorElement:
    m: int
    n: int
    flavor: str
    coords: tuple

    @classmethod
    def from_dict(cls, d: dict, m: int, n: int, flavor: str = LIE) -> "TensorElement":
        idx = _tensor_index(m, n, flavor)
        coords = [0] * len(idx)
        for k, c in d.items():
            if isinstance(k[1], Sq):
                c %= 2
            coords[idx[k]] += c
        if flavor == QUASI:
            keys = _tensor_keys(m, n, flavor)
            coords = [c % 2 if isinstance(keys[j][1], Sq) else c for j, c in enumerate(coords)]
        return cls(m, n, flavor, tuple(coords))

    def to_dict(self) -> dict:
        return {k: c for k, c in zip(_tensor_keys(self.m, self.n, self.flavor), self.coords) if c}

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other):
        return TensorElement.from_dict(_sum_dicts(self.to_dict(), other.to_dict()), self.m, self.n, self.flavor)

    def __neg__(self):
        return TensorElement.from_dict({k: -c for k, c in self.to_dict().items()}, self.m, self.n, self.flavor)

    def scale(self, c: int):
        return TensorElement.from_dict({k: c * x for k, x in self.to_dict().items()}, self.m, self.n, self.flavor)

    def __str__(self):
        d = self.to_dict()
        if not d:
            return "0"
        parts = []
        for (i, k), c in d.items():
            s = f"X{i}(x){bracket_str(k)}"
            parts.append(("+ " if c > 0 else "- ") + (s if abs(c) == 1 else f"{abs(c)}*{s}"))
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _sum_dicts(a, b):
    out = dict(a)
    _add(out, b)
    return out


def bracket_map_image(m: int, n: int, flavor: str, key) -> dict:
    """[X_i, k] for a tensor coordinate key (i, k)."""
    i, k = key
    if isinstance(k, Sq):
        return {}
    return bracket({i: 1}, {k: 1}, flavor, m)


def tensor_bracket(x: TensorElement) -> dict:
    out: dict = {}
    for key, c in x.to_dict().items():
        _add(out, bracket_map_image(x.m, x.n, x.flavor, key), c)
    return _normalize(out)


@lru_cache(maxsize=None)
def bracket_matrix(m: int, n: int, flavor: str) -> list:
    """Rows: images of tensor coordinates in L_{n+2} Hall coordinates."""
    tgt = hall_basis(m, n + 2, flavor).index()
    rows = []
    for key in _tensor_keys(m, n, flavor):
        rows.append({tgt[k]: c for k, c in bracket_map_image(m, n, flavor, key).items()})
    return rows


@lru_cache(maxsize=None)
def target_group(m: int, d: int, flavor: str) -> exactalg.PresentedGroup:
    basis = hall_basis(m, d, flavor)
    rels = [{j: 2} for j, mod in enumerate(basis.moduli()) if mod == 2]
    return exactalg.group_from_presentation(basis.keys, rels)


@dataclass(frozen=True)
class BracketKernel:
    m: int
    n: int
    flavor: str
    structure: GroupStructure
    lattice: tuple  # echelon basis (sparse rows) of the preimage lattice
    group: exactalg.PresentedGroup

    @property
    def basis(self) -> list:
        return [
            TensorElement.from_dict(
                {_tensor_keys(self.m, self.n, self.flavor)[j]: c for j, c in row.items()},
                self.m, self.n, self.flavor,
            )
            for row in self.lattice
        ]

    def coordinates(self, x: TensorElement) -> list[int]:
        """Coordinates of a kernel element in the lattice basis (ValueError if outside)."""
        rem, coeffs = exactalg.reduce_by_basis(
            {j: c for j, c in enumerate(x.coords) if c}, list(self.lattice)
        )
        if rem:
            raise ValueError("element is not in the bracket kernel")
        return coeffs


@lru_cache(maxsize=None)
def bracket_kernel(n: int, m: int, flavor: str = LIE) -> BracketKernel:
    """Kernel D_n (Lie) or D'_n (quasi) of X_i (x) Y -> [X_i, Y]."""
    _check_flavor(flavor)
    if n < 0:
        raise ValueError("need n >= 0")
    src = _tensor_group(m, n, flavor)
    dst = target_group(m, n + 2, flavor)
    lattice = exactalg.preimage_lattice(bracket_matrix(m, n, flavor), list(dst.basis), src.ngens, dst.ngens)
    rels = []
    for rel in src.basis:
        rem, c = exactalg.reduce_by_basis(rel, lattice)
        assert not rem
        rels.append(c)
    group = exactalg.group_from_presentation(tuple(range(len(lattice))), rels)
    return BracketKernel(m, n, flavor, group.structure, tuple(lattice), group)


def in_bracket_kernel(x: TensorElement) -> bool:
    return not tensor_bracket(x)


# --------------------------------------------------------------------------
# the Sato-Levine map D_{2n} -> Z_2 (x) L_{n+1}


class NotInKernelError(ValueError):
    pass


def sl_map(x: TensorElement) -> LieElement:
    """Quasi-Lie bracket of x, read back through the squaring isomorphism."""
    if x.flavor != LIE:
        raise ValueError("sl_map takes a Lie-flavor tensor element")
    if x.n % 2:
        raise ValueError("sl_map is defined on D_{2n}")
    if tensor_bracket(x):
        raise NotInKernelError("element does not lie in D_{2n}")
    out: dict = {}
    for (i, k), c in x.to_dict().items():
        _add(out, bracket({i: 1}, {k: 1}, QUASI, x.m), c)
    out = _normalize(out)
    if any(not isinstance(k, Sq) for k in out):
        raise AssertionError("quasi-Lie bracket left the torsion block")
    half = x.n // 2 + 1
    return LieElement.from_dict({k.h: 1 for k in out}, x.m, half, LIE).mod2()

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))
