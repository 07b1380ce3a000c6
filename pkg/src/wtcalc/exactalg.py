"""Exact integer linear algebra over Z.

Smith normal form with unimodular transforms, finitely presented abelian
groups, and kernel/cokernel analysis of homomorphisms between them.

Conventions: vectors are rows.  A presentation is a relator matrix with one
row per relator and one column per generator; a homomorphism is a matrix whose
i-th row is the image of the i-th source generator in destination generator
coordinates.  All arithmetic uses Python ints.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class DimensionError(ValueError):
    pass


class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured size bound."""


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError("entry count does not match rows x cols")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not rows:
                raise DimensionError("column count required for an empty matrix")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def coerce(cls, m, cols: int | None = None) -> "IntMatrix":
        if isinstance(m, IntMatrix):
            return m
        return cls.from_rows(m, cols)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols_t = list(zip(*other.entries)) if other.rows else [()] * other.cols
        out = tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in cols_t) for r in self.entries
        )
        return IntMatrix(self.rows, other.cols, out)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def dump(self) -> str:
        """Debug dump: one row per line, space separated decimal integers."""
        return "\n".join(" ".join(str(x) for x in r) for r in self.entries)


def determinant(m: IntMatrix) -> int:
    """Fraction-free (Bareiss) determinant of a square matrix."""
    n = m.rows
    if n != m.cols:
        raise DimensionError("determinant of a non-square matrix")
    a = m.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


# --------------------------------------------------------------------------
# Smith normal form (dense, with transforms)


def _pivot(a, t, nr, nc):
    best = None
    for i in range(t, nr):
        row = a[i]
        for j in range(t, nc):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
                if best[0] == 1:
                    return best
    return best


def _snf_dense(a: list[list[int]], want_u: bool, want_v: bool):
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = [[int(i == j) for j in range(nr)] for i in range(nr)] if want_u else None
    v = [[int(i == j) for j in range(nc)] for i in range(nc)] if want_v else None

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        if u is not None:
            u[i], u[k] = u[k], u[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        if v is not None:
            for row in v:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, q):  # row dst -= q * row src
        rd, rs = a[dst], a[src]
        for j in range(nc):
            if rs[j]:
                rd[j] -= q * rs[j]
        if u is not None:
            ud, us = u[dst], u[src]
            for j in range(nr):
                if us[j]:
                    ud[j] -= q * us[j]

    def add_col(dst, src, q):  # col dst -= q * col src
        for row in a:
            if row[src]:
                row[dst] -= q * row[src]
        if v is not None:
            for row in v:
                if row[src]:
                    row[dst] -= q * row[src]

    t = 0
    while t < min(nr, nc):
        p = _pivot(a, t, nr, nc)
        if p is None:
            break
        _, i, j = p
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            d = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, a[i][t] // d)
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, a[t][j] // d)
                    if a[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t onto the diagonal
                best = None
                for i in range(t + 1, nr):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), "r", i)
                for j in range(t + 1, nc):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), "c", j)
                if best[1] == "r":
                    swap_rows(t, best[2])
                else:
                    swap_cols(t, best[2])
                continue
            bad = None
            for i in range(t + 1, nr):
                row = a[i]
                for j in range(t + 1, nc):
                    if row[j] % d:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if u is not None:
                u[t] = [-x for x in u[t]]
        t += 1
    return u, a, v


def smith_normal_form(m) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, S, V) with U*M*V = S, U and V unimodular, S in Smith form.

    >>> U, S, V = smith_normal_form([[2, 4], [6, 8]])
    >>> S.tolist()
    [[2, 0], [0, 4]]
    """
    m = IntMatrix.coerce(m)
    if m.rows == 0 or m.cols == 0:
        return IntMatrix.identity(m.rows), m, IntMatrix.identity(m.cols)
    u, s, v = _snf_dense(m.tolist(), True, True)
    return (
        IntMatrix.from_rows(u, m.rows),
        IntMatrix.from_rows(s, m.cols),
        IntMatrix.from_rows(v, m.cols),
    )


def invariant_factors(m) -> list[int]:
    """Nonzero diagonal of the Smith form, in divisibility order."""
    m = IntMatrix.coerce(m)
    if m.rows == 0 or m.cols == 0:
        return []
    _, s, _ = _snf_dense(m.tolist(), False, False)
    return [s[i][i] for i in range(min(m.rows, m.cols)) if s[i][i]]


# --------------------------------------------------------------------------
# sparse row echelon; the workhorse for tall relator matrices


def _to_sparse(row) -> dict[int, int]:
    if isinstance(row, dict):
        return {j: x for j, x in row.items() if x}
    return {j: x for j, x in enumerate(row) if x}


def echelon(rows: Iterable, ncols: int, track: bool = False, limit_rows: int | None = None):
    """Row-echelonize a list of integer rows (dense lists or sparse dicts).

    Returns (basis, kernel) where basis is a list of sparse rows in echelon
    form spanning the same lattice (leading columns strictly increasing) and,
    when ``track`` is set, kernel is a basis of the left kernel given as
    sparse dicts over input row indices.  Otherwise kernel is None.  With
    ``track="all"`` a third list gives each basis row as a combination of
    input rows.
    """
    active = []
    for k, r in enumerate(rows):
        d = _to_sparse(r)
        if any(j < 0 or j >= ncols for j in d):
            raise DimensionError("row entry outside column range")
        if track:
            d[ncols + k] = 1
        if d:
            active.append(d)
    if limit_rows is not None and len(active) > limit_rows:
        raise ResourceLimitError(f"{len(active)} rows exceed limit {limit_rows}")

    by_col: dict[int, list] = {}

    def lead(d):
        return min((j for j in d if j < ncols), default=None)

    for d in active:
        by_col.setdefault(lead(d), []).append(d)
    basis = []
    for col in range(ncols):
        bucket = by_col.pop(col, None)
        if not bucket:
            continue
        while len(bucket) > 1:
            bucket.sort(key=lambda d: (abs(d[col]), len(d)))
            piv = bucket[0]
            pv = piv[col]
            rest = []
            for d in bucket[1:]:
                q = d[col] // pv
                for j, x in piv.items():
                    y = d.get(j, 0) - q * x
                    if y:
                        d[j] = y
                    else:
                        d.pop(j, None)
                if col in d:
                    rest.append(d)
                else:
                    ld = lead(d)
                    if ld is None:
                        by_col.setdefault(None, []).append(d)
                    else:
                        by_col.setdefault(ld, []).append(d)
            bucket = [piv] + rest
        piv = bucket[0]
        if piv[col] < 0:
            for j in piv:
                piv[j] = -piv[j]
        basis.append(piv)
    leftovers = by_col.pop(None, [])
    main_basis = [{j: x for j, x in d.items() if j < ncols} for d in basis]
    if not track:
        return main_basis, None
    kernel = [{j - ncols: x for j, x in d.items()} for d in leftovers]
    kernel.sort(key=lambda d: sorted(d.items()))
    if track == "all":
        transforms = [{j - ncols: x for j, x in d.items() if j >= ncols} for d in basis]
        return main_basis, kernel, transforms
    return main_basis, kernel


def reduce_by_basis(vec, basis: list[dict]) -> tuple[dict, list[int]]:
    """Reduce a vector by an echelon basis.

    Returns (remainder, coefficients).  The vector lies in the lattice iff the
    remainder is empty, in which case vec = sum coeff[i] * basis[i].
    """
    v = _to_sparse(vec)
    coeffs = []
    for b in basis:
        c = min(b)
        x = v.get(c, 0)
        q = x // b[c] if x else 0
        if q:
            for j, y in b.items():
                z = v.get(j, 0) - q * y
                if z:
                    v[j] = z
                else:
                    v.pop(j, None)
        coeffs.append(q)
    return v, coeffs


def in_row_lattice(vec, basis: list[dict]) -> bool:
    return not reduce_by_basis(vec, basis)[0]


def left_kernel(m) -> list[list[int]]:
    """Basis of {x : x M = 0} as dense integer rows."""
    m = IntMatrix.coerce(m)
    _, ker = echelon(m.entries, m.cols, track=True)
    return [[d.get(i, 0) for i in range(m.rows)] for d in ker]


# --------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class GroupStructure:
    rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise ValueError("negative rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError("torsion coefficients must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError("torsion coefficients must form a divisibility chain")

    @classmethod
    def from_elementary(cls, rank: int, orders: Iterable[int]) -> "GroupStructure":
        """Build from an arbitrary list of cyclic orders (not necessarily a chain)."""
        orders = [d for d in orders if d != 1]
        if any(d == 0 for d in orders):
            rank += sum(1 for d in orders if d == 0)
            orders = [d for d in orders if d]
        if not orders:
            return cls(rank, ())
        n = len(orders)
        diag = [[orders[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls(rank, tuple(d for d in invariant_factors(diag) if d > 1))

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    @property
    def order(self):
        """Group order, or None when infinite."""
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __add__(self, other: "GroupStructure") -> "GroupStructure":
        return GroupStructure.from_elementary(self.rank + other.rank, self.torsion + other.torsion)

    def to_dict(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z_{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def structure_of(relators, ngens: int, limit_rows: int | None = None) -> GroupStructure:
    return group_from_presentation(list(range(ngens)), relators, limit_rows=limit_rows).structure


@dataclass(frozen=True)
class PresentedGroup:
    """Z^generators / row-span(relators), with canonical coordinates.

    ``coordinate_map`` is a unimodular V such that x -> x V sends the relator
    lattice onto the span of diag(invariant factors).  ``moduli`` lists, per
    canonical coordinate, the modulus to reduce by (0 for a free coordinate)
    and only coordinates with modulus != 1 are kept.
    """

    generator_index: tuple
    relators: IntMatrix = field(repr=False)
    structure: GroupStructure
    coordinate_map: IntMatrix = field(repr=False)
    moduli: tuple = field(repr=False)
    basis: tuple = field(repr=False, default=())

    @property
    def ngens(self) -> int:
        return len(self.generator_index)

    def index(self, gen) -> int:
        return self._lookup()[gen]

    def _lookup(self):
        lk = self.__dict__.get("_lk")
        if lk is None:
            lk = {g: i for i, g in enumerate(self.generator_index)}
            object.__setattr__(self, "_lk", lk)
        return lk

    def coordinates(self, vec) -> tuple:
        """Canonical (torsion..., free...) coordinates of a generator vector."""
        if isinstance(vec, dict):
            items = [(j, x) for j, x in vec.items() if x]
        else:
            if len(vec) != self.ngens:
                raise DimensionError("vector length does not match generator count")
            items = [(j, x) for j, x in enumerate(vec) if x]
        v = self.coordinate_map.entries
        out = []
        for k, mod in self.moduli:
            y = sum(x * v[j][k] for j, x in items)
            out.append(y % mod if mod else y)
        return tuple(out)

    def is_zero(self, vec) -> bool:
        return not any(self.coordinates(vec))


def group_from_presentation(generators, relators, limit_rows: int | None = None) -> PresentedGroup:
    """Present Z^len(generators) modulo the row span of ``relators``.

    >>> group_from_presentation(["a"], [[2]]).structure
    GroupStructure(rank=0, torsion=(2,))
    """
    generators = tuple(generators)
    n = len(generators)
    if isinstance(relators, IntMatrix):
        rel_rows = list(relators.entries)
        if relators.cols != n:
            raise DimensionError("relator columns do not match generator count")
    else:
        rel_rows = list(relators)
        for r in rel_rows:
            if isinstance(r, dict):
                if any(j < 0 or j >= n for j in r):
                    raise DimensionError("relator entry outside generator range")
            elif len(r) != n:
                raise DimensionError("relator columns do not match generator count")
    basis, _ = echelon(rel_rows, n, limit_rows=limit_rows)
    rmat = IntMatrix.from_rows(
        [[d.get(j, 0) for j in range(n)] for d in basis], n
    )
    if basis and n:
        _, s, v = _snf_dense(rmat.tolist(), False, True)
        diag = [s[i][i] for i in range(min(len(s), n))]
    else:
        v = [[int(i == j) for j in range(n)] for i in range(n)]
        diag = []
    diag = diag + [0] * (n - len(diag))
    moduli = tuple((k, d) for k, d in enumerate(diag) if d != 1)
    # torsion coordinates first then free, matching GroupStructure order
    moduli = tuple(sorted(moduli, key=lambda kd: (kd[1] == 0, kd[0])))
    structure = GroupStructure(sum(1 for d in diag if d == 0), tuple(d for d in diag if d > 1))
    return PresentedGroup(
        generators,
        rmat,
        structure,
        IntMatrix.from_rows(v, n) if n else IntMatrix.zeros(0, 0),
        moduli,
        tuple(basis),
    )


@dataclass(frozen=True)
class HomReport:
    well_defined: bool
    kernel: GroupStructure | None
    cokernel: GroupStructure | None
    is_isomorphism: bool
    kernel_generators: tuple = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "well_defined": self.well_defined,
            "kernel": self.kernel.to_dict() if self.kernel else None,
            "cokernel": self.cokernel.to_dict() if self.cokernel else None,
            "is_isomorphism": self.is_isomorphism,
        }


def _dense(d: dict, n: int) -> list[int]:
    return [d.get(j, 0) for j in range(n)]


def preimage_lattice(f_rows: list[dict], dst_basis: list[dict], n_src: int, n_dst: int,
                     limit_rows: int | None = None) -> list[dict]:
    """Echelon basis of {x in Z^n_src : x F lies in the lattice of dst_basis}."""
    _, ker = echelon(list(f_rows) + list(dst_basis), n_dst, track=True, limit_rows=limit_rows)
    gens = [{i: x for i, x in d.items() if i < n_src} for d in ker]
    kbasis, _ = echelon(gens, n_src)
    return kbasis


def hom_analysis(src: PresentedGroup, dst: PresentedGroup, map_on_generators, limit_rows: int | None = None) -> HomReport:
    """Kernel and cokernel of the map induced on quotients.

    Row i of ``map_on_generators`` is the image of source generator i.
    """
    f = IntMatrix.coerce(map_on_generators, dst.ngens)
    if f.rows != src.ngens or f.cols != dst.ngens:
        raise DimensionError(
            f"map is {f.rows}x{f.cols}, expected {src.ngens}x{dst.ngens}"
        )
    fs = [_to_sparse(r) for r in f.entries]
    dst_basis = list(dst.basis)

    def image(rel: dict) -> dict:
        out: dict[int, int] = {}
        for i, x in rel.items():
            for j, y in fs[i].items():
                out[j] = out.get(j, 0) + x * y
        return {j: y for j, y in out.items() if y}

    src_rels = list(src.basis)
    for rel in src_rels:
        if not in_row_lattice(image(rel), dst_basis):
            return HomReport(False, None, None, False)

    # cokernel: Z^dst / (image + relators)
    cok = structure_of(fs + dst_basis, dst.ngens, limit_rows=limit_rows)

    # kernel: preimage lattice K of the relator lattice, modulo source relators
    n = src.ngens
    kbasis = preimage_lattice(fs, dst_basis, n, dst.ngens, limit_rows=limit_rows)
    coords = []
    for rel in src_rels:
        rem, c = reduce_by_basis(rel, kbasis)
        assert not rem, "source relator outside preimage lattice"
        coords.append(c)
    kernel = structure_of(coords, len(kbasis)) if kbasis else GroupStructure()
    return HomReport(
        True,
        kernel,
        cok,
        kernel.is_trivial and cok.is_trivial,
        tuple(tuple(_dense(b, n)) for b in kbasis),
    )


def subgroup_presentation(ambient: PresentedGroup, generators_rows: list, tags=None) -> tuple[PresentedGroup, list[dict]]:
    """Present the subgroup of ``ambient`` generated by the given vectors ...

    ... when the vectors span the full preimage lattice of the subgroup, i.e.
    a lattice K containing the ambient relator lattice.  Returns the group
    on an echelon basis of K with relators = ambient relators in that basis,
    plus the basis itself (sparse rows in ambient generator coordinates).
    """
    n = ambient.ngens
    kbasis, _ = echelon(list(generators_rows) + list(ambient.basis), n)
    rels = []
    for rel in ambient.basis:
        rem, c = reduce_by_basis(rel, kbasis)
        assert not rem
        rels.append(c)
    k = len(kbasis)
    tags = tuple(tags) if tags is not None else tuple(range(k))
    return group_from_presentation(tags[:k] if len(tags) >= k else tuple(range(k)), rels), kbasis
