"""The maps eta (into D_n) and eta' (into D'_n), and the structural checks built on them.

eta(t) = sum over univalent v of X_{l(v)} (x) B_v(t), where B_v(t) is the
bracket read off from t rooted at v (same reading as ``trees.leaf_rootings``).
On twisted generators eta(J^oo) = eta(<J,J>) / 2.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import exactalg
from . import liealg as la
from . import towergroups as tg
from . import trees as tr
from .exactalg import GroupStructure, HomReport
from .trees import Inner, Twisted


class EtaConsistencyError(AssertionError):
    pass


def _flavor_for(group_flavor: str) -> str:
    # twisted and framed-odd groups map to D_n, plain T_n maps to D'_n
    return la.QUASI if group_flavor == tg.PLAIN else la.LIE


def eta_tree(t, m: int, flavor: str = la.LIE) -> dict:
    """eta of a single generator as a sparse tensor dict {(i, hall_key): c}."""
    if isinstance(t, Twisted):
        if flavor != la.LIE:
            raise ValueError("twisted generators only map to D_n")
        full = eta_tree(Inner(t.tree, t.tree), m, flavor)
        if any(c % 2 for c in full.values()):
            raise EtaConsistencyError(f"eta(<J,J>) has an odd coefficient for J = {tr.fmt(t.tree)}")
        return {k: c // 2 for k, c in full.items()}
    out: dict = {}
    for i, tv in tr.leaf_rootings(t):
        for k, c in la.reduce_bracket(tv, flavor, m).items():
            out[(i, k)] = out.get((i, k), 0) + c
    return _clean(out)


def _clean(d: dict) -> dict:
    out = {}
    for (i, k), c in d.items():
        if isinstance(k, la.Sq):
            c %= 2
        if c:
            out[(i, k)] = c
    return out


def eta_element(t, m: int, flavor: str = la.LIE) -> la.TensorElement:
    n = t.order
    return la.TensorElement.from_dict(eta_tree(t, m, flavor), m, n, flavor)


@dataclass(frozen=True)
class EtaMatrix:
    source: tg.TreeGroup
    flavor: str          # lie (target D_n) or quasi (target D'_n)
    rows: tuple          # row g: sparse tensor-coordinate image of generator g
    kernel: la.BracketKernel = field(repr=False)

    @property
    def order(self) -> int:
        return self.source.order

    @property
    def labels(self) -> int:
        return self.source.labels

    def image(self, vec: dict) -> dict:
        out: dict = {}
        for g, x in vec.items():
            for j, y in self.rows[g].items():
                out[j] = out.get(j, 0) + x * y
        return {j: y for j, y in out.items() if y}

    def tensor(self, vec: dict) -> la.TensorElement:
        keys = la._tensor_keys(self.labels, self.order, self.flavor)
        return la.TensorElement.from_dict(
            {keys[j]: c for j, c in self.image(vec).items()}, self.labels, self.order, self.flavor
        )

    def column(self, gen) -> la.TensorElement:
        return self.tensor({self.source.index(gen): 1})

    def lattice_rows(self) -> list[list[int]]:
        """Images of the generators in the coordinates of the kernel lattice."""
        k = len(self.kernel.lattice)
        out = []
        for row in self.rows:
            rem, c = exactalg.reduce_by_basis(row, list(self.kernel.lattice))
            if rem:
                raise EtaConsistencyError("eta image left the bracket kernel")
            out.append(c + [0] * (k - len(c)))
        return out

    def relator_failures(self) -> list[tuple[str, dict]]:
        """Relators whose image is nonzero in the tensor group (should be empty)."""
        tgt = la._tensor_group(self.labels, self.order, self.flavor)
        bad = []
        for kind, rows in self.source.relator_families:
            for r in rows:
                if not tgt.is_zero(self.image(r)):
                    bad.append((kind, r))
        return bad

    def outside_kernel(self) -> list:
        return [g for g in self.source.generators if not la.in_bracket_kernel(self.column(g))]


def eta(n: int, m: int, flavor: str = tg.TWISTED, limit_rows: int | None = None) -> EtaMatrix:
    """eta_n on T^oo_n (or ~T_n) into D_n, or eta'_n on T_n into D'_n."""
    src = tg.tower_group(n, m, flavor, limit_rows)
    lf = _flavor_for(flavor)
    idx = la._tensor_index(m, n, lf)
    rows = []
    for g in src.generators:
        rows.append({idx[k]: c for k, c in eta_tree(g, m, lf).items()})
    return EtaMatrix(src, lf, tuple(rows), la.bracket_kernel(n, m, lf))


def eta_report(e: EtaMatrix) -> HomReport:
    return exactalg.hom_analysis(e.source.presentation, e.kernel.group, e.lattice_rows())


def verify_levine(n: int, m: int, limit_rows: int | None = None) -> HomReport:
    """Check that eta'_n : T_n -> D'_n is an isomorphism."""
    return eta_report(eta(n, m, tg.PLAIN, limit_rows))


# --------------------------------------------------------------------------
# Ker eta_{4k-2}


@dataclass(frozen=True)
class TwistedKernelReport:
    k: int
    m: int
    report: HomReport
    expected: GroupStructure
    symmetric_generators: tuple
    generated_by_symmetric: bool
    symmetric_subgroup: GroupStructure

    @property
    def match(self) -> bool:
        return (
            self.report.well_defined
            and self.report.kernel == self.expected
            and self.generated_by_symmetric
            and self.symmetric_subgroup == self.expected
        )

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "labels": self.m,
            "order": 4 * self.k - 2,
            "kernel": self.report.kernel.to_dict() if self.report.kernel else None,
            "expected": self.expected.to_dict(),
            "symmetric_generators": [str(t) for t in self.symmetric_generators],
            "generated_by_symmetric": self.generated_by_symmetric,
            "match": self.match,
        }


def z2_tensor(s: GroupStructure) -> GroupStructure:
    """Z_2 (x) A for a finitely generated abelian group A."""
    return GroupStructure.from_elementary(0, [2] * (s.rank + sum(1 for d in s.torsion if d % 2 == 0)))


def lie_structure(m: int, d: int, flavor: str = la.LIE) -> GroupStructure:
    return la.target_group(m, d, flavor).structure


def kernel_eta_twisted(k: int, m: int, limit_rows: int | None = None) -> TwistedKernelReport:
    """Ker(eta_{4k-2}) against Z_2 (x) L_k, generated by ((h,h))^oo for Hall h."""
    if k < 1:
        raise ValueError("need k >= 1")
    n = 4 * k - 2
    e = eta(n, m, tg.TWISTED, limit_rows)
    rep = eta_report(e)
    src = e.source
    sym = tuple(Twisted(tr.canon_rooted((h, h))[0]) for h in la.hall_trees(m, k))
    sym_rows = [{src.index(t): 1} for t in sym]
    kbasis = [dict((j, x) for j, x in enumerate(v) if x) for v in rep.kernel_generators]
    pres = src.presentation
    # symmetric classes lie in the kernel and, with the relators, span it
    in_ker = all(exactalg.in_row_lattice(r, kbasis) for r in sym_rows)
    span, _ = exactalg.echelon(sym_rows + list(pres.basis), pres.ngens)
    spans = all(exactalg.in_row_lattice(v, span) for v in kbasis)
    sub, _ = exactalg.subgroup_presentation(pres, sym_rows)
    return TwistedKernelReport(
        k, m, rep, z2_tensor(lie_structure(m, k)), sym, in_ker and spans, sub.structure
    )


# --------------------------------------------------------------------------
# framed versus twisted


@dataclass(frozen=True)
class FramedTwistedReport:
    order: int
    m: int
    cok: GroupStructure
    ker: GroupStructure | None
    expected: GroupStructure

    @property
    def match(self) -> bool:
        return self.cok == self.expected and (self.ker is None or self.ker == self.expected)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "labels": self.m,
            "cok": self.cok.to_dict(),
            "ker": self.ker.to_dict() if self.ker is not None else None,
            "expected": self.expected.to_dict(),
            "match": self.match,
        }


def inclusion_report(src: tg.TreeGroup, dst: tg.TreeGroup) -> HomReport:
    """The map on tree groups induced by sending each tree generator to itself."""
    rows = []
    for g in src.generators:
        row = [0] * dst.presentation.ngens
        row[dst.index(g)] = 1
        rows.append(row)
    return exactalg.hom_analysis(src.presentation, dst.presentation, exactalg.IntMatrix.from_rows(rows, dst.presentation.ngens))


def framed_vs_twisted(order: int, m: int, limit_rows: int | None = None) -> FramedTwistedReport:
    """Cok(T_{2n} -> T^oo_{2n}) and Ker(~T_{2n-1} -> T^oo_{2n-1}) against Z_2 (x) L'_{n+1}."""
    if order < 0 or order % 2:
        raise ValueError("order must be even and nonnegative")
    n = order // 2
    expected = z2_tensor(lie_structure(m, n + 1, la.QUASI))
    cok = inclusion_report(
        tg.tower_group(order, m, tg.PLAIN, limit_rows), tg.tower_group(order, m, tg.TWISTED, limit_rows)
    ).cokernel
    ker = None
    if order >= 2:
        ker = inclusion_report(
            tg.tower_group(order - 1, m, tg.REDUCED, limit_rows),
            tg.tower_group(order - 1, m, tg.TWISTED, limit_rows),
        ).kernel
    return FramedTwistedReport(order, m, cok, ker, expected)


# --------------------------------------------------------------------------
# classification rows


PROVED = "proved"
CONJECTURAL = "conjectural"


@dataclass(frozen=True)
class Classification:
    order: int
    labels: int
    groups: dict
    eta: HomReport
    predicted_w: GroupStructure
    predicted_w_inf: GroupStructure
    status_w: str
    status_w_inf: str
    components: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "labels": self.labels,
            "groups": {k: v.to_dict() for k, v in self.groups.items()},
            "eta": {
                "kernel": self.eta.kernel.to_dict(),
                "cokernel": self.eta.cokernel.to_dict(),
                "iso": self.eta.is_isomorphism,
            },
            "predicted": {
                "W": self.predicted_w.to_dict(),
                "W_inf": self.predicted_w_inf.to_dict(),
                "status": {"W": self.status_w, "W_inf": self.status_w_inf},
                "components": self.components,
            },
        }


def classify(n: int, m: int, limit_rows: int | None = None) -> Classification:
    """Computed groups for one (order, labels) cell and the predicted W_n, W^oo_n.

    Framed: W_n is D'_n for even n; for odd n = 2j-1 it is D_n plus the
    Sato-Levine part Z_2 (x) L_{j+1}, plus Arf_k in Z_2 (x) L_k when n = 4k-3.
    Twisted: W^oo_n is D_n, plus Arf_k in Z_2 (x) L_k when n = 4k-2.  The Arf
    parts are flagged conjectural.
    """
    t = tg.tower_group(n, m, tg.PLAIN, limit_rows).structure
    tt = tg.tower_group(n, m, tg.REDUCED, limit_rows).structure
    ti = tg.tower_group(n, m, tg.TWISTED, limit_rows).structure
    d = la.bracket_kernel(n, m, la.LIE).structure
    dp = la.bracket_kernel(n, m, la.QUASI).structure
    rep = eta_report(eta(n, m, tg.TWISTED, limit_rows))
    comps: dict = {"mu": d.to_dict()}

    if n % 2 == 0:
        w, status_w = dp, PROVED
        comps = {"mu": dp.to_dict()}
    else:
        j = (n + 1) // 2
        sl = z2_tensor(lie_structure(m, j + 1))
        w, status_w = d + sl, PROVED
        comps["SL"] = sl.to_dict()
        if n % 4 == 1:
            arf = z2_tensor(lie_structure(m, (n + 3) // 4))
            w, status_w = w + arf, CONJECTURAL
            comps["Arf"] = arf.to_dict()

    if n % 4 == 2:
        arf_inf = z2_tensor(lie_structure(m, (n + 2) // 4))
        w_inf, status_inf = d + arf_inf, CONJECTURAL
        comps["Arf_inf"] = arf_inf.to_dict()
    else:
        w_inf, status_inf = d, PROVED

    groups = {"T": t, "T_tilde": tt, "T_inf": ti, "D": d, "D_prime": dp}
    return Classification(n, m, groups, rep, w, w_inf, status_w, status_inf, comps)
