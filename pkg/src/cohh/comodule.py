"""Comodules over a graded coalgebra, cotensor products, the reduced
cobar complex computing Cotor, and structures living on cotensor
products (box-coalgebras, box-bialgebras).

A Comodule stores left and right coactions as tables on a labelled
basis.  The cotensor M box_D N is the degreewise kernel of

    rho_r (x) id - id (x) rho_l : M (x) N -> M (x) D (x) N,

computed by exact elimination.  Cotor is the homology of the reduced
cobar complex M (x) Dbar^s (x) N.
"""

import math
from dataclasses import dataclass, field as dc_field

from . import linalg
from .coalgebra import (
    AxiomCheck,
    CoalgebraMap,
    GradedCoalgebra,
    ValidationReport,
)
from .fields import FieldSpec
from .graded import GradedMap, GradedSpace, add_term, scale_sum, sub_sums
from .linalg import Matrix


class Comodule:
    """A (bi)comodule over a graded coalgebra, given by coaction tables.

    left[m] = {(d, m'): coeff} and right[m] = {(m', d): coeff}.  Either
    side may be omitted when only one coaction is needed.
    """

    def __init__(self, base: GradedCoalgebra, basis, left=None, right=None,
                 truncation=None, name=""):
        self.base = base
        self.space = GradedSpace(basis)
        self.left = left
        self.right = right
        self.truncation = truncation
        self.name = name

    @property
    def field(self) -> FieldSpec:
        return self.base.field

    def degree(self, label) -> int:
        return self.space.degree_of[label]

    def complete_through(self):
        own = math.inf if self.truncation is None else self.truncation
        return min(own, self.base.complete_through())

    def left_of(self, label) -> dict:
        return self.left.get(label, {}) if self.left else {}

    def right_of(self, label) -> dict:
        return self.right.get(label, {}) if self.right else {}

    def validate(self, max_degree=None) -> ValidationReport:
        f = self.field
        D = self.base
        report = ValidationReport()
        bound = self.complete_through() if max_degree is None else max_degree

        def within(label):
            return self.degree(label) <= bound

        for side, table in (("left", self.left), ("right", self.right)):
            if table is None:
                continue
            bad = []
            for m in self.space.degree_of:
                if not within(m):
                    continue
                out: dict = {}
                for key, v in table.get(m, {}).items():
                    d, mm = key if side == "left" else (key[1], key[0])
                    add_term(out, mm, f.mul(D.counit_of(d), v), f)
                if out != {m: f.one}:
                    bad.append(m)
            report.checks.append(AxiomCheck(
                f"{side} coaction counit law", not bad,
                f"fails at {bad[:3]}" if bad else ""))

            bad = []
            for m in self.space.degree_of:
                if not within(m):
                    continue
                lhs: dict = {}
                rhs: dict = {}
                for key, v in table.get(m, {}).items():
                    if side == "left":
                        d, mm = key
                        for (d1, d2), w in D.comult_of(d).items():
                            add_term(lhs, (d1, d2, mm), f.mul(v, w), f)
                        for (d2, mmm), w in table.get(mm, {}).items():
                            add_term(rhs, (d, d2, mmm), f.mul(v, w), f)
                    else:
                        mm, d = key
                        for (d1, d2), w in D.comult_of(d).items():
                            add_term(lhs, (mm, d1, d2), f.mul(v, w), f)
                        for (mmm, d1), w in table.get(mm, {}).items():
                            add_term(rhs, (mmm, d1, d), f.mul(v, w), f)
                if sub_sums(lhs, rhs, f):
                    bad.append(m)
            report.checks.append(AxiomCheck(
                f"{side} coaction coassociativity", not bad,
                f"fails at {bad[:3]}" if bad else ""))

        if self.left is not None and self.right is not None:
            bad = []
            for m in self.space.degree_of:
                if not within(m):
                    continue
                lhs: dict = {}
                rhs: dict = {}
                for (d, mm), v in self.left_of(m).items():
                    for (mmm, d2), w in self.right_of(mm).items():
                        add_term(lhs, (d, mmm, d2), f.mul(v, w), f)
                for (mm, d2), v in self.right_of(m).items():
                    for (d, mmm), w in self.left_of(mm).items():
                        add_term(rhs, (d, mmm, d2), f.mul(v, w), f)
                if sub_sums(lhs, rhs, f):
                    bad.append(m)
            report.checks.append(AxiomCheck(
                "bicomodule compatibility", not bad,
                f"fails at {bad[:3]}" if bad else ""))
        return report

    def __repr__(self):
        return f"Comodule({self.name or 'anon'} over {self.base.name})"


def comodule_from_map(f: CoalgebraMap, name="") -> Comodule:
    """A coalgebra map E -> D makes E a D-bicomodule via (id (x) f) Delta
    and (f (x) id) Delta."""
    E, fld = f.source, f.source.field
    left = {}
    right = {}
    for m in E.space.degree_of:
        l: dict = {}
        r: dict = {}
        for (a, b), v in E.comult_of(m).items():
            for t, w in f.apply(a).items():
                add_term(l, (t, b), fld.mul(v, w), fld)
            for t, w in f.apply(b).items():
                add_term(r, (a, t), fld.mul(v, w), fld)
        left[m] = l
        right[m] = r
    return Comodule(f.target, list(E.space.degree_of.items()), left, right,
                    truncation=E.truncation, name=name or E.name)


def regular_comodule(D: GradedCoalgebra) -> Comodule:
    ident = CoalgebraMap(D, D, {m: {m: D.field.one}
                                for m in D.space.degree_of}, name="id")
    return comodule_from_map(ident, name=D.name)


def trivial_comodule(D: GradedCoalgebra) -> Comodule:
    f = D.field
    g = D.coaug
    return Comodule(D, [("1", 0)],
                    left={"1": {(g, "1"): f.one}},
                    right={"1": {("1", g): f.one}},
                    truncation=None, name="k")


def equalizer_matrix(M: Comodule, N: Comodule, degree: int):
    """Pairs basis of (M (x) N)_degree and the matrix of
    rho_r (x) id - id (x) rho_l into M (x) D (x) N."""
    f = M.field
    pairs = []
    for m, dm in M.space.degree_of.items():
        for n, dn in N.space.degree_of.items():
            if dm + dn == degree:
                pairs.append((m, n))
    pairs.sort(key=repr)
    triple_index: dict = {}
    cols = []
    for (m, n) in pairs:
        col: dict = {}
        for (mm, d), v in M.right_of(m).items():
            idx = triple_index.setdefault((mm, d, n), len(triple_index))
            col[idx] = f.add(col.get(idx, f.zero), v)
        for (d, nn), v in N.left_of(n).items():
            idx = triple_index.setdefault((m, d, nn), len(triple_index))
            col[idx] = f.sub(col.get(idx, f.zero), v)
        cols.append({k: v for k, v in col.items() if v})
    return pairs, Matrix.from_columns(cols, len(triple_index))


@dataclass
class CotensorSpace:
    """Degreewise basis of M box_D N, as formal sums over pair labels."""

    left: Comodule
    right: Comodule
    bound: int
    basis: dict = dc_field(default_factory=dict)  # degree -> [formal sums]

    def dim(self, degree: int) -> int:
        return len(self.basis.get(degree, []))

    def dims(self) -> dict:
        return {d: len(b) for d, b in sorted(self.basis.items()) if b}

    def coords(self, vec: dict, degree: int):
        """Coordinates of a pair-label formal sum in the cotensor basis.

        Raises linalg.NoSolution if the vector is not equalized."""
        f = self.left.field
        index: dict = {}
        cols = []
        for b in self.basis.get(degree, []):
            col = {}
            for pair, v in b.items():
                col[index.setdefault(pair, len(index))] = v
            cols.append(col)
        tgt = {}
        for pair, v in vec.items():
            if pair not in index:
                if v:
                    raise linalg.NoSolution(f"pair {pair} outside cotensor span")
                continue
            tgt[index[pair]] = v
        m = Matrix.from_columns(cols, len(index))
        (sol,) = linalg.solve(m, [tgt], f)
        return sol


def cotensor(M: Comodule, N: Comodule, max_degree=None) -> CotensorSpace:
    f = M.field
    ambient = (max(M.space.degree_of.values(), default=0)
               + max(N.space.degree_of.values(), default=0))
    bound = min(M.complete_through(), N.complete_through(), ambient)
    if max_degree is not None:
        bound = min(bound, max_degree)
    bound = int(bound)
    out = CotensorSpace(M, N, bound)
    for t in range(0, bound + 1):
        pairs, m = equalizer_matrix(M, N, t)
        if not pairs:
            continue
        kernel = linalg.kernel_basis(m, f)
        out.basis[t] = [
            {pairs[j]: v for j, v in vec.items()} for vec in kernel
        ]
    return out


# ---------------------------------------------------------------------------
# reduced cobar complex and Cotor


def _reduced_right(M: Comodule, m):
    """rho_r minus the unit term m (x) 1; valid for connected base."""
    g = M.base.coaug
    return {k: v for k, v in M.right_of(m).items() if k[1] != g}


def _reduced_left(N: Comodule, n):
    g = N.base.coaug
    return {k: v for k, v in N.left_of(n).items() if k[0] != g}


def _reduced_comult(D: GradedCoalgebra, d):
    g = D.coaug
    return {k: v for k, v in D.comult_of(d).items()
            if k[0] != g and k[1] != g}


def cobar_level_space(M: Comodule, N: Comodule, s: int, t_max: int):
    """Basis labels of M (x) Dbar^s (x) N up to internal degree t_max."""
    D = M.base
    dbar = [(lbl, dg) for lbl, dg in D.space.degree_of.items() if dg > 0]
    labels = []

    def combos(budget, k):
        if k == 0:
            yield (), 0
            return
        for lbl, dg in dbar:
            if dg <= budget:
                for rest, rdg in combos(budget - dg, k - 1):
                    yield (lbl,) + rest, dg + rdg

    for m, dm in M.space.degree_of.items():
        if dm > t_max:
            continue
        for mids, mid in combos(t_max - dm, s):
            for n, dn in N.space.degree_of.items():
                if dm + mid + dn <= t_max:
                    labels.append(((m,) + mids + (n,), dm + mid + dn))
    return labels


def cobar_differential(M: Comodule, N: Comodule, s: int,
                       source: GradedSpace, target: GradedSpace) -> GradedMap:
    """d: M (x) Dbar^s (x) N -> M (x) Dbar^(s+1) (x) N, alternating sum of
    the reduced coaction/comultiplication insertions."""
    f = M.field
    D = M.base
    out = GradedMap(source, target)
    for label in source.degree_of:
        m, mids, n = label[0], label[1:-1], label[-1]
        col: dict = {}
        for (mm, d), v in _reduced_right(M, m).items():
            key = (mm, d) + mids + (n,)
            if key in target:
                add_term(col, key, v, f)
        for i, a in enumerate(mids):
            sgn = f.coerce((-1) ** (i + 1))
            for (a1, a2), v in _reduced_comult(D, a).items():
                key = (m,) + mids[:i] + (a1, a2) + mids[i + 1:] + (n,)
                if key in target:
                    add_term(col, key, f.mul(sgn, v), f)
        sgn = f.coerce((-1) ** (s + 1))
        for (d, nn), v in _reduced_left(N, n).items():
            key = (m,) + mids + (d, nn)
            if key in target:
                add_term(col, key, f.mul(sgn, v), f)
        out.set_column(label, col)
    return out


@dataclass
class CotorTable:
    """Bigraded dimensions (s = cobar filtration, t = internal degree)."""

    dims: dict  # (s, t) -> int
    s_max: int
    t_max: int
    bound: int  # internal degree through which values are trustworthy

    def dim(self, s: int, t: int) -> int:
        return self.dims.get((s, t), 0)


def cobar_cotor(M: Comodule, N: Comodule, s_max: int, t_max: int) -> CotorTable:
    """Cotor_D^{s,t}(M, N) for 0 <= s <= s_max, t <= t_max, by the
    reduced cobar complex."""
    f = M.field
    bound = min(M.complete_through(), N.complete_through(), t_max)
    spaces = []
    for s in range(s_max + 2):
        spaces.append(GradedSpace(cobar_level_space(M, N, s, bound)))
    diffs = [cobar_differential(M, N, s, spaces[s], spaces[s + 1])
             for s in range(s_max + 1)]
    dims = {}
    for s in range(s_max + 1):
        for t in range(bound + 1):
            d_out = diffs[s].matrix(t)
            if s == 0:
                d_in = Matrix(spaces[0].dim(t), 0)
            else:
                d_in = diffs[s - 1].matrix(t)
            dim, _ = linalg.homology_reps(d_out, d_in, f)
            if dim:
                dims[(s, t)] = dim
    return CotorTable(dims, s_max, bound, bound)


# ---------------------------------------------------------------------------
# structures on cotensor products


@dataclass
class BoxStructure:
    """A (co/bi)algebra structure on a bicomodule E over its base D.

    comult: E -> E (x) E (landing in the cotensor; pair labels),
    counit: E -> D, unit: D -> E, mult: a linear extension to E (x) E of
    the multiplication defined on E box_D E (checks only ever evaluate
    extensions on equalized vectors, where all extensions agree).
    """

    base: GradedCoalgebra
    carrier: Comodule
    comult: GradedMap = None
    counit: GradedMap = None
    unit: GradedMap = None
    mult: GradedMap = None
    antipode: GradedMap = None
    name: str = ""

    @property
    def field(self) -> FieldSpec:
        return self.base.field


def tensor_box_structure(C: GradedCoalgebra, D2: GradedCoalgebra,
                         mult2=None) -> BoxStructure:
    """The box-bialgebra C (x) D2 over C.

    Coactions come from the projection C (x) D2 -> C; the box
    comultiplication and counit come from the tensor coalgebra; for the
    multiplication (when D2 carries one, e.g. exponent addition for a
    polynomial factor) mult2 maps a pair of D2 labels to a formal sum.
    """
    from .coalgebra import tensor_coalgebra, tensor_projection
    from .graded import tensor_space

    f = C.field
    E = tensor_coalgebra(C, D2)
    carrier = comodule_from_map(tensor_projection(E, 0), name=E.name)
    space = carrier.space
    bound = E.complete_through()
    pair_space = tensor_space(space, space, bound)

    comult = GradedMap(space, pair_space)
    for label in space.degree_of:
        comult.set_column(label, {p: v for p, v in E.comult_of(label).items()
                                  if p in pair_space})
    counit = GradedMap(space, C.space)
    proj = tensor_projection(E, 0)
    for label in space.degree_of:
        counit.set_column(label, proj.apply(label))

    unit = GradedMap(C.space, space)
    for c in C.space.degree_of:
        unit.set_column(c, {f"{c}*1": f.one})

    mult = None
    if mult2 is not None:
        mult = GradedMap(pair_space, space)
        factors = E.metadata["factors"]
        for (la, lb) in pair_space.degree_of:
            a1, d1 = factors[la]
            a2, d2 = factors[lb]
            col: dict = {}
            e = C.counit_of(a2)
            if e:
                for dd, v in mult2(d1, d2).items():
                    tgt = f"{a1}*{dd}"
                    if tgt in space.degree_of:
                        add_term(col, tgt, f.mul(e, v), f)
            mult.set_column((la, lb), col)
    return BoxStructure(C, carrier, comult=comult, counit=counit, unit=unit,
                        mult=mult, name=E.name)


def polynomial_multiplication(D2: GradedCoalgebra):
    """Exponent-addition product on a polynomial coalgebra's basis."""
    if D2.metadata.get("kind") != "polynomial":
        raise ValueError("needs a polynomial coalgebra")
    gens = D2.metadata["generators"]
    degrees = D2.metadata["degrees"]
    trunc = D2.metadata["truncation"]
    exps = {}
    for label in D2.space.degree_of:
        exps[label] = _parse_exponents(label, gens)
    ids = {v: k for k, v in exps.items()}
    f = D2.field

    def mult(a, b):
        total = tuple(x + y for x, y in zip(exps[a], exps[b]))
        if sum(e * d for e, d in zip(total, degrees)) > trunc:
            return {}
        return {ids[total]: f.one}

    return mult


def _parse_exponents(label: str, gens):
    if label == "1":
        return (0,) * len(gens)
    out = []
    rest = label
    for g in gens:
        e = 0
        if rest.startswith(g):
            rest = rest[len(g):]
            if rest.startswith("^"):
                num = ""
                rest = rest[1:]
                while rest and rest[0].isdigit():
                    num += rest[0]
                    rest = rest[1:]
                e = int(num)
            else:
                e = 1
        out.append(e)
    if rest:
        raise ValueError(f"cannot parse monomial {label!r}")
    return tuple(out)


def box_primitives(box: BoxStructure, max_degree: int) -> dict:
    """Primitives of a coaugmented box-coalgebra, per internal degree.

    P = ker((q (x) q) Delta) on IE, with IE = ker(counit: E -> D) and
    q: E -> E / im(unit).  Returns {degree: [formal sums on E labels]}.
    """
    f = box.field
    E = box.carrier.space
    out = {}
    unit_images: dict = {}

    def unit_image_at(deg):
        if deg not in unit_images:
            unit_images[deg] = _unit_image_rows(box, deg)
        return unit_images[deg]

    for t in range(1, max_degree + 1):
        labels = E.labels(t)
        if not labels:
            continue
        ie = _counit_kernel(box, t)
        if not ie:
            continue
        # columns: (q (x) q) Delta on each IE basis vector
        pair_index: dict = {}
        cols = []
        for vec in ie:
            col: dict = {}
            for lbl, c in vec.items():
                for (a, b), v in box.comult.column(lbl).items():
                    qa = _q_reduce(a, unit_image_at(E.degree_of[a]), box, f)
                    qb = _q_reduce(b, unit_image_at(E.degree_of[b]), box, f)
                    for la, va in qa.items():
                        for lb, vb in qb.items():
                            idx = pair_index.setdefault((la, lb), len(pair_index))
                            col[idx] = f.add(col.get(idx, f.zero),
                                             f.mul(c, f.mul(v, f.mul(va, vb))))
            cols.append({k: v for k, v in col.items() if v})
        m = Matrix.from_columns(cols, len(pair_index))
        kernel = linalg.kernel_basis(m, f)
        prims = []
        for k in kernel:
            vec: dict = {}
            for j, c in k.items():
                for lbl, v in ie[j].items():
                    add_term(vec, lbl, f.mul(c, v), f)
            prims.append(vec)
        if prims:
            out[t] = prims
    return out


def _counit_kernel(box: BoxStructure, t: int):
    f = box.field
    E = box.carrier.space
    labels = E.labels(t)
    cols = []
    for lbl in labels:
        col = {}
        for d_lbl, v in box.counit.column(lbl).items():
            col[box.base.space.index(d_lbl)] = v
        cols.append(col)
    m = Matrix.from_columns(cols, box.base.space.dim(t))
    kernel = linalg.kernel_basis(m, f)
    return [{labels[j]: v for j, v in k.items()} for k in kernel]


def _unit_image_rows(box: BoxStructure, t: int):
    """Echelonized rows spanning im(unit) in degree t, as index vectors."""
    f = box.field
    E = box.carrier.space
    rows = []
    for c in box.base.space.labels(t):
        col = box.unit.column(c)
        if col:
            rows.append({E.index(lbl): v for lbl, v in col.items()})
    return linalg._rref_sparse(rows, E.dim(t), f)


def _q_reduce(label, unit_image, box: BoxStructure, f):
    """Image of a basis element in E / im(unit), as a reduced formal sum."""
    E = box.carrier.space
    t = E.degree_of[label]
    rows, pivots = unit_image
    vec = {E.index(label): f.one}
    red = linalg.reduce_mod_span(vec, rows, pivots, f)
    labels = E.labels(t)
    return {labels[i]: v for i, v in red.items()}


def box_indecomposables(box: BoxStructure, max_degree: int):
    """Indecomposables coker(mult: IE box IE -> IE), per internal degree.

    Returns {degree: (dim, [representative formal sums on E labels])}.
    """
    f = box.field
    E = box.carrier.space
    if box.mult is None:
        raise ValueError("box structure has no multiplication")
    out = {}
    for t in range(1, max_degree + 1):
        ie = _counit_kernel(box, t)
        if not ie:
            continue
        ie_rows = linalg._rref_sparse(
            [{E.index(l): v for l, v in vec.items()} for vec in ie],
            E.dim(t), f)
        # (IE (x) IE) cap (E box E): stack the equalizer with both counits
        pairs, eq = equalizer_matrix(box.carrier, box.carrier, t)
        extra = []
        for (a, b) in pairs:
            row_a = {}
            row_b = {}
            for d, v in box.counit.column(a).items():
                row_a[("l", d, b)] = v
            for d, v in box.counit.column(b).items():
                row_b[("r", a, d)] = v
            extra.append((row_a, row_b))
        key_index: dict = {}
        cols = []
        for j, (a, b) in enumerate(pairs):
            col = dict(eq.column(j))
            off = eq.nrows
            for key, v in extra[j][0].items():
                idx = key_index.setdefault(key, len(key_index))
                col[off + idx] = v
            for key, v in extra[j][1].items():
                idx = key_index.setdefault(key, len(key_index))
                col[off + idx] = v
            cols.append(col)
        m = Matrix.from_columns(cols, eq.nrows + len(key_index))
        kernel = linalg.kernel_basis(m, f)
        image_rows = []
        for k in kernel:
            pair_sum = {pairs[j]: v for j, v in k.items()}
            img = box.mult.apply(pair_sum, f)
            if img:
                image_rows.append({E.index(l): v for l, v in img.items()})
        img_ech = linalg._rref_sparse(image_rows, E.dim(t), f)
        labels = E.labels(t)
        reps = []
        for vec in ie:
            red = linalg.reduce_mod_span(
                {E.index(l): v for l, v in vec.items()}, *img_ech, f)
            if red:
                reps.append(red)
        reps_ech, _ = linalg._rref_sparse(reps, E.dim(t), f)
        if reps_ech:
            out[t] = (len(reps_ech),
                      [{labels[i]: v for i, v in r.items()} for r in reps_ech])
    return out


@dataclass
class CoflatnessReport:
    vanishing_ok: bool
    nonzero_at: list
    cofree_dims_ok: bool
    cogenerator_dims: dict
    s_max: int
    t_max: int

    @property
    def coflat_up_to_bounds(self) -> bool:
        return self.vanishing_ok


def coflatness_report(M: Comodule, s_max: int, t_max: int) -> CoflatnessReport:
    """Evidence for coflatness within bounds: Cotor^s(M, k) = 0 for
    1 <= s <= s_max and t <= t_max, plus a dimension-series check that
    dim M_t matches a cofree D (x) V."""
    table = cobar_cotor(M, trivial_comodule(M.base), s_max, t_max)
    nonzero = sorted((s, t) for (s, t) in table.dims if s >= 1)
    D = M.base
    bound = min(t_max, M.complete_through())
    v: dict = {}
    ok = True
    for t in range(bound + 1):
        have = M.space.dim(t)
        acc = sum(D.space.dim(j) * v.get(t - j, 0) for j in range(1, t + 1))
        rem = have - acc
        if rem < 0 or D.space.dim(0) == 0:
            ok = False
            break
        v[t] = rem // D.space.dim(0)
        if rem % D.space.dim(0):
            ok = False
            break
    return CoflatnessReport(not nonzero, nonzero, ok,
                            {t: d for t, d in v.items() if d}, s_max, bound)
