"""Diagram checkers for box-(co)algebra structures on a bicomodule.

Every check evaluates both sides of a structure diagram on explicit
basis elements (or on a basis of the relevant cotensor subspace, where
a multiplication is only well defined on equalized vectors) and
reports the first discrepancy found.  Twists between bigraded factors
use the sign (-1)^{ss' + tt'}: a separate Koszul sign for the
filtration grading and for the internal grading.
"""

from dataclasses import dataclass, field as dc_field

from . import linalg
from .coalgebra import AxiomCheck
from .comodule import BoxStructure
from .graded import add_term, scale_sum, sub_sums
from .linalg import Matrix


@dataclass
class StructureReport:
    name: str
    checks: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __str__(self):
        lines = [f"{self.name}: {'ok' if self.ok else 'FAILED'}"]
        for c in self.checks:
            mark = "ok" if c.passed else "XX"
            lines.append(f"  {mark} {c.name}"
                         + (f": {c.witness}" if c.witness else ""))
        return "\n".join(lines)


def _default_s_of(label):
    """Homological filtration of a carrier label; circle homology
    classes are tagged ("h", s, t, k)."""
    if isinstance(label, tuple) and len(label) == 4 and label[0] == "h":
        return label[1]
    return 0


def _bound(box: BoxStructure, max_degree):
    own = box.carrier.complete_through()
    ambient = max(box.carrier.space.degree_of.values(), default=0)
    bound = min(own, ambient)
    if max_degree is not None:
        bound = min(bound, max_degree)
    return int(bound)


def _labels_within(box: BoxStructure, bound):
    return [l for l, t in box.carrier.space.degree_of.items() if t <= bound]


def _pair_defect(box: BoxStructure, terms: dict) -> dict:
    """rho_r (x) id - id (x) rho_l on a formal sum of carrier pairs."""
    f = box.field
    E = box.carrier
    out: dict = {}
    for (a, b), c in terms.items():
        for (a2, d), v in E.right_of(a).items():
            add_term(out, (a2, d, b), f.mul(c, v), f)
        for (d, b2), v in E.left_of(b).items():
            add_term(out, (a, d, b2), f.mul(f.neg(c), v), f)
    return out


def _pair_cotensor_basis(box: BoxStructure, degree: int, s_max=None,
                         s_of=_default_s_of):
    """Basis of (E box E) in one internal degree, optionally restricted
    to total filtration <= s_max (where the multiplication is known)."""
    f = box.field
    E = box.carrier
    pairs = []
    for a, da in E.space.degree_of.items():
        for b, db in E.space.degree_of.items():
            if da + db != degree:
                continue
            if s_max is not None and s_of(a) + s_of(b) > s_max:
                continue
            pairs.append((a, b))
    pairs.sort(key=repr)
    idx: dict = {}
    cols = []
    for p in pairs:
        defect = _pair_defect(box, {p: f.one})
        cols.append({idx.setdefault(k, len(idx)): v
                     for k, v in defect.items()})
    kernel = linalg.kernel_basis(Matrix.from_columns(cols, len(idx)), f)
    return [{pairs[j]: v for j, v in vec.items()} for vec in kernel]


def _triple_cotensor_basis(box: BoxStructure, degree: int, s_max=None,
                           s_of=_default_s_of):
    f = box.field
    E = box.carrier
    triples = []
    for a, da in E.space.degree_of.items():
        for b, db in E.space.degree_of.items():
            if da + db > degree:
                continue
            for c, dcg in E.space.degree_of.items():
                if da + db + dcg != degree:
                    continue
                if s_max is not None and s_of(a) + s_of(b) + s_of(c) > s_max:
                    continue
                triples.append((a, b, c))
    triples.sort(key=repr)
    idx: dict = {}
    cols = []
    for (a, b, c) in triples:
        defect: dict = {}
        for (a2, d), v in E.right_of(a).items():
            add_term(defect, ("m", a2, d, b, c), v, f)
        for (d, b2), v in E.left_of(b).items():
            add_term(defect, ("m", a, d, b2, c), f.neg(v), f)
        for (b2, d), v in E.right_of(b).items():
            add_term(defect, ("r", a, b2, d, c), v, f)
        for (d, c2), v in E.left_of(c).items():
            add_term(defect, ("r", a, b, d, c2), f.neg(v), f)
        cols.append({idx.setdefault(k, len(idx)): v
                     for k, v in defect.items()})
    kernel = linalg.kernel_basis(Matrix.from_columns(cols, len(idx)), f)
    return [{triples[j]: v for j, v in vec.items()} for vec in kernel]


def _apply_mult(box: BoxStructure, terms: dict) -> dict:
    f = box.field
    out: dict = {}
    for pr, c in terms.items():
        for h, v in box.mult.column(pr).items():
            add_term(out, h, f.mul(c, v), f)
    return out


def _apply_comult(box: BoxStructure, terms: dict) -> dict:
    f = box.field
    out: dict = {}
    for h, c in terms.items():
        for pr, v in box.comult.column(h).items():
            add_term(out, pr, f.mul(c, v), f)
    return out


def check_box_coalgebra(box: BoxStructure, max_degree=None,
                        s_of=_default_s_of) -> StructureReport:
    """Coassociativity, counit laws against the coactions, and the
    cotensor condition on the comultiplication."""
    f = box.field
    E = box.carrier
    bound = _bound(box, max_degree)
    labels = _labels_within(box, bound)
    report = StructureReport(f"box coalgebra on {box.name or E.name}")

    bad = [l for l in labels
           if _pair_defect(box, box.comult.column(l))]
    report.checks.append(AxiomCheck(
        "comultiplication lands in the cotensor", not bad,
        f"first failure at {bad[0]!r}" if bad else ""))

    bad = []
    for l in labels:
        lhs: dict = {}
        rhs: dict = {}
        for (a, b), c in box.comult.column(l).items():
            for (a1, a2), v in box.comult.column(a).items():
                add_term(lhs, (a1, a2, b), f.mul(c, v), f)
            for (b1, b2), v in box.comult.column(b).items():
                add_term(rhs, (a, b1, b2), f.mul(c, v), f)
        if sub_sums(lhs, rhs, f):
            bad.append(l)
    report.checks.append(AxiomCheck(
        "coassociativity", not bad,
        f"first failure at {bad[0]!r}" if bad else ""))

    bad = []
    for l in labels:
        lhs: dict = {}
        for (a, b), c in box.comult.column(l).items():
            for d, v in box.counit.column(a).items():
                add_term(lhs, (d, b), f.mul(c, v), f)
        if sub_sums(lhs, E.left_of(l), f):
            bad.append(l)
    report.checks.append(AxiomCheck(
        "left counit law matches the left coaction", not bad,
        f"first failure at {bad[0]!r}" if bad else ""))

    bad = []
    for l in labels:
        lhs: dict = {}
        for (a, b), c in box.comult.column(l).items():
            for d, v in box.counit.column(b).items():
                add_term(lhs, (a, d), f.mul(c, v), f)
        if sub_sums(lhs, E.right_of(l), f):
            bad.append(l)
    report.checks.append(AxiomCheck(
        "right counit law matches the right coaction", not bad,
        f"first failure at {bad[0]!r}" if bad else ""))
    return report


def check_box_algebra(box: BoxStructure, max_degree=None, s_max=None,
                      s_of=_default_s_of) -> StructureReport:
    """Associativity on the triple cotensor and unitality through the
    coactions."""
    f = box.field
    E = box.carrier
    D = box.base
    bound = _bound(box, max_degree)
    report = StructureReport(f"box algebra on {box.name or E.name}")

    bad = []
    for t in range(bound + 1):
        for vec in _triple_cotensor_basis(box, t, s_max, s_of):
            first: dict = {}
            second: dict = {}
            for (a, b, c), v in vec.items():
                for m, w in box.mult.column((a, b)).items():
                    add_term(first, (m, c), f.mul(v, w), f)
                for m, w in box.mult.column((b, c)).items():
                    add_term(second, (a, m), f.mul(v, w), f)
            if sub_sums(_apply_mult(box, first), _apply_mult(box, second), f):
                bad.append(t)
                break
    report.checks.append(AxiomCheck(
        "associativity on the triple cotensor", not bad,
        f"first failure in degree {bad[0]}" if bad else ""))

    bad_l = []
    bad_r = []
    for l in _labels_within(box, bound):
        lhs: dict = {}
        for (d, h), v in E.left_of(l).items():
            for u, w in box.unit.column(d).items():
                for m, ww in box.mult.column((u, h)).items():
                    add_term(lhs, m, f.mul(v, f.mul(w, ww)), f)
        if sub_sums(lhs, {l: f.one}, f):
            bad_l.append(l)
        rhs: dict = {}
        for (h, d), v in E.right_of(l).items():
            for u, w in box.unit.column(d).items():
                for m, ww in box.mult.column((h, u)).items():
                    add_term(rhs, m, f.mul(v, f.mul(w, ww)), f)
        if sub_sums(rhs, {l: f.one}, f):
            bad_r.append(l)
    report.checks.append(AxiomCheck(
        "left unit law through the left coaction", not bad_l,
        f"first failure at {bad_l[0]!r}" if bad_l else ""))
    report.checks.append(AxiomCheck(
        "right unit law through the right coaction", not bad_r,
        f"first failure at {bad_r[0]!r}" if bad_r else ""))

    bad = [d for d in D.space.degree_of
           if D.degree(d) <= bound and sub_sums(
               _apply_counit(box, box.unit.column(d)), {d: f.one}, f)]
    report.checks.append(AxiomCheck(
        "counit of the unit is the identity of the base", not bad,
        f"first failure at {bad[0]!r}" if bad else ""))
    return report


def _apply_counit(box: BoxStructure, terms: dict) -> dict:
    f = box.field
    out: dict = {}
    for h, c in terms.items():
        for d, v in box.counit.column(h).items():
            add_term(out, d, f.mul(c, v), f)
    return out


def _diagonal_coords(D, vec: dict, degree: int) -> dict:
    """Express an element of D box D (inside D (x) D) as Delta of an
    element of D.  Raises linalg.NoSolution if it is not diagonal."""
    f = D.field
    idx: dict = {}
    cols = []
    labels = [d for d in D.space.labels(degree)]
    for d in labels:
        col = {}
        for pr, v in D.comult_of(d).items():
            col[idx.setdefault(pr, len(idx))] = v
        cols.append(col)
    tgt = {}
    for pr, v in vec.items():
        if pr not in idx:
            if v:
                raise linalg.NoSolution(f"pair {pr} outside the diagonal")
            continue
        tgt[idx[pr]] = v
    (sol,) = linalg.solve(Matrix.from_columns(cols, len(idx)), [tgt], f)
    return {labels[j]: v for j, v in sol.items()}


def check_box_bialgebra(box: BoxStructure, max_degree=None, s_max=None,
                        s_of=_default_s_of) -> StructureReport:
    """The four compatibility diagrams between the algebra and the
    coalgebra halves."""
    f = box.field
    D = box.base
    bound = _bound(box, max_degree)
    report = StructureReport(f"box bialgebra on {box.name or box.carrier.name}")

    # 1: comultiplication is multiplicative (with the bigraded twist)
    bad = []
    for t in range(bound + 1):
        for vec in _pair_cotensor_basis(box, t, s_max, s_of):
            lhs = _apply_comult(box, _apply_mult(box, vec))
            rhs: dict = {}
            for (a, b), c in vec.items():
                for (a1, a2), va in box.comult.column(a).items():
                    for (b1, b2), vb in box.comult.column(b).items():
                        sgn = (-1) ** (
                            s_of(a2) * s_of(b1)
                            + box.carrier.degree(a2)
                            * box.carrier.degree(b1))
                        coeff = f.mul(f.mul(c, f.coerce(sgn)),
                                      f.mul(va, vb))
                        for m1, w1 in box.mult.column((a1, b1)).items():
                            for m2, w2 in box.mult.column((a2, b2)).items():
                                add_term(rhs, (m1, m2),
                                         f.mul(coeff, f.mul(w1, w2)), f)
            if sub_sums(lhs, rhs, f):
                bad.append(t)
                break
    report.checks.append(AxiomCheck(
        "comultiplication of a product is the twisted product of "
        "comultiplications", not bad,
        f"first failure in degree {bad[0]}" if bad else ""))

    # 2: counit is multiplicative through the diagonal of the base
    bad = []
    for t in range(bound + 1):
        for vec in _pair_cotensor_basis(box, t, s_max, s_of):
            lhs = _apply_counit(box, _apply_mult(box, vec))
            dd: dict = {}
            for (a, b), c in vec.items():
                for d1, v1 in box.counit.column(a).items():
                    for d2, v2 in box.counit.column(b).items():
                        add_term(dd, (d1, d2), f.mul(c, f.mul(v1, v2)), f)
            try:
                rhs = _diagonal_coords(D, dd, t)
            except linalg.NoSolution:
                bad.append(t)
                break
            if sub_sums(lhs, rhs, f):
                bad.append(t)
                break
    report.checks.append(AxiomCheck(
        "counit of a product is diagonal in the base", not bad,
        f"first failure in degree {bad[0]}" if bad else ""))

    # 3: unit is comultiplicative
    bad = []
    for d in D.space.degree_of:
        if D.degree(d) > bound:
            continue
        lhs = _apply_comult(box, box.unit.column(d))
        rhs: dict = {}
        for (d1, d2), v in D.comult_of(d).items():
            for u1, w1 in box.unit.column(d1).items():
                for u2, w2 in box.unit.column(d2).items():
                    add_term(rhs, (u1, u2), f.mul(v, f.mul(w1, w2)), f)
        if sub_sums(lhs, rhs, f):
            bad.append(d)
    report.checks.append(AxiomCheck(
        "comultiplication of the unit is the unit of the diagonal",
        not bad, f"first failure at {bad[0]!r}" if bad else ""))

    # 4: counit splits the unit
    bad = [d for d in D.space.degree_of
           if D.degree(d) <= bound and sub_sums(
               _apply_counit(box, box.unit.column(d)), {d: f.one}, f)]
    report.checks.append(AxiomCheck(
        "counit after unit is the identity", not bad,
        f"first failure at {bad[0]!r}" if bad else ""))
    return report


def check_antipode(box: BoxStructure, max_degree=None,
                   s_of=_default_s_of) -> StructureReport:
    """mu(chi (x) id)Delta = unit . counit = mu(id (x) chi)Delta."""
    f = box.field
    bound = _bound(box, max_degree)
    report = StructureReport(f"antipode on {box.name or box.carrier.name}")
    bad_l = []
    bad_r = []
    for l in _labels_within(box, bound):
        target = _apply_unit(box, box.counit.column(l))
        lhs: dict = {}
        rhs: dict = {}
        for (a, b), c in box.comult.column(l).items():
            for a2, v in box.antipode.column(a).items():
                for m, w in box.mult.column((a2, b)).items():
                    add_term(lhs, m, f.mul(c, f.mul(v, w)), f)
            for b2, v in box.antipode.column(b).items():
                for m, w in box.mult.column((a, b2)).items():
                    add_term(rhs, m, f.mul(c, f.mul(v, w)), f)
        if sub_sums(lhs, target, f):
            bad_l.append(l)
        if sub_sums(rhs, target, f):
            bad_r.append(l)
    report.checks.append(AxiomCheck(
        "antipode on the left leg", not bad_l,
        f"first failure at {bad_l[0]!r}" if bad_l else ""))
    report.checks.append(AxiomCheck(
        "antipode on the right leg", not bad_r,
        f"first failure at {bad_r[0]!r}" if bad_r else ""))
    return report


def _apply_unit(box: BoxStructure, terms: dict) -> dict:
    f = box.field
    out: dict = {}
    for d, c in terms.items():
        for h, v in box.unit.column(d).items():
            add_term(out, h, f.mul(c, v), f)
    return out


def check_leibniz(box: BoxStructure, diff, max_degree=None, s_max=None,
                  s_of=_default_s_of) -> StructureReport:
    """diff is a map on carrier labels (label -> formal sum); checks
    d(ab) = d(a)b + (-1)^{s+t} a d(b) on the pair cotensor basis."""
    f = box.field
    bound = _bound(box, max_degree)
    report = StructureReport("Leibniz rule")
    bad = []
    for t in range(bound + 1):
        for vec in _pair_cotensor_basis(box, t, s_max, s_of):
            lhs: dict = {}
            for h, c in _apply_mult(box, vec).items():
                for h2, v in diff(h).items():
                    add_term(lhs, h2, f.mul(c, v), f)
            rhs: dict = {}
            for (a, b), c in vec.items():
                for a2, v in diff(a).items():
                    for m, w in box.mult.column((a2, b)).items():
                        add_term(rhs, m, f.mul(c, f.mul(v, w)), f)
                sgn = f.coerce((-1) ** (s_of(a) + box.carrier.degree(a)))
                for b2, v in diff(b).items():
                    for m, w in box.mult.column((a, b2)).items():
                        add_term(rhs, m, f.mul(f.mul(c, sgn),
                                               f.mul(v, w)), f)
            if sub_sums(lhs, rhs, f):
                bad.append(t)
                break
    report.checks.append(AxiomCheck(
        "Leibniz rule for the differential", not bad,
        f"first failure in degree {bad[0]}" if bad else ""))
    return report


def check_co_leibniz(box: BoxStructure, diff, max_degree=None,
                     s_of=_default_s_of) -> StructureReport:
    """Delta . d = (d (x) id + (-1)^{s+t} id (x) d) . Delta on carrier
    labels."""
    f = box.field
    bound = _bound(box, max_degree)
    report = StructureReport("coLeibniz rule")
    bad = []
    for l in _labels_within(box, bound):
        lhs: dict = {}
        for h, c in diff(l).items():
            for pr, v in box.comult.column(h).items():
                add_term(lhs, pr, f.mul(c, v), f)
        rhs: dict = {}
        for (a, b), c in box.comult.column(l).items():
            for a2, v in diff(a).items():
                add_term(rhs, (a2, b), f.mul(c, v), f)
            sgn = f.coerce((-1) ** (s_of(a) + box.carrier.degree(a)))
            for b2, v in diff(b).items():
                add_term(rhs, (a, b2), f.mul(f.mul(c, sgn), v), f)
        if sub_sums(lhs, rhs, f):
            bad.append(l)
    report.checks.append(AxiomCheck(
        "coLeibniz rule for the differential", not bad,
        f"first failure at {bad[0]!r}" if bad else ""))
    return report


def full_hopf_report(box: BoxStructure, max_degree=None, s_max=None,
                     s_of=_default_s_of) -> StructureReport:
    """All applicable checks concatenated into one report."""
    report = StructureReport(f"box structure on "
                             f"{box.name or box.carrier.name}")
    if box.comult is not None and box.counit is not None:
        report.checks.extend(
            check_box_coalgebra(box, max_degree, s_of).checks)
    if box.mult is not None and box.unit is not None:
        report.checks.extend(
            check_box_algebra(box, max_degree, s_max, s_of).checks)
    if all(m is not None for m in
           (box.comult, box.counit, box.mult, box.unit)):
        report.checks.extend(
            check_box_bialgebra(box, max_degree, s_max, s_of).checks)
    if box.antipode is not None and box.mult is not None:
        report.checks.extend(check_antipode(box, max_degree, s_of).checks)
    return report
