"""E2-page assembly for circle homology of exterior coalgebras,
collapse analysis by bidegree arithmetic, and free-loop-space homology
tables.

For an exterior coalgebra on odd cogenerators x_{i_1}, ..., x_{i_n}
the E2 page is the free bigraded algebra Lambda(y_{i_j}) (x) k[w_{i_j}]
with y at (0, i_j) and w at (1, i_j).  Differentials d_r shift
bidegrees by (r, r - 1) and can only run from an algebra
indecomposable (a monomial with a single w factor) to a coalgebra
primitive (1 (x) w^{p^b} in characteristic p), which turns the
existence question into the arithmetic solved here.
"""

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .coalgebra import GradedCoalgebra
from .complexes import HomologyTable, cohh
from .fields import FieldSpec


class DegreeEven(ValueError):
    """Raised for exterior generator lists containing an even degree."""


class NotPrime(ValueError):
    pass


class CollapseNotEstablished(Exception):
    """Raised when a loop-homology table is requested but candidate
    differentials have not been ruled out."""


class MismatchWithClosedForm(Exception):
    """Computed structure disagrees with the closed form it must match."""


def _check_degrees(degrees):
    if not degrees:
        raise ValueError("need at least one generator degree")
    for d in degrees:
        if d % 2 == 0:
            raise DegreeEven(f"exterior generator degree {d} is even")
        if d < 3:
            raise ValueError(f"generator degree {d} must be at least 3")
    if list(degrees) != sorted(degrees):
        raise ValueError("generator degrees must be sorted ascending")


def _check_prime(p: int):
    try:
        spec = FieldSpec(p)
    except ValueError as exc:
        raise NotPrime(str(exc)) from exc
    if not spec.is_prime_field:
        raise NotPrime(f"{p} is not prime")


def exterior_monomials(degrees, s_max: int, t_max: int):
    """All monomials y^eps w^a of the free bigraded algebra, by
    bidegree: {(s, t): [name, ...]}."""
    out: dict = {}
    n = len(degrees)
    for eps in itertools.product((0, 1), repeat=n):
        t0 = sum(e * d for e, d in zip(eps, degrees))
        if t0 > t_max:
            continue

        def rec(j, s, t, exps):
            if t > t_max or s > s_max:
                return
            if j == n:
                out.setdefault((s, t), []).append(
                    monomial_name(degrees, eps, tuple(exps)))
                return
            a = 0
            while t + a * degrees[j] <= t_max and s + a <= s_max:
                rec(j + 1, s + a, t + a * degrees[j], exps + [a])
                a += 1

        rec(0, 0, t0, [])
    for names in out.values():
        names.sort()
    return out


def monomial_name(degrees, eps, exps) -> str:
    parts = []
    for e, d in zip(eps, degrees):
        if e:
            parts.append(f"y{d}")
    for a, d in zip(exps, degrees):
        if a == 1:
            parts.append(f"w{d}")
        elif a > 1:
            parts.append(f"w{d}^{a}")
    return "*".join(parts) if parts else "1"


def exterior_e2_dims(degrees, s_max: int, t_max: int) -> dict:
    return {bd: len(names)
            for bd, names in exterior_monomials(degrees, s_max, t_max).items()}


@dataclass
class E2Page:
    coalgebra: GradedCoalgebra
    table: HomologyTable
    s_max: int
    t_max: int
    generators: dict = dc_field(default_factory=dict)   # name -> (s, t)
    generator_degrees: list = None        # set for exterior inputs
    closed_form_ok: bool = None

    def dims(self) -> dict:
        return self.table.dims()

    def total_degree_dims(self, complete_only=True) -> dict:
        """Dims per total degree n = t - s.  With complete_only, stop at
        the largest n for which every contributing bidegree is within
        bounds (each w factor adds at least 2 to t - s, so s <= n/2 and
        t <= 3n/2)."""
        out: dict = {}
        for (s, t), d in self.table.dims().items():
            out[t - s] = out.get(t - s, 0) + d
        if complete_only:
            n_complete = min(2 * self.s_max, (2 * self.t_max) // 3)
            out = {n: d for n, d in out.items() if n <= n_complete}
        return out


def build_e2(h: GradedCoalgebra, s_max: int, t_max: int) -> E2Page:
    """Wrap the circle homology of h as an E2 page; for exterior inputs
    the named generators of the closed form are attached and the
    computed dimensions are compared against it."""
    table = cohh(h, s_max, t_max)
    page = E2Page(h, table, s_max, t_max)
    degrees = h.metadata.get("degrees")
    if h.metadata.get("kind") == "exterior" and degrees:
        page.generator_degrees = list(degrees)
        for d in degrees:
            page.generators[f"y{d}"] = (0, d)
            page.generators[f"w{d}"] = (1, d)
        bound = int(min(t_max, h.complete_through()))
        expected = {bd: dim
                    for bd, dim in exterior_e2_dims(degrees, s_max,
                                                    bound).items() if dim}
        page.closed_form_ok = expected == table.dims()
    return page


@dataclass
class CandidateDifferential:
    r: int
    source_bidegree: tuple
    target_bidegree: tuple
    source_monomials: list
    target_monomial: str
    p_power: int
    equations: str

    def __str__(self):
        return (f"d_{self.r}: {self.source_bidegree} -> "
                f"{self.target_bidegree}, sources "
                f"{', '.join(self.source_monomials)}, target "
                f"{self.target_monomial} ({self.equations})")


@dataclass
class CollapseReport:
    degrees: list
    prime: int
    verdict: str                   # "Collapses" or "CandidatesExist"
    candidates: list
    bound_value: Fraction          # (i_n - 2 + sum i_j) / (i_1 - 1)
    bound_holds: bool              # strict: bound_value < p
    weak_bound_value: Fraction     # (i_n + sum i_j) / (i_1 - 1)
    weak_bound_holds: bool         # weak_bound_value <= p
    r_max: int
    t_max: int

    def __str__(self):
        lines = [f"exterior degrees {self.degrees}, p = {self.prime}: "
                 f"{self.verdict}",
                 f"  sharp bound (i_n - 2 + sum i_j)/(i_1 - 1) = "
                 f"{self.bound_value} "
                 f"({'<' if self.bound_holds else '>='} {self.prime})",
                 f"  weak bound (i_n + sum i_j)/(i_1 - 1) = "
                 f"{self.weak_bound_value} "
                 f"({'<=' if self.weak_bound_holds else '>'} {self.prime})",
                 f"  search exhaustive for r <= {self.r_max}, "
                 f"source degree <= {self.t_max}"]
        for c in self.candidates:
            lines.append("  candidate " + str(c))
        return "\n".join(lines)


def collapse_analysis(degrees, p: int, s_search: int = 10,
                      t_search: int = 40) -> CollapseReport:
    """Enumerate every possible differential from an indecomposable
    monomial (one w factor) to a primitive 1 (x) w^{p^b}.

    A d_r source has bidegree (1, i_{j_1} + ... + i_{j_m} + i_j) and a
    target has (p^b, i_a p^b); the shift by (r, r - 1) forces
    1 + r = p^b and i_{j_1} + ... + i_{j_m} + i_j - 2 = (i_a - 1) p^b.
    Candidates are aggregated per (r, source bidegree, target
    bidegree).  The search covers r <= s_search and source internal
    degree <= t_search, which is exhaustive within those bounds since
    both sides of each equation are monotone in the data."""
    _check_degrees(degrees)
    _check_prime(p)
    total = sum(degrees)
    bound_value = Fraction(degrees[-1] - 2 + total, degrees[0] - 1)
    weak_value = Fraction(degrees[-1] + total, degrees[0] - 1)

    found: dict = {}
    n = len(degrees)
    for m in range(n + 1):
        for subset in itertools.combinations(range(n), m):
            base = sum(degrees[j] for j in subset)
            for j in range(n):
                t_src = base + degrees[j]
                if t_src > t_search:
                    continue
                name = monomial_name(
                    degrees,
                    tuple(1 if k in subset else 0 for k in range(n)),
                    tuple(1 if k == j else 0 for k in range(n)))
                for a in range(n):
                    ia = degrees[a]
                    b = 1
                    while p ** b - 1 <= s_search:
                        pb = p ** b
                        r = pb - 1
                        if r >= 2 and t_src - 2 == (ia - 1) * pb:
                            key = (r, (1, t_src), (pb, ia * pb))
                            if key not in found:
                                found[key] = CandidateDifferential(
                                    r, (1, t_src), (pb, ia * pb), [],
                                    f"w{ia}^{pb}", pb,
                                    f"1+r = {p}^{b}, "
                                    f"{t_src}-2 = ({ia}-1)*{pb}")
                            if name not in found[key].source_monomials:
                                found[key].source_monomials.append(name)
                        b += 1
    candidates = [found[k] for k in sorted(found)]
    for c in candidates:
        c.source_monomials.sort()
    return CollapseReport(
        degrees=list(degrees), prime=p,
        verdict="Collapses" if not candidates else "CandidatesExist",
        candidates=candidates,
        bound_value=bound_value, bound_holds=bound_value < p,
        weak_bound_value=weak_value, weak_bound_holds=weak_value <= p,
        r_max=s_search, t_max=t_search)


@dataclass
class LoopHomologyTable:
    degrees: list
    prime: int
    dims: dict                     # total degree -> dim
    max_total_degree: int
    generators: dict               # name -> degree
    note: str = ("complete convergence assumed; coalgebra structure "
                 "expected but unverified")

    def __str__(self):
        lines = [f"free loop space homology for exterior degrees "
                 f"{self.degrees} (p = {self.prime}):"]
        for nd in range(self.max_total_degree + 1):
            lines.append(f"  degree {nd}: {self.dims.get(nd, 0)}")
        lines.append(f"  [{self.note}]")
        return "\n".join(lines)


def loop_series_dims(degrees, max_total_degree: int) -> dict:
    """Coefficients of prod (1 + q^{i_j}) / prod (1 - q^{i_j - 1})."""
    coeffs = [0] * (max_total_degree + 1)
    coeffs[0] = 1
    for d in degrees:
        nxt = list(coeffs)
        for k in range(d, max_total_degree + 1):
            nxt[k] += coeffs[k - d]
        coeffs = nxt
    for d in degrees:
        step = d - 1
        for k in range(step, max_total_degree + 1):
            coeffs[k] += coeffs[k - step]
    return {k: c for k, c in enumerate(coeffs)}


def loop_homology(degrees, p: int, max_total_degree: int,
                  s_search: int = 10, t_search: int = 40) \
        -> LoopHomologyTable:
    """Free-loop-space homology dims for a space with exterior
    cohomology, available only once the collapse is established
    (always, for a single generator)."""
    _check_degrees(degrees)
    _check_prime(p)
    if len(degrees) > 1:
        report = collapse_analysis(degrees, p, s_search, t_search)
        if report.verdict != "Collapses":
            raise CollapseNotEstablished(
                f"candidate differentials remain for degrees "
                f"{list(degrees)} at p = {p}: "
                + "; ".join(str(c) for c in report.candidates))
    generators = {}
    for d in degrees:
        generators[f"y{d}"] = d
        generators[f"w{d}"] = d - 1
    return LoopHomologyTable(
        degrees=list(degrees), prime=p,
        dims=loop_series_dims(degrees, max_total_degree),
        max_total_degree=max_total_degree, generators=generators)


@dataclass
class AuditReport:
    ok: bool
    indecomposables: dict          # (s, t) -> dim computed
    expected_indecomposables: dict
    primitives: dict
    expected_primitives: dict

    def __str__(self):
        status = "ok" if self.ok else "MISMATCH"
        return (f"structure audit: {status}\n"
                f"  indecomposables {self.indecomposables} "
                f"(expected {self.expected_indecomposables})\n"
                f"  primitives {self.primitives} "
                f"(expected {self.expected_primitives})")


def e2_structure_audit(page: E2Page, max_degree: int = None,
                       strict: bool = True) -> AuditReport:
    """Recompute algebra indecomposables and coalgebra primitives from
    the computed product and coproduct on the page, and compare with
    the closed forms that collapse_analysis relies on.

    Indecomposables are taken relative to the filtration-0 row (the
    base copy of the coalgebra): the augmentation ideal is everything
    of filtration >= 1, and the closed form says its indecomposables
    are exactly the classes x (x) w_i filling the filtration-1 row.
    Primitives are y_i, w_i, and 1 (x) w_i^{p^b} within bounds."""
    from . import structure as st

    if page.generator_degrees is None:
        raise ValueError("structure audit needs an exterior page")
    degrees = page.generator_degrees
    h = page.coalgebra
    f = h.field
    bound = page.t_max if max_degree is None else min(max_degree,
                                                     page.t_max)
    box, cs, kuenneth_ok = st.cohh_box_structure(
        h, page.s_max, page.t_max, with_mult=True)

    # indecomposables of the positive-filtration part modulo products
    computed_ind: dict = {}
    for t in range(1, bound + 1):
        for (s2, t2), dim in _quotient_by_products(box, cs, t).items():
            if dim:
                computed_ind[(s2, t2)] = dim
    expected_ind = {}
    if page.s_max >= 1:
        for (s2, t2), names in exterior_monomials(degrees, 1,
                                                  bound).items():
            if s2 == 1:
                expected_ind[(s2, t2)] = len(names)

    computed_prim = _primitive_dims(box, cs, bound)
    p = f.characteristic
    expected_prim = {}
    for d in degrees:
        for bd in ((0, d), (1, d)):
            if bd[1] <= bound and bd[0] <= page.s_max:
                expected_prim[bd] = expected_prim.get(bd, 0) + 1
    if p:
        for d in degrees:
            pb = p
            while d * pb <= bound:
                if pb <= page.s_max:
                    bd = (pb, d * pb)
                    expected_prim[bd] = expected_prim.get(bd, 0) + 1
                pb *= p
    ok = (kuenneth_ok and computed_ind == expected_ind
          and computed_prim == expected_prim)
    report = AuditReport(ok, computed_ind, expected_ind,
                         computed_prim, expected_prim)
    if strict and not ok:
        raise MismatchWithClosedForm(str(report))
    return report


def _quotient_by_products(box, cs, t: int) -> dict:
    """Dims of (positive-filtration part) / (products of
    positive-filtration parts) in internal degree t, split by
    filtration."""
    from . import linalg
    from .linalg import Matrix

    f = box.field
    E = box.carrier.space
    out: dict = {}
    for s in sorted({lbl[1] for lbl in E.labels(t) if lbl[1] >= 1}):
        labels = [l for l in E.labels(t) if l[1] == s]
        idx = {l: i for i, l in enumerate(labels)}
        cols = []
        for t1 in range(1, t):
            for a in E.labels(t1):
                for b in E.labels(t - t1):
                    if a[1] < 1 or b[1] < 1 or a[1] + b[1] != s:
                        continue
                    col = {}
                    for m, v in box.mult.column((a, b)).items():
                        if m in idx:
                            col[idx[m]] = v
                    if col:
                        cols.append(col)
        rank = linalg.rank(Matrix.from_columns(cols, len(labels)), f)
        dim = len(labels) - rank
        if dim:
            out[(s, t)] = dim
    return out


def _primitive_dims(box, cs, bound: int) -> dict:
    """Kernel dims of the reduced coproduct, per bidegree."""
    from . import linalg
    from .linalg import Matrix

    f = box.field
    E = box.carrier.space
    one = ("h", 0, 0, 0)
    out: dict = {}
    bidegrees = sorted({(l[1], l[2]) for l in E.degree_of if
                        0 < l[2] <= bound})
    for (s, t) in bidegrees:
        labels = [l for l in E.labels(t) if l[1] == s]
        idx: dict = {}
        cols = []
        for l in labels:
            col: dict = {}
            for (a, b), v in box.comult.column(l).items():
                if a == one or b == one:
                    continue
                col[idx.setdefault((a, b), len(idx))] = v
            cols.append(col)
        kernel = linalg.kernel_basis(Matrix.from_columns(cols, len(idx)), f)
        if kernel:
            out[(s, t)] = len(kernel)
    return out
