"""Finite-type graded coalgebras presented by structure tables.

A GradedCoalgebra carries a labelled graded basis, a comultiplication
table {id: {(id, id): coeff}}, a counit table {id: coeff}, and the label
of the coaugmentation grouplike (written "1" by the constructors).
Constructors are provided for exterior coalgebras on odd generators,
truncated divided-style polynomial coalgebras on even generators (the
binomial comultiplication), tensor products, and raw tables.

Sign conventions are Koszul throughout: splitting an exterior monomial
x_S into x_A (x) x_B contributes (-1) for every pair (a, b), a in A and
b in B, with b preceding a in S, weighted by the product of degrees.
"""

import itertools
import math
from dataclasses import dataclass, field as dc_field

from .fields import FieldSpec
from .graded import GradedMap, GradedSpace, add_term, sub_sums, tensor_space


class GradedCoalgebra:
    def __init__(self, field: FieldSpec, basis, comult, counit,
                 coaug="1", truncation=None, name="", metadata=None):
        self.field = field
        self.space = GradedSpace(basis)
        self.comult = {k: {p: c for p, c in v.items() if c} for k, v in comult.items()}
        self.counit = {k: v for k, v in counit.items() if v}
        self.coaug = coaug
        # Largest degree through which the basis is complete; None means
        # the coalgebra is finite and the table is the whole thing.
        self.truncation = truncation
        self.name = name
        self.metadata = metadata or {}
        self._iterated: dict = {}

    def degree(self, label) -> int:
        return self.space.degree_of[label]

    @property
    def max_degree(self) -> int:
        degs = self.space.degrees()
        return degs[-1] if degs else 0

    def complete_through(self):
        """Internal degree through which the table is complete; math.inf
        for a finite coalgebra stored in full."""
        return math.inf if self.truncation is None else self.truncation

    def comult_of(self, label) -> dict:
        return self.comult.get(label, {})

    def counit_of(self, label):
        return self.counit.get(label, self.field.zero)

    def comult_map(self, max_degree=None) -> GradedMap:
        tgt = tensor_space(self.space, self.space, max_degree)
        out = GradedMap(self.space, tgt)
        for label in self.space.degree_of:
            col = {p: c for p, c in self.comult_of(label).items() if p in tgt}
            out.set_column(label, col)
        return out

    def iterated_comult(self, label, k: int) -> dict:
        """Delta^(k): formal sum over k-tuples of basis ids.

        k = 0 is the counit (keyed by the empty tuple), k = 1 the
        identity.  Cached per (label, k).
        """
        key = (label, k)
        cached = self._iterated.get(key)
        if cached is not None:
            return cached
        f = self.field
        if k == 0:
            e = self.counit_of(label)
            out = {(): e} if e else {}
        elif k == 1:
            out = {(label,): f.one}
        else:
            out = {}
            for prefix, c in self.iterated_comult(label, k - 1).items():
                for (a, b), d in self.comult_of(prefix[-1]).items():
                    add_term(out, prefix[:-1] + (a, b), f.mul(c, d), f)
        self._iterated[key] = out
        return out

    def __repr__(self):
        return f"GradedCoalgebra({self.name or 'table'}, {self.field}, dim={self.space.total_dim()})"


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    witness: str = ""


@dataclass
class ValidationReport:
    checks: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __str__(self):
        lines = []
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            lines.append(f"{mark} {c.name}" + (f": {c.witness}" if c.witness else ""))
        return "\n".join(lines)


def validate(c: GradedCoalgebra, max_degree=None) -> ValidationReport:
    """Check the coalgebra axioms on the stored table.

    Coassociativity and the counit law are verified on every basis
    element whose comultiplication stays within the stored range; with a
    truncation, elements above it are skipped (their table rows are
    incomplete by construction).
    """
    f = c.field
    report = ValidationReport()
    bound = c.complete_through() if max_degree is None else min(
        max_degree, c.complete_through()
    )

    def within(label):
        return c.degree(label) <= bound

    # counit concentrated in degree 0
    bad = [k for k, v in c.counit.items() if v and c.degree(k) != 0]
    report.checks.append(AxiomCheck(
        "counit concentrated in degree 0", not bad,
        f"counit nonzero on {bad[:3]}" if bad else ""))

    # degree additivity of the comultiplication
    bad = []
    for k, terms in c.comult.items():
        for (a, b) in terms:
            if c.degree(a) + c.degree(b) != c.degree(k):
                bad.append((k, a, b))
    report.checks.append(AxiomCheck(
        "comultiplication preserves degree", not bad,
        f"degree mismatch at {bad[:3]}" if bad else ""))

    # counit law: (eps (x) id) Delta = id = (id (x) eps) Delta
    bad = []
    for k in c.space.degree_of:
        if not within(k):
            continue
        left: dict = {}
        right: dict = {}
        for (a, b), v in c.comult_of(k).items():
            add_term(left, b, f.mul(c.counit_of(a), v), f)
            add_term(right, a, f.mul(v, c.counit_of(b)), f)
        want = {k: f.one}
        if left != want or right != want:
            bad.append(k)
    report.checks.append(AxiomCheck(
        "counit law", not bad, f"fails at {bad[:3]}" if bad else ""))

    # coassociativity
    bad = []
    for k in c.space.degree_of:
        if not within(k):
            continue
        lhs: dict = {}
        rhs: dict = {}
        for (a, b), v in c.comult_of(k).items():
            for (a1, a2), w in c.comult_of(a).items():
                add_term(lhs, (a1, a2, b), f.mul(v, w), f)
            for (b1, b2), w in c.comult_of(b).items():
                add_term(rhs, (a, b1, b2), f.mul(v, w), f)
        if sub_sums(lhs, rhs, f):
            bad.append(k)
    report.checks.append(AxiomCheck(
        "coassociativity", not bad, f"fails at {bad[:3]}" if bad else ""))

    # coaugmentation: a grouplike spanning degree 0
    g = c.coaug
    ok = (
        g in c.space.degree_of
        and c.degree(g) == 0
        and c.space.dim(0) == 1
        and c.comult_of(g) == {(g, g): f.one}
        and c.counit_of(g) == f.one
    )
    report.checks.append(AxiomCheck(
        "coaugmentation is a degree-0 grouplike", ok,
        "" if ok else f"coaugmentation {g!r} is not a spanning grouplike"))

    return report


def is_cocommutative(c: GradedCoalgebra, max_degree=None) -> bool:
    """Graded cocommutativity: tau Delta = Delta with Koszul signs."""
    f = c.field
    bound = c.complete_through() if max_degree is None else max_degree
    for k in c.space.degree_of:
        if c.degree(k) > bound:
            continue
        twisted: dict = {}
        for (a, b), v in c.comult_of(k).items():
            s = (-1) ** (c.degree(a) * c.degree(b))
            add_term(twisted, (b, a), f.mul(f.coerce(s), v), f)
        if sub_sums(twisted, dict(c.comult_of(k)), f):
            return False
    return True


# ---------------------------------------------------------------------------
# constructors


def _dedupe_names(prefix: str, degrees):
    seen: dict = {}
    names = []
    for d in degrees:
        seen[d] = seen.get(d, 0) + 1
        n = f"{prefix}{d}" if seen[d] == 1 else f"{prefix}{d}_{seen[d]}"
        names.append(n)
    return names


def exterior_coalgebra(degrees, field: FieldSpec, name=None) -> GradedCoalgebra:
    """Exterior coalgebra on primitive generators in odd degrees.

    Basis: square-free monomials, id "1" or the concatenation of
    generator names in the fixed generator order, e.g. "x3x5".
    """
    degrees = sorted(degrees)
    if any(d <= 0 or d % 2 == 0 for d in degrees):
        raise ValueError("exterior generators must have odd positive degree")
    gens = _dedupe_names("x", degrees)
    n = len(gens)

    def mono_id(subset):
        return "".join(gens[i] for i in subset) or "1"

    basis = []
    comult = {}
    counit = {}
    for r in range(n + 1):
        for subset in itertools.combinations(range(n), r):
            mid = mono_id(subset)
            basis.append((mid, sum(degrees[i] for i in subset)))
            counit[mid] = field.one if not subset else field.zero
            terms: dict = {}
            for k in range(r + 1):
                for a_pos in itertools.combinations(range(r), k):
                    a_set = set(a_pos)
                    sign = 0
                    # pairs (b, a) with b in the complement appearing
                    # before a in the monomial contribute |a||b|
                    for i in range(r):
                        if i in a_set:
                            continue
                        for j in a_pos:
                            if i < j:
                                sign += degrees[subset[i]] * degrees[subset[j]]
                    a_id = mono_id(tuple(subset[i] for i in a_pos))
                    b_id = mono_id(tuple(subset[i] for i in range(r) if i not in a_set))
                    add_term(terms, (a_id, b_id),
                             field.coerce((-1) ** sign), field)
            comult[mid] = terms
    return GradedCoalgebra(
        field, basis, comult, counit, coaug="1", truncation=None,
        name=name or "Lambda(" + ",".join(str(d) for d in degrees) + ")",
        metadata={"kind": "exterior", "degrees": list(degrees),
                  "generators": gens})


def polynomial_coalgebra(degrees, field: FieldSpec, truncation: int,
                         name=None) -> GradedCoalgebra:
    """Polynomial coalgebra on even-degree generators, truncated.

    Delta(w^j) = sum_k C(j, k) w^k (x) w^(j-k); binomials are computed in
    Z and reduced into the field.  The basis holds every monomial of
    total degree <= truncation, so the table is complete through it.
    """
    degrees = sorted(degrees)
    if any(d <= 0 or d % 2 for d in degrees):
        raise ValueError("polynomial generators must have even positive degree")
    if truncation < 0:
        raise ValueError("truncation must be nonnegative")
    gens = _dedupe_names("w", degrees)

    def mono_id(exps):
        parts = []
        for g, e in zip(gens, exps):
            if e == 1:
                parts.append(g)
            elif e > 1:
                parts.append(f"{g}^{e}")
        return "".join(parts) or "1"

    monomials = [()]
    for d in degrees:
        monomials = [m + (e,) for m in monomials
                     for e in range(0, truncation + 1)]
    monomials = [m for m in monomials
                 if sum(e * d for e, d in zip(m, degrees)) <= truncation]
    monomials.sort(key=lambda m: (sum(e * d for e, d in zip(m, degrees)), m))

    basis = []
    comult = {}
    counit = {}
    for m in monomials:
        mid = mono_id(m)
        basis.append((mid, sum(e * d for e, d in zip(m, degrees))))
        counit[mid] = field.one if not any(m) else field.zero
        terms: dict = {}
        for split in itertools.product(*(range(e + 1) for e in m)):
            coeff = 1
            for e, k in zip(m, split):
                coeff *= math.comb(e, k)
            rest = tuple(e - k for e, k in zip(m, split))
            add_term(terms, (mono_id(split), mono_id(rest)),
                     field.coerce(coeff), field)
        comult[mid] = terms
    return GradedCoalgebra(
        field, basis, comult, counit, coaug="1", truncation=truncation,
        name=name or "k[" + ",".join(str(d) for d in degrees) + f"]<= {truncation}",
        metadata={"kind": "polynomial", "degrees": list(degrees),
                  "generators": gens, "truncation": truncation})


def tensor_coalgebra(c1: GradedCoalgebra, c2: GradedCoalgebra,
                     name=None) -> GradedCoalgebra:
    """Tensor product coalgebra, Delta = (id (x) tau (x) id)(Delta (x) Delta).

    Basis ids are "a*b".  If either factor is truncated the product is
    complete through the smaller truncation.
    """
    if c1.field != c2.field:
        raise ValueError("factors must share a ground field")
    f = c1.field

    def tid(a, b):
        return f"{a}*{b}"

    basis = []
    comult = {}
    counit = {}
    factors = {}
    for a, da in c1.space.degree_of.items():
        for b, db in c2.space.degree_of.items():
            mid = tid(a, b)
            factors[mid] = (a, b)
            basis.append((mid, da + db))
            counit[mid] = f.mul(c1.counit_of(a), c2.counit_of(b))
            terms: dict = {}
            for (a1, a2), v in c1.comult_of(a).items():
                for (b1, b2), w in c2.comult_of(b).items():
                    sign = (-1) ** (c2.degree(b1) * c1.degree(a2))
                    add_term(terms, (tid(a1, b1), tid(a2, b2)),
                             f.mul(f.mul(v, w), f.coerce(sign)), f)
            comult[mid] = terms
    truncs = [t for t in (c1.truncation, c2.truncation) if t is not None]
    return GradedCoalgebra(
        f, basis, comult, counit, coaug=tid(c1.coaug, c2.coaug),
        truncation=min(truncs) if truncs else None,
        name=name or f"{c1.name}(x){c2.name}",
        metadata={"kind": "tensor", "factors": factors,
                  "factor_objects": (c1, c2),
                  "factor_names": (c1.name, c2.name)})


def table_coalgebra(field: FieldSpec, basis, comult, counit, coaug="1",
                    truncation=None, name="table") -> GradedCoalgebra:
    """Coalgebra from explicit structure tables (also the fault-injection
    entry point: no axioms are checked here, run validate separately)."""
    comult = {k: {tuple(p): field.coerce(v) for p, v in row.items()}
              for k, row in comult.items()}
    counit = {k: field.coerce(v) for k, v in counit.items()}
    return GradedCoalgebra(field, basis, comult, counit, coaug=coaug,
                           truncation=truncation, name=name)


def trivial_coalgebra(field: FieldSpec) -> GradedCoalgebra:
    return GradedCoalgebra(
        field, [("1", 0)], {"1": {("1", "1"): field.one}},
        {"1": field.one}, coaug="1", truncation=None, name="k")


@dataclass
class CoalgebraMap:
    """A degree-0 map of coalgebras given on basis elements."""

    source: GradedCoalgebra
    target: GradedCoalgebra
    data: dict  # id -> {id: coeff}
    name: str = ""

    def apply(self, label) -> dict:
        return self.data.get(label, {})

    def check(self, max_degree=None) -> ValidationReport:
        f = self.source.field
        report = ValidationReport()
        bound = self.source.complete_through() if max_degree is None else max_degree

        bad = []
        for k, img in self.data.items():
            for t in img:
                if self.source.degree(k) != self.target.degree(t):
                    bad.append((k, t))
        report.checks.append(AxiomCheck(
            "map preserves degree", not bad, str(bad[:3]) if bad else ""))

        bad = []
        for k in self.source.space.degree_of:
            if self.source.degree(k) > bound:
                continue
            lhs = self.source.counit_of(k)
            rhs = f.zero
            for t, v in self.apply(k).items():
                rhs = f.add(rhs, f.mul(v, self.target.counit_of(t)))
            if lhs != rhs:
                bad.append(k)
        report.checks.append(AxiomCheck(
            "compatible with counits", not bad, str(bad[:3]) if bad else ""))

        bad = []
        for k in self.source.space.degree_of:
            if self.source.degree(k) > bound:
                continue
            lhs: dict = {}
            for (a, b), v in self.source.comult_of(k).items():
                for ta, va in self.apply(a).items():
                    for tb, vb in self.apply(b).items():
                        add_term(lhs, (ta, tb), f.mul(v, f.mul(va, vb)), f)
            rhs: dict = {}
            for t, v in self.apply(k).items():
                for pair, w in self.target.comult_of(t).items():
                    add_term(rhs, pair, f.mul(v, w), f)
            if sub_sums(lhs, rhs, f):
                bad.append(k)
        report.checks.append(AxiomCheck(
            "compatible with comultiplications", not bad,
            str(bad[:3]) if bad else ""))
        return report


def counit_map(c: GradedCoalgebra) -> CoalgebraMap:
    k = trivial_coalgebra(c.field)
    data = {}
    for label in c.space.degree_of:
        e = c.counit_of(label)
        data[label] = {"1": e} if e else {}
    return CoalgebraMap(c, k, data, name="counit")


def tensor_projection(t: GradedCoalgebra, which: int) -> CoalgebraMap:
    """Project a tensor coalgebra onto factor 0 or 1 via the other counit."""
    if t.metadata.get("kind") != "tensor":
        raise ValueError("not a tensor coalgebra")
    factors = t.metadata["factors"]
    c1, c2 = t.metadata["factor_objects"]
    data = {}
    for mid, (a, b) in factors.items():
        if which == 0:
            e = c2.counit_of(b)
            data[mid] = {a: e} if e else {}
        else:
            e = c1.counit_of(a)
            data[mid] = {b: e} if e else {}
    return CoalgebraMap(t, c1 if which == 0 else c2, data,
                        name=f"proj{which}")


def primitives_of_coalgebra(c: GradedCoalgebra, max_degree: int):
    """Primitive elements in each degree 1..max_degree.

    For a connected coalgebra this is the kernel of the reduced
    comultiplication: x with Delta(x) = 1 (x) x + x (x) 1.  Returns
    {degree: [formal sums]}.
    """
    from . import linalg

    f = c.field
    g = c.coaug
    out = {}
    for d in range(1, max_degree + 1):
        labels = c.space.labels(d)
        if not labels:
            continue
        pair_index: dict = {}
        rows_cols = []
        for j, label in enumerate(labels):
            col: dict = {}
            for (a, b), v in c.comult_of(label).items():
                if a == g or b == g:
                    continue
                idx = pair_index.setdefault((a, b), len(pair_index))
                col[idx] = v
            rows_cols.append(col)
        m = linalg.Matrix.from_columns(rows_cols, len(pair_index))
        kernel = linalg.kernel_basis(m, f)
        out[d] = [
            {labels[j]: v for j, v in vec.items()} for vec in kernel
        ]
    return out
