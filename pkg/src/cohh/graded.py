"""Finite-type graded vector spaces with labelled bases, and degree-zero
linear maps between them.

A label is any hashable (strings for coalgebra basis ids, tuples for
tensor factors).  A GradedMap stores sparse columns {source label ->
{target label -> scalar}}; every map here preserves the internal degree,
so ranks and kernels are computed one degree at a time.
"""

from .fields import FieldSpec
from .linalg import Matrix


def add_term(sum_: dict, key, coeff, field: FieldSpec):
    """Accumulate coeff at key in a formal sum, dropping zeros."""
    if not coeff:
        return
    v = field.add(sum_.get(key, field.zero), coeff)
    if v:
        sum_[key] = v
    else:
        sum_.pop(key, None)


def scale_sum(sum_: dict, coeff, field: FieldSpec) -> dict:
    if not coeff:
        return {}
    return {k: field.mul(coeff, v) for k, v in sum_.items()}


def sub_sums(a: dict, b: dict, field: FieldSpec) -> dict:
    out = dict(a)
    for k, v in b.items():
        add_term(out, k, field.neg(v), field)
    return out


class GradedSpace:
    """Labelled basis, organised by degree, with stable ordering."""

    def __init__(self, labelled_degrees=()):
        self.by_degree: dict = {}
        self.degree_of: dict = {}
        self._index: dict = {}
        for label, degree in labelled_degrees:
            self.add(label, degree)

    def add(self, label, degree: int):
        if label in self.degree_of:
            raise ValueError(f"duplicate basis label {label!r}")
        self.degree_of[label] = degree
        bucket = self.by_degree.setdefault(degree, [])
        self._index[label] = len(bucket)
        bucket.append(label)

    def degrees(self):
        return sorted(self.by_degree)

    def labels(self, degree: int):
        return self.by_degree.get(degree, [])

    def all_labels(self):
        for d in self.degrees():
            yield from self.by_degree[d]

    def dim(self, degree: int) -> int:
        return len(self.by_degree.get(degree, []))

    def total_dim(self) -> int:
        return len(self.degree_of)

    def index(self, label) -> int:
        return self._index[label]

    def __contains__(self, label):
        return label in self.degree_of

    def vector_of_sum(self, sum_: dict, degree: int) -> dict:
        """Formal sum (homogeneous of this degree) -> coordinate vector."""
        vec = {}
        for label, c in sum_.items():
            if self.degree_of[label] != degree:
                raise ValueError(f"label {label!r} not of degree {degree}")
            vec[self._index[label]] = c
        return vec

    def sum_of_vector(self, vec: dict, degree: int) -> dict:
        labels = self.by_degree.get(degree, [])
        return {labels[i]: c for i, c in vec.items() if c}


def tensor_space(a: GradedSpace, b: GradedSpace, max_degree=None) -> GradedSpace:
    """Tensor product with pair labels (la, lb); optionally truncated."""
    out = GradedSpace()
    for la, da in a.degree_of.items():
        for lb, db in b.degree_of.items():
            d = da + db
            if max_degree is None or d <= max_degree:
                out.add((la, lb), d)
    return out


class GradedMap:
    """A degree-preserving linear map, stored as sparse columns."""

    def __init__(self, source: GradedSpace, target: GradedSpace, columns=None):
        self.source = source
        self.target = target
        self.columns: dict = {}
        if columns:
            for label, col in columns.items():
                self.set_column(label, col)

    def set_column(self, label, col: dict):
        if label not in self.source:
            raise ValueError(f"unknown source label {label!r}")
        self.columns[label] = {k: v for k, v in col.items() if v}

    def column(self, label) -> dict:
        return self.columns.get(label, {})

    def apply(self, sum_: dict, field: FieldSpec) -> dict:
        out: dict = {}
        for label, c in sum_.items():
            for tgt, v in self.column(label).items():
                add_term(out, tgt, field.mul(c, v), field)
        return out

    def compose(self, other: "GradedMap", field: FieldSpec) -> "GradedMap":
        """self after other (self . other)."""
        out = GradedMap(other.source, self.target)
        for label in other.columns:
            out.set_column(label, self.apply(other.column(label), field))
        return out

    def matrix(self, degree: int) -> Matrix:
        rows = self.target.dim(degree)
        cols = self.source.labels(degree)
        m = Matrix(rows, len(cols))
        for j, label in enumerate(cols):
            for tgt, v in self.column(label).items():
                m.entries[(self.target.index(tgt), j)] = v
        return m

    def equals(self, other: "GradedMap", field: FieldSpec) -> bool:
        labels = set(self.columns) | set(other.columns)
        for label in labels:
            if sub_sums(self.column(label), other.column(label), field):
                return False
        return True

    def first_discrepancy(self, other: "GradedMap", field: FieldSpec):
        for label in sorted(
            set(self.columns) | set(other.columns), key=repr
        ):
            diff = sub_sums(self.column(label), other.column(label), field)
            if diff:
                return label, diff
        return None

    def add(self, other: "GradedMap", field: FieldSpec) -> "GradedMap":
        out = GradedMap(self.source, self.target)
        for label in set(self.columns) | set(other.columns):
            col = dict(self.column(label))
            for k, v in other.column(label).items():
                add_term(col, k, v, field)
            out.set_column(label, col)
        return out

    def scale(self, c, field: FieldSpec) -> "GradedMap":
        out = GradedMap(self.source, self.target)
        for label, col in self.columns.items():
            out.set_column(label, scale_sum(col, c, field))
        return out

    @classmethod
    def identity(cls, space: GradedSpace, field: FieldSpec) -> "GradedMap":
        out = cls(space, space)
        for label in space.degree_of:
            out.set_column(label, {label: field.one})
        return out

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace) -> "GradedMap":
        return cls(source, target)


def tensor_map(f: GradedMap, g: GradedMap, source: GradedSpace,
               target: GradedSpace, field: FieldSpec) -> GradedMap:
    """f (x) g on a tensor space with pair labels.

    Both maps preserve internal degree, so no Koszul signs arise from
    moving g past elements; signs enter only through explicit twists.
    """
    out = GradedMap(source, target)
    for (la, lb) in source.degree_of:
        col: dict = {}
        for ta, va in f.column(la).items():
            for tb, vb in g.column(lb).items():
                if (ta, tb) in target:
                    add_term(col, (ta, tb), field.mul(va, vb), field)
        out.set_column((la, lb), col)
    return out


def twist_on(source: GradedSpace, target: GradedSpace, field: FieldSpec,
             degree_a, degree_b, extra_sign=None) -> GradedMap:
    """Koszul twist (la, lb) -> (lb, la) with sign (-1)^{|la||lb|}.

    degree_a/degree_b give the internal degree of a factor label;
    extra_sign(la, lb), if supplied, multiplies in an additional +/-1
    (used for bigraded pages where the homological degree also counts).
    """
    out = GradedMap(source, target)
    for (la, lb) in source.degree_of:
        s = (-1) ** (degree_a(la) * degree_b(lb))
        if extra_sign is not None:
            s *= extra_sign(la, lb)
        out.set_column((la, lb), {(lb, la): field.coerce(s)})
    return out
