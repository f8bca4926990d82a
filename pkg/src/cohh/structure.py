"""Algebraic structure on the homology of circle cochain complexes:
the dual Eilenberg-Zilber maps, the coproduct and product at cochain
level, and the assembled box-(bi)algebra structure on the homology
table, including the antipode transported from the double-edge model.

Conventions.  For cochains over a shape whose level lists start with
the basepoint vertex, the D-coactions use that tensor slot: the left
coaction applies Delta there and pulls the first leg out front; the
right coaction pulls it past the whole word to the back, with the
Koszul sign.
"""

import itertools

from . import linalg
from .coalgebra import GradedCoalgebra
from .comodule import BoxStructure, Comodule, cotensor
from .complexes import (
    CosimplicialModule,
    HomologyTable,
    cohh,
    induced_homology_map,
    induced_operator,
    _words,
)
from .graded import GradedMap, GradedSpace, add_term, tensor_space
from .linalg import Matrix
from .simplicial import (
    collapse_double_edge,
    double_edge_circle,
    flip_double_edge,
)


class NotEqualized(Exception):
    """Raised when a tensor is not in the cotensor subspace."""


# ---------------------------------------------------------------------------
# cochain-level coactions (basepoint tensor slot)


def word_degree(D: GradedCoalgebra, word) -> int:
    return sum(D.degree(x) for x in word)


def cochain_left_coaction(D: GradedCoalgebra, word):
    """word -> sum of (d, word'), applying Delta in slot 0."""
    out = {}
    for (a, b), v in D.comult_of(word[0]).items():
        add_term(out, (a, (b,) + word[1:]), v, D.field)
    return out


def cochain_right_coaction(D: GradedCoalgebra, word):
    """word -> sum of (word', d), rotating the first Delta leg to the
    back with the Koszul sign."""
    f = D.field
    rest = word_degree(D, word[1:])
    out = {}
    for (a, b), v in D.comult_of(word[0]).items():
        sign = (-1) ** (D.degree(a) * (D.degree(b) + rest))
        add_term(out, ((b,) + word[1:], a), f.mul(v, f.coerce(sign)), f)
    return out


# ---------------------------------------------------------------------------
# homology projector extended to ambient level words


class AmbientProjector:
    """Linear retraction (ambient level words) -> homology classes.

    On the normalized subspace it is the chain projection onto chosen
    representatives; elsewhere it is an arbitrary linear extension,
    which is harmless because callers only evaluate it on slices of
    vectors lying in (normalized) (x) (normalized).
    """

    def __init__(self, H: HomologyTable):
        self.H = H
        self._cache: dict = {}

    def project(self, s: int, t: int, vec: dict) -> dict:
        """vec: formal sum on ambient labels of level s, degree t."""
        H = self.H
        if not vec or (s, t) not in H.data:
            return {}
        f = H.field
        amb = H.complex.ambient.space(s)
        key = (s, t)
        if key not in self._cache:
            e = H.complex.embed[s].matrix(t)
            cols = [e.column(j) for j in range(e.ncols)]
            ech_rows: list = []
            ech_piv: list = []
            for c in cols:
                red = linalg.reduce_mod_span(c, ech_rows, ech_piv, f)
                piv = min(red)
                inv = f.inv(red[piv])
                ech_rows.append({j: f.mul(inv, v) for j, v in red.items()})
                ech_piv.append(piv)
            extra = []
            for j in range(amb.dim(t)):
                red = linalg.reduce_mod_span({j: f.one}, ech_rows, ech_piv, f)
                if red:
                    piv = min(red)
                    inv = f.inv(red[piv])
                    ech_rows.append({jj: f.mul(inv, v)
                                     for jj, v in red.items()})
                    ech_piv.append(piv)
                    extra.append({j: f.one})
            full = Matrix.from_columns(cols + extra, amb.dim(t))
            self._cache[key] = (full, e.ncols)
        full, ncols = self._cache[key]
        target = amb.vector_of_sum(vec, t)
        (sol,) = linalg.solve(full, [target], self.H.field)
        labels = H.complex.terms[s].labels(t)
        nsum = {labels[j]: v for j, v in sol.items() if j < ncols}
        return H.class_coords(s, t, nsum)


# ---------------------------------------------------------------------------
# mixed bicosimplicial spaces for the Eilenberg-Zilber maps


class MixedBicosimplicial:
    """Spaces D^{(x) A_p} (x) D^{(x) B_q} with the two families of
    cosimplicial operators acting on one part at a time."""

    def __init__(self, A: CosimplicialModule, B: CosimplicialModule):
        if A.D is not B.D:
            raise ValueError("both factors must share the coalgebra")
        self.A = A
        self.B = B
        self.D = A.D
        self.t_max = min(A.t_max, B.t_max)
        self._spaces: dict = {}

    def level(self, p: int, q: int):
        return ([("L", s) for s in self.A.levels[p]]
                + [("R", s) for s in self.B.levels[q]])

    def space(self, p: int, q: int) -> GradedSpace:
        if (p, q) not in self._spaces:
            self._spaces[(p, q)] = GradedSpace(
                _words(self.D, len(self.level(p, q)), self.t_max))
        return self._spaces[(p, q)]

    def split(self, p: int, q: int, word):
        cut = len(self.A.levels[p])
        return word[:cut], word[cut:]

    def _op(self, side, kind, p, q, i):
        if side == "A":
            if kind == "delta":
                a_lv, b_lv = self.level(p + 1, q), self.level(p, q)
                src, tgt = self.space(p, q), self.space(p + 1, q)

                def fmap(s):
                    return (("L", self.A.face_fn(p + 1, i, s[1]))
                            if s[0] == "L" else s)
            else:
                a_lv, b_lv = self.level(p, q), self.level(p + 1, q)
                src, tgt = self.space(p + 1, q), self.space(p, q)

                def fmap(s):
                    return (("L", self.A.degeneracy_fn(p, i, s[1]))
                            if s[0] == "L" else s)
        else:
            if kind == "delta":
                a_lv, b_lv = self.level(p, q + 1), self.level(p, q)
                src, tgt = self.space(p, q), self.space(p, q + 1)

                def fmap(s):
                    return (("R", self.B.face_fn(q + 1, i, s[1]))
                            if s[0] == "R" else s)
            else:
                a_lv, b_lv = self.level(p, q), self.level(p, q + 1)
                src, tgt = self.space(p, q + 1), self.space(p, q)

                def fmap(s):
                    return (("R", self.B.degeneracy_fn(q, i, s[1]))
                            if s[0] == "R" else s)
        return induced_operator(self.D, a_lv, b_lv, fmap, src, tgt)

    def delta_A(self, p, q, i):
        """delta_i on the A part: (p, q) -> (p+1, q)."""
        return self._op("A", "delta", p, q, i)

    def sigma_A(self, p, q, i):
        """sigma_i on the A part: (p+1, q) -> (p, q)."""
        return self._op("A", "sigma", p, q, i)

    def delta_B(self, p, q, i):
        return self._op("B", "delta", p, q, i)

    def sigma_B(self, p, q, i):
        return self._op("B", "sigma", p, q, i)


def partial_diff_A(mx: MixedBicosimplicial, p: int, q: int) -> GradedMap:
    """Alternating sum of the A-part cofaces: (p, q) -> (p+1, q)."""
    f = mx.D.field
    out = GradedMap.zero(mx.space(p, q), mx.space(p + 1, q))
    for i in range(p + 2):
        out = out.add(mx.delta_A(p, q, i).scale(f.coerce((-1) ** i), f), f)
    return out


def partial_diff_B(mx: MixedBicosimplicial, p: int, q: int) -> GradedMap:
    """Alternating sum of the B-part cofaces: (p, q) -> (p, q+1)."""
    f = mx.D.field
    out = GradedMap.zero(mx.space(p, q), mx.space(p, q + 1))
    for i in range(q + 2):
        out = out.add(mx.delta_B(p, q, i).scale(f.coerce((-1) ** i), f), f)
    return out


def aw_map(mx: MixedBicosimplicial, p: int, q: int) -> GradedMap:
    """Dual Alexander-Whitney: A^p (x) B^q -> (A (x) B)^{p+q}.

    Back cofaces on the A part, iterated delta_0 on the B part."""
    f = mx.D.field
    n = p + q
    cur = GradedMap.identity(mx.space(p, q), f)
    for step in range(p):
        cur = mx.delta_B(p, q + step, 0).compose(cur, f)
    for level in range(p, n):
        cur = mx.delta_A(level, n, level + 1).compose(cur, f)
    return cur


def shuffle_sign(mu) -> int:
    return sum(m - i for i, m in enumerate(mu))


def sh_map(mx: MixedBicosimplicial, p: int, q: int) -> GradedMap:
    """Dual shuffle map component (A (x) B)^{p+q} -> A^p (x) B^q."""
    f = mx.D.field
    n = p + q
    total = GradedMap.zero(mx.space(n, n), mx.space(p, q))
    for mu in itertools.combinations(range(n), p):
        nu = tuple(sorted(set(range(n)) - set(mu)))
        cur = GradedMap.identity(mx.space(n, n), f)
        for k, idx in enumerate(reversed(mu)):
            cur = mx.sigma_B(n, n - 1 - k, idx).compose(cur, f)
        for k, idx in enumerate(reversed(nu)):
            cur = mx.sigma_A(n - 1 - k, q, idx).compose(cur, f)
        total = total.add(cur.scale(f.coerce((-1) ** shuffle_sign(mu)), f), f)
    return total


def levelwise_comult(cm: CosimplicialModule, mx: MixedBicosimplicial,
                     n: int) -> GradedMap:
    """Apply Delta in every slot of D^{(x) X_n} and reorder into
    (first legs, second legs) with Koszul signs."""
    D = cm.D
    f = D.field
    out = GradedMap(cm.space(n), mx.space(n, n))
    for word in cm.space(n).degree_of:
        col: dict = {}
        terms = [((), (), f.one)]
        for x in word:
            new = []
            for (la, lb, c) in terms:
                for (a, b), v in D.comult_of(x).items():
                    new.append((la + (a,), lb + (b,), f.mul(c, v)))
            terms = new
        for (la, lb, c) in terms:
            sign = 0
            for i in range(len(lb)):
                di = D.degree(lb[i])
                if di % 2:
                    later = sum(D.degree(la[j]) for j in range(i + 1, len(la)))
                    sign += di * later
            key = la + lb
            if key in mx.space(n, n).degree_of:
                add_term(col, key, f.mul(c, f.coerce((-1) ** sign)), f)
        out.set_column(word, col)
    return out


# ---------------------------------------------------------------------------
# coproduct and product on homology classes


class CircleStructure:
    """Bundles a homology table over the circle with the machinery that
    computes its box-bialgebra structure maps."""

    def __init__(self, D: GradedCoalgebra, s_max: int, t_max: int):
        self.D = D
        self.field = D.field
        self.s_max = s_max
        self.t_max = t_max
        self.H = cohh(D, s_max, t_max)
        self.cm = self.H.complex.ambient
        self.mx = MixedBicosimplicial(self.cm, self.cm)
        self.proj = AmbientProjector(self.H)
        self._sh_cache: dict = {}
        self._lw_cache: dict = {}

    def _sh(self, p, q):
        if (p, q) not in self._sh_cache:
            self._sh_cache[(p, q)] = sh_map(self.mx, p, q)
        return self._sh_cache[(p, q)]

    def _levelwise(self, n):
        if n not in self._lw_cache:
            self._lw_cache[n] = levelwise_comult(self.cm, self.mx, n)
        return self._lw_cache[n]

    def class_coproduct(self, label) -> dict:
        """Coproduct of a homology class, as a formal sum on pairs of
        class labels."""
        _, s, t, _ = label
        f = self.field
        z = self.H.rep_ambient(label)
        tz = self._levelwise(s).apply(z, f)
        out: dict = {}
        for p in range(s + 1):
            q = s - p
            comp = self._sh(p, q).apply(tz, f)
            if not comp:
                continue
            for (hA, hB), v in self._pair_project(comp, p, q, t).items():
                add_term(out, (hA, hB), v, f)
        return out

    def _pair_project(self, vec, p, q, t) -> dict:
        """(pi (x) pi) on a vector of the mixed (p, q) space."""
        f = self.field
        by_ta: dict = {}
        for word, c in vec.items():
            wa, wb = self.mx.split(p, q, word)
            ta = word_degree(self.D, wa)
            by_ta.setdefault(ta, {}).setdefault(wb, {})
            add_term(by_ta[ta][wb], wa, c, f)
        out: dict = {}
        for ta, slices in by_ta.items():
            tb = t - ta
            for wb, avec in slices.items():
                ca = self.proj.project(p, ta, avec)
                if not ca:
                    continue
                cb = self.proj.project(q, tb, {wb: f.one})
                for hA, va in ca.items():
                    for hB, vb in cb.items():
                        add_term(out, (hA, hB), f.mul(va, vb), f)
        return out

    def product_on_cotensor(self, terms: dict, check=True) -> dict:
        """Multiply an equalized element of the total cotensor of the
        cochain complex with itself.

        terms: {(wordA, wordB): coeff} with len(wordA) + len(wordB)
        constant.  Returns a formal sum of homology classes.  Raises
        NotEqualized if the element fails the equalizer condition.
        """
        f = self.field
        if not terms:
            return {}
        if check and not self.is_equalized(terms):
            raise NotEqualized("input is not in the cotensor subspace")
        n = None
        t = None
        total: dict = {}
        for (wa, wb), c in terms.items():
            n = len(wa) + len(wb) - 2
            t = word_degree(self.D, wa) + word_degree(self.D, wb)
            e = self.D.counit_of(wb[0])
            if e:
                add_term(total, wa + wb[1:], f.mul(c, e), f)
        if not total:
            return {}
        return self.proj.project(n, t, total)

    def is_equalized(self, terms: dict) -> bool:
        f = self.field
        defect: dict = {}
        for (wa, wb), c in terms.items():
            for (wa2, d), v in cochain_right_coaction(self.D, wa).items():
                add_term(defect, (wa2, d, wb), f.mul(c, v), f)
            for (d, wb2), v in cochain_left_coaction(self.D, wb).items():
                add_term(defect, (wa, d, wb2), f.mul(f.neg(c), v), f)
        return not defect


# ---------------------------------------------------------------------------
# the cotensor total complex and the multiplication on homology


class CotensorComplex:
    """The total cotensor subcomplex of N* (x) N* with its homology and
    the Kuenneth identification."""

    def __init__(self, cs: CircleStructure):
        self.cs = cs
        f = cs.field
        H = cs.H
        cc = H.complex
        self.f = f
        self.basis: dict = {}       # (n, t) -> list of formal sums on tagged pairs
        self.reps: dict = {}        # (n, t) -> homology reps (index vectors)
        self.dims: dict = {}
        D = cs.D

        def coact_embedded(side, s, nl):
            emb = cc.embed[s].column(nl)
            out: dict = {}
            for word, c in emb.items():
                table = (cochain_right_coaction if side == "r"
                         else cochain_left_coaction)(D, word)
                for key, v in table.items():
                    add_term(out, key, f.mul(c, v), f)
            return out

        s_max, t_max = H.s_max, H.t_max
        for n in range(s_max + 2):
            for t in range(t_max + 1):
                pairs = []
                for u in range(n + 1):
                    v = n - u
                    if v > s_max + 1:
                        continue
                    for ta in cc.terms[u].degrees():
                        tb = t - ta
                        for la in cc.terms[u].labels(ta):
                            for lb in cc.terms[v].labels(tb):
                                pairs.append((la, lb))
                if not pairs:
                    continue
                idx: dict = {}
                cols = []
                for (la, lb) in pairs:
                    col: dict = {}
                    eb = cc.embed[lb[1]].column(lb)
                    ea = cc.embed[la[1]].column(la)
                    for (wa2, d), vv in coact_embedded("r", la[1], la).items():
                        for wb, cb in eb.items():
                            k = idx.setdefault((wa2, d, wb), len(idx))
                            col[k] = f.add(col.get(k, f.zero), f.mul(vv, cb))
                    for (d, wb2), vv in coact_embedded("l", lb[1], lb).items():
                        for wa, ca in ea.items():
                            k = idx.setdefault((wa, d, wb2), len(idx))
                            col[k] = f.sub(col.get(k, f.zero), f.mul(vv, ca))
                    cols.append({k: v for k, v in col.items() if v})
                kernel = linalg.kernel_basis(
                    Matrix.from_columns(cols, len(idx)), f)
                self.basis[(n, t)] = (
                    pairs,
                    [{j: v for j, v in k.items()} for k in kernel])

        # restricted total differential and homology
        for n in range(s_max + 1):
            for t in range(t_max + 1):
                cur = self.basis.get((n, t))
                if cur is None:
                    continue
                d_out = self._diff_matrix(n, t)
                d_in = (self._diff_matrix(n - 1, t)
                        if (n - 1, t) in self.basis else
                        Matrix(len(cur[1]), 0))
                dim, reps = linalg.homology_reps(d_out, d_in, f)
                if dim:
                    self.reps[(n, t)] = reps
                    self.dims[(n, t)] = dim

    def _pair_vec(self, n, t, kvec):
        pairs, kern = self.basis[(n, t)]
        out: dict = {}
        for j, c in kvec.items():
            for pj, v in kern[j].items():
                add_term(out, pairs[pj], self.f.mul(c, v), self.f)
        return out

    def _diff_matrix(self, n, t) -> Matrix:
        """Total differential from the (n, t) kernel basis to the
        (n+1, t) kernel basis coordinates."""
        f = self.f
        cc = self.cs.H.complex
        cur = self.basis.get((n, t))
        nxt = self.basis.get((n + 1, t))
        if cur is None:
            return Matrix(0, 0)
        pairs, kern = cur
        if nxt is None:
            return Matrix(0, len(kern))
        npairs, nkern = nxt
        npair_idx = {p: i for i, p in enumerate(npairs)}
        nk_cols = []
        for k in nkern:
            col: dict = {}
            for pj, v in k.items():
                col[pj] = v
            nk_cols.append(col)
        nmat = Matrix.from_columns(nk_cols, len(npairs))
        targets = []
        for k in kern:
            img: dict = {}
            for pj, c in k.items():
                la, lb = pairs[pj]
                u = la[1]
                for la2, v in cc.diff[u].column(la).items():
                    add_term(img, (la2, lb), f.mul(c, v), f)
                sgn = f.coerce((-1) ** u)
                for lb2, v in cc.diff[lb[1]].column(lb).items():
                    add_term(img, (la, lb2), f.mul(f.mul(c, sgn), v), f)
            tvec = {}
            for p, v in img.items():
                if p not in npair_idx:
                    if v:
                        raise AssertionError("differential left pair range")
                    continue
                tvec[npair_idx[p]] = v
            targets.append(tvec)
        sols = linalg.solve(nmat, targets, f)
        m = Matrix(len(nkern), len(kern))
        for j, sol in enumerate(sols):
            for i, v in sol.items():
                m.entries[(i, j)] = v
        return m

    def kuenneth_class(self, n, t, kvec) -> dict:
        """Class of a cotensor cycle in (pairs of homology classes)."""
        f = self.f
        H = self.cs.H
        vec = self._pair_vec(n, t, kvec)
        out: dict = {}
        groups: dict = {}
        for (la, lb), c in vec.items():
            groups.setdefault((la[1], la[2], lb), {})[la] = c
        for (u, ta, lb), avec in groups.items():
            ca = H.class_coords(u, ta, avec)
            if not ca:
                continue
            cb = H.class_coords(lb[1], lb[2], {lb: f.one})
            for hA, va in ca.items():
                for hB, vb in cb.items():
                    add_term(out, (hA, hB), f.mul(va, vb), f)
        return out


def homology_multiplication(cs: CircleStructure):
    """The multiplication on homology classes, as a GradedMap defined on
    the full pair space (a linear extension of the map on the cotensor
    of the homology with itself).

    Returns (mult, carrier_comodule, kuenneth_ok)."""
    f = cs.field
    H = cs.H
    carrier = cohh_carrier_comodule(cs)
    pair_space = tensor_space(H.classes, H.classes, cs.t_max)
    ct = CotensorComplex(cs)
    mult = GradedMap(pair_space, H.classes)
    kuenneth_ok = True

    # group homology-cotensor basis vectors per (n, t)
    cot = cotensor(carrier, carrier, cs.t_max)
    blocks: dict = {}
    for t, vecs in cot.basis.items():
        for vec in vecs:
            ns = {la[1] + lb[1] for (la, lb) in vec}
            if len(ns) != 1:
                # mixed filtration blocks cannot occur: coactions preserve s
                kuenneth_ok = False
                continue
            n = ns.pop()
            blocks.setdefault((n, t), []).append(vec)

    handled = set()
    for (n, t), vecs in sorted(blocks.items(), key=repr):
        if n > cs.s_max:
            continue
        reps = ct.reps.get((n, t), [])
        if len(reps) != len(vecs):
            kuenneth_ok = False
        # kuenneth matrix: columns are classes of the cotensor-complex reps
        pair_idx: dict = {}
        cols = []
        mu_classes = []
        for kvec in reps:
            kc = ct.kuenneth_class(n, t, kvec)
            col = {}
            for pr, v in kc.items():
                col[pair_idx.setdefault(pr, len(pair_idx))] = v
            cols.append(col)
            mu_classes.append(_mu_of_cycle(cs, ct, n, t, kvec))
        kmat = Matrix.from_columns(cols, len(pair_idx))
        targets = []
        for vec in vecs:
            tv = {}
            for pr, v in vec.items():
                if pr not in pair_idx:
                    pair_idx.setdefault(pr, len(pair_idx))
                    kmat.nrows = len(pair_idx)
                tv[pair_idx[pr]] = v
            targets.append(tv)
        try:
            sols = linalg.solve(kmat, targets, f)
        except linalg.NoSolution:
            kuenneth_ok = False
            continue
        # mu on each cotensor basis vector; collect as equations on the
        # pair space, then extend linearly
        block_pairs = sorted({pr for vec in vecs for pr in vec}, key=repr)
        bp_idx = {p: i for i, p in enumerate(block_pairs)}
        basis_cols = []
        values = []
        for vec, sol in zip(vecs, sols):
            basis_cols.append({bp_idx[p]: v for p, v in vec.items()})
            val: dict = {}
            for j, c in sol.items():
                for h, v in mu_classes[j].items():
                    add_term(val, h, f.mul(c, v), f)
            values.append(val)
        # complete to a basis of the block pair space; zero on complement
        ech_rows: list = []
        ech_piv: list = []
        for cvec in basis_cols:
            red = linalg.reduce_mod_span(cvec, ech_rows, ech_piv, f)
            piv = min(red)
            inv = f.inv(red[piv])
            ech_rows.append({j: f.mul(inv, v) for j, v in red.items()})
            ech_piv.append(piv)
        extra = []
        for j in range(len(block_pairs)):
            red = linalg.reduce_mod_span({j: f.one}, ech_rows, ech_piv, f)
            if red:
                piv = min(red)
                inv = f.inv(red[piv])
                ech_rows.append({jj: f.mul(inv, v) for jj, v in red.items()})
                ech_piv.append(piv)
                extra.append({j: f.one})
        full = Matrix.from_columns(basis_cols + extra, len(block_pairs))
        for pr in block_pairs:
            (sol,) = linalg.solve(full, [{bp_idx[pr]: f.one}], f)
            col: dict = {}
            for j, c in sol.items():
                if j < len(values):
                    for h, v in values[j].items():
                        add_term(col, h, f.mul(c, v), f)
            mult.set_column(pr, col)
        handled.add((n, t))

    for (n, t), d in ct.dims.items():
        if n <= cs.s_max and (n, t) not in handled and d:
            kuenneth_ok = False
    return mult, carrier, kuenneth_ok


def _mu_of_cycle(cs: CircleStructure, ct: CotensorComplex, n, t, kvec) -> dict:
    """Apply the concatenation-with-counit product to a cotensor cycle
    and project to homology."""
    f = cs.field
    cc = cs.H.complex
    D = cs.D
    vec = ct._pair_vec(n, t, kvec)
    total: dict = {}
    for (la, lb), c in vec.items():
        ea = cc.embed[la[1]].column(la)
        eb = cc.embed[lb[1]].column(lb)
        for wa, va in ea.items():
            for wb, vb in eb.items():
                e = D.counit_of(wb[0])
                if e:
                    add_term(total, wa + wb[1:],
                             f.mul(f.mul(c, e), f.mul(va, vb)), f)
    return cs.proj.project(n, t, total)


# ---------------------------------------------------------------------------
# carrier comodule and the full box structure


def cohh_carrier_comodule(cs: CircleStructure) -> Comodule:
    """The homology classes as a D-bicomodule via the basepoint slot."""
    f = cs.field
    H = cs.H
    D = cs.D
    basis = [(lbl, t) for lbl, t in H.classes.degree_of.items()]
    left = {}
    right = {}
    for lbl in H.classes.degree_of:
        _, s, t, _ = lbl
        z = H.rep_ambient(lbl)
        lcol: dict = {}
        rcol: dict = {}
        lgroups: dict = {}
        rgroups: dict = {}
        for word, c in z.items():
            for (d, w2), v in cochain_left_coaction(D, word).items():
                add_term(lgroups.setdefault(d, {}), w2, f.mul(c, v), f)
            for (w2, d), v in cochain_right_coaction(D, word).items():
                add_term(rgroups.setdefault(d, {}), w2, f.mul(c, v), f)
        for d, wvec in lgroups.items():
            for h, v in cs.proj.project(s, t - D.degree(d), wvec).items():
                add_term(lcol, (d, h), v, f)
        for d, wvec in rgroups.items():
            for h, v in cs.proj.project(s, t - D.degree(d), wvec).items():
                add_term(rcol, (h, d), v, f)
        left[lbl] = lcol
        right[lbl] = rcol
    return Comodule(D, basis, left, right, truncation=cs.t_max,
                    name=f"coHH({D.name})")


def cohh_box_structure(D: GradedCoalgebra, s_max: int, t_max: int,
                       with_mult=True, with_antipode=False):
    """Assemble the box-bialgebra structure on the circle homology.

    Returns (BoxStructure, CircleStructure, kuenneth_ok)."""
    cs = CircleStructure(D, s_max, t_max)
    f = cs.field
    H = cs.H

    pair_space = tensor_space(H.classes, H.classes, t_max)
    comult = GradedMap(H.classes, pair_space)
    for lbl in H.classes.degree_of:
        col = {pr: v for pr, v in cs.class_coproduct(lbl).items()
               if pr in pair_space.degree_of}
        comult.set_column(lbl, col)

    counit = GradedMap(H.classes, D.space)
    for lbl in H.classes.degree_of:
        _, s, t, _ = lbl
        col: dict = {}
        if s == 0:
            for word, c in H.rep_ambient(lbl).items():
                add_term(col, word[0], c, f)
        counit.set_column(lbl, col)

    unit = GradedMap(D.space, H.classes)
    for d in D.space.degree_of:
        t = D.degree(d)
        if t <= t_max:
            unit.set_column(d, cs.proj.project(0, t, {(d,): f.one}))

    mult = None
    carrier = None
    kuenneth_ok = True
    if with_mult:
        mult, carrier, kuenneth_ok = homology_multiplication(cs)
    else:
        carrier = cohh_carrier_comodule(cs)

    antipode = None
    if with_antipode:
        antipode = cohh_antipode(cs)

    box = BoxStructure(D, carrier, comult=comult, counit=counit, unit=unit,
                       mult=mult, antipode=antipode,
                       name=f"coHH({D.name})")
    return box, cs, kuenneth_ok


def cohh_antipode(cs: CircleStructure) -> GradedMap:
    """Antipode transported through the double-edge model: invert the
    collapse-induced iso, apply the flip, come back."""
    D = cs.D
    f = cs.field
    H = cs.H
    Hd = cohh(D, cs.s_max, cs.t_max, shape=double_edge_circle())
    pi = induced_homology_map(D, collapse_double_edge(), H, Hd)
    flip = induced_homology_map(D, flip_double_edge(), Hd, Hd)
    out = GradedMap(H.classes, H.classes)
    for (s, t) in sorted(set((lbl[1], lbl[2])
                             for lbl in H.classes.degree_of)):
        src = [("h", s, t, k) for k in range(H.dim(s, t))]
        dcls = [("h", s, t, k) for k in range(Hd.dim(s, t))]
        didx = {l: i for i, l in enumerate(dcls)}
        pim = Matrix.from_columns(
            [{didx[l]: v for l, v in pi.column(lbl).items()} for lbl in src],
            len(dcls))
        for lbl in src:
            img = flip.apply(pi.column(lbl), f)
            (sol,) = linalg.solve(
                pim, [{didx[l]: v for l, v in img.items()}], f)
            out.set_column(lbl, {src[j]: v for j, v in sol.items()})
    return out
