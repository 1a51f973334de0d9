"""Bounded complexes of projectives, chain maps up to homotopy, the
two-term tilting complexes of a vertex set, and endomorphism algebras.

A complex stores, per degree, a list of summand vertices (P_v) and a
differential matrix into the next degree with entries in the algebra
(normal-form path combinations; the entry for column P_a, row P_b lies in
e_b A e_a and acts by left multiplication).  Chain maps and homotopies are
solved exactly over the slice bases, and classes modulo homotopy get
canonical representatives by echelon reduction against the null-homotopic
subspace, which makes structure constants deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import FDAlgebra
from .errors import ApproximationZero, NotSurjective
from .linalg import SparseEchelon, nullspace, solve
from .quiver import PathCombination, Path, QuiverPresentation, Quiver, enumerate_paths


@dataclass
class ProjComplex:
    """Bounded complex of projective right modules P_v."""

    alg: FDAlgebra
    terms: dict[int, list[str]]             # degree -> summand vertices
    diff: dict[int, list[list[PathCombination]]]  # degree d -> matrix d -> d+1
    label: str = ""

    def degrees(self):
        return sorted(self.terms)

    def summands(self, d: int) -> list[str]:
        return self.terms.get(d, [])

    def differential(self, d: int):
        return self.diff.get(d)

    def shift(self, i: int) -> "ProjComplex":
        """X[i]^p = X^{i+p}; differentials pick up the sign (-1)^i."""
        terms = {p - i: list(vs) for p, vs in self.terms.items()}
        sign = self.alg.field.one if i % 2 == 0 else -self.alg.field.one
        diff = {p - i: [[x.scale(sign) for x in row] for row in m]
                for p, m in self.diff.items()}
        return ProjComplex(self.alg, terms, diff, label=f"{self.label}[{i}]")

    def check(self):
        alg = self.alg
        for d in self.degrees():
            m = self.diff.get(d)
            if m is None:
                assert d + 1 not in self.terms or not self.terms[d + 1] \
                    or not self.terms[d], f"missing differential at {d}"
                continue
            assert len(m) == len(self.terms.get(d + 1, []))
            for row in m:
                assert len(row) == len(self.terms[d])
            n = self.diff.get(d + 1)
            if n is None:
                continue
            for i in range(len(self.terms.get(d + 2, []))):
                for j in range(len(self.terms[d])):
                    acc = PathCombination.zero(alg.field)
                    for k in range(len(self.terms[d + 1])):
                        acc = acc + alg.mul(n[i][k], m[k][j])
                    assert acc.is_zero(), "differential does not square to zero"

    def is_radical(self) -> bool:
        """No entry has a trivial-path (unit) coefficient."""
        for m in self.diff.values():
            for row in m:
                for x in row:
                    if any(p.is_trivial for p in x.terms):
                        return False
        return True


def stalk(alg: FDAlgebra, v: str, degree: int = 0, label: str = "") -> ProjComplex:
    return ProjComplex(alg, {degree: [v]}, {}, label=label or v)


# ---------------------------------------------------------------------------
# chain maps modulo homotopy


@dataclass
class _HomLayout:
    """Coordinate layout for maps C -> D of a fixed degree shift 0:
    entries (degree p, row i, col j) over slice bases."""

    entries: list   # (p, i, j, src_vertex, tgt_vertex, slice paths, offset)
    total: int


def _layout(alg, C: ProjComplex, D: ProjComplex) -> _HomLayout:
    entries = []
    off = 0
    for p in sorted(set(C.terms) & set(D.terms)):
        for i, b in enumerate(D.terms[p]):
            for j, a in enumerate(C.terms[p]):
                sl = alg.slice_basis(a, b)
                if sl:
                    entries.append((p, i, j, a, b, sl, off))
                    off += len(sl)
    return _HomLayout(entries, off)


def _materialize(alg, C, D, layout: _HomLayout, vec):
    comp = {}
    for p in sorted(set(C.terms) & set(D.terms)):
        comp[p] = [[PathCombination.zero(alg.field) for _ in C.terms[p]]
                   for _ in D.terms[p]]
    for (p, i, j, a, b, sl, off) in layout.entries:
        terms = {}
        for k, path in enumerate(sl):
            c = vec.get(off + k) if isinstance(vec, dict) else vec[off + k]
            if c:
                terms[path] = c
        comp[p][i][j] = PathCombination(alg.field, terms)
    return comp


def _vectorize_components(alg, C, D, layout: _HomLayout, comp):
    vec = [alg.field.zero] * layout.total
    for (p, i, j, a, b, sl, off) in layout.entries:
        x = comp.get(p)
        if x is None:
            continue
        entry = x[i][j]
        for k, path in enumerate(sl):
            vec[off + k] = entry.terms.get(path, alg.field.zero)
    return vec


def chain_map_space(C: ProjComplex, D: ProjComplex):
    """(layout, basis vectors) of chain maps C -> D (no homotopy quotient)."""
    alg = C.alg
    field = alg.field
    layout = _layout(alg, C, D)
    if layout.total == 0:
        return layout, []
    index = {(p, i, j): (sl, off) for (p, i, j, a, b, sl, off) in layout.entries}
    rows = []
    degs = sorted(set(C.terms) | set(D.terms))
    for p in degs:
        cm = C.diff.get(p)
        dm = D.diff.get(p)
        nrow = len(D.terms.get(p + 1, []))
        ncol = len(C.terms.get(p, []))
        if nrow == 0 or ncol == 0:
            continue
        for i in range(nrow):
            b = D.terms[p + 1][i]
            for j in range(ncol):
                a = C.terms[p][j]
                # constraint in e_b A e_a: sum_k dm[i][k] f_p[k][j]
                #                        - sum_l f_{p+1}[i][l] cm[l][j] = 0
                sl_out = alg.slice_basis(a, b)
                if not sl_out:
                    continue
                out_index = {q: t for t, q in enumerate(sl_out)}
                coeffs = [[field.zero] * layout.total for _ in sl_out]
                if dm is not None and p in D.terms:
                    for k in range(len(D.terms[p])):
                        x = dm[i][k]
                        if x.is_zero():
                            continue
                        key = index.get((p, k, j))
                        if key is None:
                            continue
                        sl, off = key
                        for t, q in enumerate(sl):
                            prod = alg.mul(x, PathCombination.from_path(field, q))
                            for w, c in prod.terms.items():
                                coeffs[out_index[w]][off + t] = \
                                    coeffs[out_index[w]][off + t] + c
                if cm is not None and p + 1 in D.terms:
                    for l in range(len(C.terms[p + 1])):
                        y = cm[l][j]
                        if y.is_zero():
                            continue
                        key = index.get((p + 1, i, l))
                        if key is None:
                            continue
                        sl, off = key
                        for t, q in enumerate(sl):
                            prod = alg.mul(PathCombination.from_path(field, q), y)
                            for w, c in prod.terms.items():
                                coeffs[out_index[w]][off + t] = \
                                    coeffs[out_index[w]][off + t] - c
                rows.extend(r for r in coeffs if any(r))
    basis = nullspace(field, rows, ncols=layout.total)
    return layout, basis


def homotopy_span(C: ProjComplex, D: ProjComplex, layout: _HomLayout):
    """Spanning vectors of {dh + hd} inside the chain-map coordinates."""
    alg = C.alg
    field = alg.field
    span = []
    degs = sorted(set(C.terms) | set(D.terms))
    for p in degs:
        # h_p: C^p -> D^{p-1}
        for i, b in enumerate(D.terms.get(p - 1, [])):
            for j, a in enumerate(C.terms.get(p, [])):
                for path in alg.slice_basis(a, b):
                    h_entry = PathCombination.from_path(field, path)
                    comp = {}
                    dm = D.diff.get(p - 1)
                    if dm is not None and p in D.terms:
                        block = [[PathCombination.zero(field) for _ in C.terms[p]]
                                 for _ in D.terms[p]]
                        for r in range(len(D.terms[p])):
                            x = dm[r][i]
                            if not x.is_zero():
                                block[r][j] = alg.mul(x, h_entry)
                        comp[p] = block
                    cm = C.diff.get(p - 1)
                    if cm is not None and (p - 1) in D.terms and (p - 1) in C.terms:
                        block = comp.get(p - 1)
                        if block is None:
                            block = [[PathCombination.zero(field) for _ in C.terms[p - 1]]
                                     for _ in D.terms[p - 1]]
                        for cidx in range(len(C.terms[p - 1])):
                            y = cm[j][cidx]
                            if not y.is_zero():
                                block[i][cidx] = block[i][cidx] + alg.mul(h_entry, y)
                        comp[p - 1] = block
                    vec = _vectorize_components(alg, C, D, layout, comp)
                    if any(vec):
                        span.append(vec)
    return span


@dataclass
class HomotopyHom:
    """Hom_{K(A)}(C, D): canonical class representatives modulo homotopy."""

    C: ProjComplex
    D: ProjComplex
    layout: _HomLayout
    classes: list           # canonical vectors (dicts idx -> coeff)
    _ech: SparseEchelon = None     # homotopy-subspace echelon
    _class_ech: object = None      # tracked echelon for coordinates

    @property
    def dim(self):
        return len(self.classes)

    def components(self, k: int):
        return _materialize(self.C.alg, self.C, self.D, self.layout, self.classes[k])

    def reduce_vector(self, vec) -> dict:
        v = {i: c for i, c in enumerate(vec) if c} if isinstance(vec, list) else dict(vec)
        return self._ech.reduce(v)

    def coordinates(self, vec) -> list:
        """Coordinates of a chain-map vector over the class basis."""
        res = self.reduce_vector(vec)
        residue, expr = self._class_ech.reduce(res)
        assert not residue, "vector is not in the chain-map span"
        field = self.C.alg.field
        return [expr.get(k, field.zero) for k in range(len(self.classes))]


def hom_homotopy(C: ProjComplex, D: ProjComplex) -> HomotopyHom:
    from .algebra import _TrackedEchelon

    alg = C.alg
    field = alg.field
    layout, zbasis = chain_map_space(C, D)
    ech = SparseEchelon(field, lambda i: i)
    for vec in homotopy_span(C, D, layout):
        ech.add({i: c for i, c in enumerate(vec) if c})
    classes = []
    class_ech = _TrackedEchelon(field, lambda i: i)
    for vec in zbasis:
        res = ech.reduce({i: c for i, c in enumerate(vec) if c})
        if not res:
            continue
        if class_ech.add(res, len(classes)):
            classes.append(res)
    return HomotopyHom(C, D, layout, classes, _ech=ech, _class_ech=class_ech)


# ---------------------------------------------------------------------------
# tilting complexes


def minimal_projective_left_approximation(alg: FDAlgebra, u: str, targets: list[str]):
    """Minimal left add({P_v : v in targets})-approximation of P_u, in
    algebra coordinates: a list of (target vertex, element of e_v A e_u).
    For an admissible presentation this is the arrow map when u has no
    loops and targets excludes u."""
    field = alg.field
    comps = [(v, PathCombination.from_path(field, p))
             for v in targets for p in alg.slice_basis(u, v)]

    def factors(kept, v, x):
        # x in span{ y . comp : comp kept with target w, y in e_v A e_w }
        cands = []
        for (w, cx) in kept:
            for y in alg.slice_basis(w, v):
                cands.append(alg.mul(PathCombination.from_path(field, y), cx))
        sl = alg.slice_basis(u, v)
        idx = {p: i for i, p in enumerate(sl)}
        tv = [field.zero] * len(sl)
        for p, c in x.terms.items():
            tv[idx[p]] = c
        mat = [[field.zero] * len(cands) for _ in sl]
        for cidx, cand in enumerate(cands):
            for p, c in cand.terms.items():
                mat[idx[p]][cidx] = c
        if not any(tv):
            return True
        if not cands:
            return False
        return solve(field, mat, tv) is not None

    changed = True
    while changed:
        changed = False
        for k in range(len(comps)):
            trial = comps[:k] + comps[k + 1:]
            v, x = comps[k]
            if factors(trial, v, x):
                comps = trial
                changed = True
                break
    return comps


def minimal_projective_right_approximation(alg: FDAlgebra, u: str, sources: list[str]):
    """Minimal right add({P_v})-approximation of P_u: list of
    (source vertex, element of e_u A e_v), the rows of the map into P_u."""
    field = alg.field
    comps = [(v, PathCombination.from_path(field, p))
             for v in sources for p in alg.slice_basis(v, u)]

    def factors(kept, v, x):
        cands = []
        for (w, cx) in kept:
            for y in alg.slice_basis(v, w):
                cands.append(alg.mul(cx, PathCombination.from_path(field, y)))
        sl = alg.slice_basis(v, u)
        idx = {p: i for i, p in enumerate(sl)}
        tv = [field.zero] * len(sl)
        for p, c in x.terms.items():
            tv[idx[p]] = c
        mat = [[field.zero] * len(cands) for _ in sl]
        for cidx, cand in enumerate(cands):
            for p, c in cand.terms.items():
                mat[idx[p]][cidx] = c
        if not any(tv):
            return True
        if not cands:
            return False
        return solve(field, mat, tv) is not None

    changed = True
    while changed:
        changed = False
        for k in range(len(comps)):
            trial = comps[:k] + comps[k + 1:]
            v, x = comps[k]
            if factors(trial, v, x):
                comps = trial
                changed = True
                break
    return comps


def build_tilt_left(alg: FDAlgebra, U: set) -> list[ProjComplex]:
    """T_U = [P_U -> L_U] + Q_U[-1], one summand per vertex, in declaration
    order; Q-summands sit in degree 1."""
    verts = alg.quiver.vertices
    U = set(U)
    if not U or U == set(verts):
        raise ValueError("U must be a nonempty proper subset of the vertices")
    targets = [v for v in verts if v not in U]
    out = []
    for v in verts:
        if v in U:
            comps = minimal_projective_left_approximation(alg, v, targets)
            if not comps:
                raise ApproximationZero(
                    f"left add(Q)-approximation of P_{v} is zero")
            terms = {0: [v], 1: [w for w, _ in comps]}
            diff = {0: [[x] for _, x in comps]}
            out.append(ProjComplex(alg, terms, diff, label=v))
        else:
            out.append(stalk(alg, v, degree=1, label=v))
    return out


def build_tilt_right(alg: FDAlgebra, U: set) -> list[ProjComplex]:
    """_U T = [R_U -> P_U] + Q_U[1]; Q-summands sit in degree -1."""
    verts = alg.quiver.vertices
    U = set(U)
    if not U or U == set(verts):
        raise ValueError("U must be a nonempty proper subset of the vertices")
    sources = [v for v in verts if v not in U]
    out = []
    for v in verts:
        if v in U:
            comps = minimal_projective_right_approximation(alg, v, sources)
            if not comps:
                raise ApproximationZero(
                    f"right add(Q)-approximation of P_{v} is zero")
            terms = {-1: [w for w, _ in comps], 0: [v]}
            diff = {-1: [[x for _, x in comps]]}
            out.append(ProjComplex(alg, terms, diff, label=v))
        else:
            out.append(stalk(alg, v, degree=-1, label=v))
    return out


# ---------------------------------------------------------------------------
# endomorphism algebras


class EndAlgebra:
    """End_{K(A)}(T) for T a direct sum of complexes, with structure
    constants over the canonical homotopy-class basis."""

    def __init__(self, summands: list[ProjComplex], labels: list[str] | None = None):
        assert summands
        self.alg = summands[0].alg
        self.field = self.alg.field
        self.summands = summands
        self.labels = labels or [c.label or str(k) for k, c in enumerate(summands)]
        self.homs: dict[tuple[int, int], HomotopyHom] = {}
        for i in range(len(summands)):
            for j in range(len(summands)):
                self.homs[(i, j)] = hom_homotopy(summands[i], summands[j])
        self.basis: list[tuple[int, int, int]] = []   # (i, j, class index)
        self.basis_offset: dict[tuple[int, int], int] = {}
        for (i, j), H in sorted(self.homs.items()):
            self.basis_offset[(i, j)] = len(self.basis)
            for k in range(H.dim):
                self.basis.append((i, j, k))
        self.dim = len(self.basis)
        self._mul_cache: dict[tuple[int, int], dict[int, object]] = {}
        self._idempotents = None

    def slice_indices(self, i: int, j: int) -> list[int]:
        """Basis indices of Hom(T_i, T_j) = e_j B e_i."""
        off = self.basis_offset[(i, j)]
        return list(range(off, off + self.homs[(i, j)].dim))

    def element_from_chain_vector(self, i: int, j: int, vec) -> dict[int, object]:
        """B-coefficient vector (sparse dict) of a chain map T_i -> T_j."""
        H = self.homs[(i, j)]
        coords = H.coordinates(vec)
        off = self.basis_offset[(i, j)]
        return {off + k: c for k, c in enumerate(coords) if c}

    def idempotent(self, i: int) -> dict[int, object]:
        H = self.homs[(i, i)]
        C = self.summands[i]
        comp = {}
        for p in C.degrees():
            n = len(C.terms[p])
            comp[p] = [[self.alg.e(C.terms[p][r]) if r == c
                        else PathCombination.zero(self.field)
                        for c in range(n)] for r in range(n)]
        vec = _vectorize_components(self.alg, C, C, H.layout, comp)
        return self.element_from_chain_vector(i, i, vec)

    def idempotents(self) -> list[dict[int, object]]:
        if self._idempotents is None:
            self._idempotents = [self.idempotent(i) for i in range(len(self.summands))]
        return self._idempotents

    def _basis_product(self, x_idx: int, y_idx: int) -> dict[int, object]:
        """Product (composition) basis[x] o basis[y]; zero unless
        target(y) == source(x)."""
        key = (x_idx, y_idx)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        (i1, j1, k1) = self.basis[x_idx]
        (i2, j2, k2) = self.basis[y_idx]
        if j2 != i1:
            self._mul_cache[key] = {}
            return {}
        f = self.homs[(i1, j1)].components(k1)
        g = self.homs[(i2, j2)].components(k2)
        C, D = self.summands[i2], self.summands[j1]
        mid = self.summands[j2]
        comp = {}
        for p in sorted(set(C.terms) & set(D.terms)):
            if p not in mid.terms:
                continue
            block = [[PathCombination.zero(self.field) for _ in C.terms[p]]
                     for _ in D.terms[p]]
            for r in range(len(D.terms[p])):
                for c in range(len(C.terms[p])):
                    acc = PathCombination.zero(self.field)
                    for m in range(len(mid.terms[p])):
                        acc = acc + self.alg.mul(f[p][r][m], g[p][m][c])
                    block[r][c] = acc
            comp[p] = block
        H = self.homs[(i2, j1)]
        vec = _vectorize_components(self.alg, C, D, H.layout, comp)
        out = self.element_from_chain_vector(i2, j1, vec)
        self._mul_cache[key] = out
        return out

    def product(self, x: dict[int, object], y: dict[int, object]) -> dict[int, object]:
        out: dict[int, object] = {}
        for xi, cx in x.items():
            for yi, cy in y.items():
                for zi, cz in self._basis_product(xi, yi).items():
                    nv = out.get(zi, self.field.zero) + cx * cy * cz
                    if nv:
                        out[zi] = nv
                    else:
                        out.pop(zi, None)
        return out

    def check_associativity(self) -> bool:
        n = self.dim
        for a in range(n):
            ea = {a: self.field.one}
            for b in range(n):
                eb = {b: self.field.one}
                ab = self.product(ea, eb)
                for c in range(n):
                    ec = {c: self.field.one}
                    left = self.product(ab, ec)
                    right = self.product(ea, self.product(eb, ec))
                    if left != right:
                        return False
        return True


# ---------------------------------------------------------------------------
# presentation extraction (ker Phi)


@dataclass
class ArrowImage:
    label: str
    source: str          # vertex label in the new quiver = summand label
    target: str
    element: dict        # B-coefficient vector


def presentation_from_surjection(end: EndAlgebra, arrow_images: list[ArrowImage],
                                 field=None) -> tuple[QuiverPresentation, dict]:
    """Quiver presentation of B = End(T) from labeled generators of its
    radical: relations are minimal generators of ker(Phi), computed degree
    by degree up to the length at which all images of paths vanish.

    Returns (presentation, info) with info carrying the Loewy length and
    the image-span dimension; raises NotSurjective when the images plus
    idempotents fail to span B."""
    alg = end.alg
    field = field or end.field
    labels = end.labels
    quiver = Quiver(list(labels),
                    [(a.label, a.source, a.target) for a in arrow_images])
    arrow_elem = {i: a.element for i, a in enumerate(arrow_images)}

    span = SparseEchelon(field, lambda i: i)
    for e in end.idempotents():
        span.add(dict(e))

    # Phi on paths, by increasing length
    images: dict[Path, dict] = {}
    for v in quiver.vertices:
        images[quiver.trivial(v)] = end.idempotents()[labels.index(v)]
    level = [quiver.trivial(v) for v in quiver.vertices]
    loewy = None
    length = 0
    while True:
        length += 1
        nxt = []
        all_zero = True
        for a in quiver.arrows:
            for w in level:
                if a.source != w.target:
                    continue
                p = Path(w.source, a.target, (a.index,) + w.arrows)
                img = end.product(arrow_elem[a.index], images[w])
                images[p] = img
                nxt.append(p)
                if img:
                    all_zero = False
                    span.add(dict(img))
        if not nxt or all_zero:
            loewy = length
            break
        level = [p for p in nxt if images[p]]
        if length > end.dim + 2:
            raise NotSurjective("image iteration failed to nilpotize")
    if span.dim != end.dim:
        raise NotSurjective(
            f"arrow images span {span.dim} of {end.dim} dimensions")

    key = quiver.path_key
    gens: list[PathCombination] = []
    slices: dict[tuple[str, str], list[Path]] = {}
    for p in images:
        if len(p) >= 1:
            slices.setdefault((p.source, p.target), []).append(p)
    for sl in slices.values():
        sl.sort(key=key)

    def ideal_echelons(limit: int) -> dict[tuple[str, str], SparseEchelon]:
        out = {}
        for g in gens:
            ends = g.endpoints()
            if ends is None:
                continue
            gs, gt = ends
            gmax = g.max_len()
            for u in enumerate_paths(quiver, limit, source=gt):
                for w in enumerate_paths(quiver, limit - len(u), target=gs):
                    # exact ideal elements only; no truncation
                    if len(u) + len(w) + gmax > limit:
                        continue
                    prod = PathCombination.from_path(field, u) * g * \
                        PathCombination.from_path(field, w)
                    if prod.is_zero():
                        continue
                    ends2 = prod.endpoints()
                    ech = out.setdefault((ends2[0], ends2[1]),
                                         SparseEchelon(field, key))
                    ech.add(dict(prod.terms))
        return out

    for d in range(1, loewy + 1):
        ech_by_slice = ideal_echelons(d)
        for (s0, t0), paths in sorted(slices.items(),
                                      key=lambda kv: (quiver.vertex_index[kv[0][0]],
                                                      quiver.vertex_index[kv[0][1]])):
            sub = [p for p in paths if len(p) <= d]
            if not sub:
                continue
            # kernel of Phi on span(sub)
            rows_index: dict[int, int] = {}
            rows: list[list] = []
            for col, p in enumerate(sub):
                for bi, c in images[p].items():
                    if bi not in rows_index:
                        rows_index[bi] = len(rows)
                        rows.append([field.zero] * len(sub))
                    rows[rows_index[bi]][col] = c
            kern = nullspace(field, rows, ncols=len(sub))
            ech = ech_by_slice.get((s0, t0), SparseEchelon(field, key))
            ech_by_slice[(s0, t0)] = ech
            for vec in kern:
                combo = {sub[i]: c for i, c in enumerate(vec) if c}
                res = ech.add(combo)
                if res is not None:
                    gens.append(PathCombination(field, res))
    pres = QuiverPresentation(quiver, field, gens)
    info = {"loewy": loewy, "span": span.dim, "dim": end.dim}
    return pres, info
