"""The finite-dimensional algebra A = kQ/I: normal forms, bases, socles,
and the quotient-slice bases that feed the mutation rules.

Normal forms come from a degree-capped noncommutative completion under the
length-then-lex order (length first, ties by arrow declaration indices).
For an admissible ideal of a finite-dimensional quotient the completion
stabilizes: there is a least M with every path of length M reducing to 0,
and we verify local confluence for all overlap words of length <= D = M+2.
All quotient-slice computations happen inside truncations kQ/J^(T+1) with
T chosen so that J^(T+1) is contained in the denominator at hand; this
leaves the quotient unchanged (factor one or two arrows off a path of
length >= M to land in IJ, JI, or their junction-avoiding variants).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import NotAdmissible, NotFiniteDimensional, TermTooLong, UnknownSpec
from .linalg import SparseEchelon
from .quiver import (Path, PathCombination, QuiverPresentation, enumerate_paths)

DEFAULT_DEGREE_CAP = 64


class _Rules:
    """A rewriting system: monic leading paths and their lower tails."""

    def __init__(self, quiver, field):
        self.quiver = quiver
        self.field = field
        self.key = quiver.path_key
        self.by_lead: dict[Path, PathCombination] = {}
        # index leads by first word entry for factor search
        self._index: dict[int, list[Path]] = {}

    def add(self, lead: Path, tail: PathCombination):
        self.by_lead[lead] = tail
        self._index.setdefault(lead.arrows[0], []).append(lead)

    def remove(self, lead: Path):
        del self.by_lead[lead]
        self._index[lead.arrows[0]].remove(lead)

    def find_factor(self, word: tuple[int, ...]):
        """Leftmost-shortest rule lead occurring as a factor of word."""
        best = None
        for pos in range(len(word)):
            for lead in self._index.get(word[pos], ()):
                k = len(lead.arrows)
                if pos + k <= len(word) and word[pos:pos + k] == lead.arrows:
                    if best is None or k < best[2]:
                        best = (pos, lead, k)
            if best is not None:
                return best[0], best[1]
        return None

    def reduce(self, combo: PathCombination) -> PathCombination:
        field = self.field
        out: dict[Path, object] = {}
        work = dict(combo.terms)
        while work:
            p = max(work, key=self.key)
            c = work.pop(p)
            hit = self.find_factor(p.arrows) if p.arrows else None
            if hit is None:
                nc = out.get(p, field.zero) + c
                if nc:
                    out[p] = nc
                else:
                    out.pop(p, None)
                continue
            pos, lead = hit
            k = len(lead.arrows)
            left, right = p.arrows[:pos], p.arrows[pos + k:]
            tail = self.by_lead[lead]
            for t, ct in tail.terms.items():
                word = left + t.arrows + right
                if word:
                    q = self.quiver.path_from_indices(word)
                else:
                    q = self.quiver.trivial(p.source)
                nc = work.get(q, field.zero) + c * ct
                if nc:
                    work[q] = nc
                else:
                    work.pop(q, None)
        return PathCombination(field, out)


def _orient(field, key, combo: PathCombination):
    lead = max(combo.terms, key=key)
    c = combo.terms[lead]
    tail_terms = {p: -(x / c) for p, x in combo.terms.items() if p != lead}
    return lead, PathCombination(field, tail_terms)


def _overlaps(w1: tuple, w2: tuple):
    """Proper overlaps: suffix of w1 of length k equals prefix of w2."""
    top = min(len(w1), len(w2))
    for k in range(1, top):
        if w1[-k:] == w2[:k]:
            yield k


@dataclass
class NormalFormTable:
    presentation: QuiverPresentation
    rules: _Rules
    nilpotency: int          # least M with every length-M path reducing to 0
    truncation: int          # D = M + 2

    def normal_form(self, x: PathCombination) -> PathCombination:
        if x.max_len() > self.truncation:
            raise TermTooLong(
                f"term of length {x.max_len()} exceeds truncation degree {self.truncation}")
        return self.rules.reduce(x)


def build_table(pres: QuiverPresentation, degree_cap: int | None = None) -> NormalFormTable:
    """Complete the relations into a confluent rewriting system and detect
    the nilpotency degree M.  Raises NotAdmissible / NotFiniteDimensional."""
    cap = degree_cap or DEFAULT_DEGREE_CAP
    field = pres.field
    quiver = pres.quiver
    key = quiver.path_key
    for r in pres.relations:
        if r.is_zero():
            continue
        if r.min_len() < 2:
            raise NotAdmissible("a relation has a term of length < 2")

    rules = _Rules(quiver, field)
    pending = [r for r in pres.relations if not r.is_zero()]
    max_rel_len = max((r.max_len() for r in pres.relations), default=2)
    working = min(cap + 2, max(6, max_rel_len + 2))
    examined: set = set()

    def process_pending():
        while pending:
            x = rules.reduce(pending.pop())
            if x.is_zero():
                continue
            lead, tail = _orient(field, key, x)
            # existing rules whose lead contains the new lead get reprocessed
            stale = []
            k = len(lead.arrows)
            for old in list(rules.by_lead):
                ow = old.arrows
                if old != lead and any(ow[i:i + k] == lead.arrows
                                       for i in range(len(ow) - k + 1)):
                    stale.append(old)
            for old in stale:
                tail_old = rules.by_lead[old]
                rules.remove(old)
                pending.append(PathCombination.from_path(field, old) - tail_old)
                examined.clear()
            rules.add(lead, tail)

    def complete(limit: int) -> None:
        process_pending()
        done = False
        while not done:
            done = True
            leads = list(rules.by_lead)
            for l1 in leads:
                if l1 not in rules.by_lead:
                    continue
                for l2 in leads:
                    if l2 not in rules.by_lead or l1 not in rules.by_lead:
                        continue
                    for k in _overlaps(l1.arrows, l2.arrows):
                        total = len(l1.arrows) + len(l2.arrows) - k
                        if total > limit:
                            continue
                        sig = (l1, l2, k)
                        if sig in examined:
                            continue
                        examined.add(sig)
                        rest = l2.arrows[k:]
                        head = l1.arrows[:len(l1.arrows) - k]
                        t1 = rules.by_lead[l1]
                        t2 = rules.by_lead[l2]
                        # W = head + l2 = l1 + rest; rewrite both ways
                        a = _concat_combo(quiver, field, (), t1, rest)
                        b = _concat_combo(quiver, field, head, t2, ())
                        s = rules.reduce(a - b)
                        if not s.is_zero():
                            pending.append(s)
                            process_pending()
                            done = False
            if pending:
                process_pending()
                done = False

    def scan_nilpotency(limit: int) -> int | None:
        for length in range(2, limit + 1):
            level = [p for p in enumerate_paths(quiver, length) if len(p) == length]
            if not level:
                return length  # no paths at all of this length
            if all(rules.reduce(PathCombination.from_path(field, p)).is_zero()
                   for p in level):
                return length
        return None

    while True:
        complete(working)
        # rules are now locally confluent for overlap words up to `working`,
        # so normal forms are unique on spans of paths of length <= working;
        # accepting M <= working - 2 keeps D = M + 2 inside that range
        m = scan_nilpotency(working - 2)
        if m is not None:
            return NormalFormTable(pres, rules, m, m + 2)
        if working >= cap + 2:
            raise NotFiniteDimensional(
                f"no nilpotency degree found up to cap {cap}")
        working = min(cap + 2, working * 2)


def _concat_combo(quiver, field, left: tuple, combo: PathCombination, right: tuple):
    out: dict[Path, object] = {}
    for t, c in combo.terms.items():
        word = left + t.arrows + right
        p = quiver.path_from_indices(word) if word else t
        out[p] = out.get(p, field.zero) + c
    return PathCombination(field, {p: c for p, c in out.items() if c})


class FDAlgebra:
    """A = kQ/I with a fixed normal-form basis and cached multiplication."""

    def __init__(self, table: NormalFormTable):
        self.table = table
        self.presentation = table.presentation
        self.quiver = table.presentation.quiver
        self.field = table.presentation.field
        self.M = table.nilpotency
        self.D = table.truncation
        basis = []
        for p in enumerate_paths(self.quiver, max(self.M - 1, 0)):
            if table.rules.find_factor(p.arrows) is None:
                basis.append(p)
        basis.sort(key=self.quiver.path_key)
        self.basis: list[Path] = basis
        self.index: dict[Path, int] = {p: i for i, p in enumerate(basis)}
        self.dim = len(basis)
        self.slices: dict[tuple[str, str], list[Path]] = {}
        for p in basis:
            self.slices.setdefault((p.source, p.target), []).append(p)
        self._mul_cache: dict[tuple[Path, Path], PathCombination] = {}
        self._opposite = None

    def nf(self, x: PathCombination) -> PathCombination:
        # terms longer than D lie in J^M and reduce to zero, so the caller
        # side of the TermTooLong contract pre-truncates here
        if x.max_len() > self.D:
            x = PathCombination(self.field,
                                {p: c for p, c in x.terms.items() if len(p) <= self.D})
        return self.table.normal_form(x)

    def in_ideal(self, x: PathCombination) -> bool:
        return self.nf(x).is_zero()

    def e(self, v: str) -> PathCombination:
        return PathCombination.from_path(self.field, self.quiver.trivial(v))

    def one(self) -> PathCombination:
        out = PathCombination.zero(self.field)
        for v in self.quiver.vertices:
            out = out + self.e(v)
        return out

    def slice_basis(self, src: str, tgt: str) -> list[Path]:
        """Normal-form paths from src to tgt, canonical order."""
        return list(self.slices.get((src, tgt), []))

    def mul_paths(self, p: Path, q: Path) -> PathCombination:
        """nf(p o q) for normal-form paths p, q (q applied first)."""
        hit = self._mul_cache.get((p, q))
        if hit is not None:
            return hit
        if p.source != q.target:
            out = PathCombination.zero(self.field)
        else:
            word = p.arrows + q.arrows
            if len(word) > self.D:
                out = PathCombination.zero(self.field)  # J^M = 0
            else:
                pc = self.quiver.path_from_indices(word) if word else self.quiver.trivial(p.source)
                out = self.nf(PathCombination.from_path(self.field, pc))
        self._mul_cache[(p, q)] = out
        return out

    def mul(self, x: PathCombination, y: PathCombination) -> PathCombination:
        out = PathCombination.zero(self.field)
        for p, cp in x.terms.items():
            for q, cq in y.terms.items():
                out = out + self.mul_paths(p, q).scale(cp * cq)
        return out

    def cartan_matrix(self) -> list[list[int]]:
        """Entry (i, j) = dim e_i A e_j = #normal-form paths j -> i."""
        vs = self.quiver.vertices
        return [[len(self.slices.get((j, i), [])) for j in vs] for i in vs]

    def loewy_length(self) -> int:
        return self.M

    def opposite(self) -> "FDAlgebra":
        """The opposite algebra, with the same arrow labels reversed."""
        if self._opposite is None:
            opp_pres = self.presentation.opposite()
            self._opposite = FDAlgebra(build_table(opp_pres))
            self._opposite._opposite = self
        return self._opposite

    def is_weakly_symmetric(self) -> bool:
        if not hasattr(self, "_weakly_symmetric"):
            ok = True
            for v in self.quiver.vertices:
                soc = socle_of_projective(self, v)
                if len(soc) != 1 or soc[0][0] != v:
                    ok = False
                    break
            self._weakly_symmetric = ok
        return self._weakly_symmetric


@dataclass
class ValidationReport:
    admissible: bool
    finite_dimensional: bool
    weakly_symmetric: bool
    loops: dict[str, int]
    socle_types: dict[str, str | None]
    dim: int | None = None
    message: str = ""

    def ok(self) -> bool:
        return self.admissible and self.finite_dimensional and self.weakly_symmetric


def validate(pres: QuiverPresentation, degree_cap: int | None = None) -> ValidationReport:
    loops = {v: len(pres.quiver.loops(v)) for v in pres.quiver.vertices}
    try:
        table = build_table(pres, degree_cap)
    except NotAdmissible as e:
        return ValidationReport(False, False, False, loops, {}, message=str(e))
    except NotFiniteDimensional as e:
        return ValidationReport(True, False, False, loops, {}, message=str(e))
    alg = FDAlgebra(table)
    socle_types: dict[str, str | None] = {}
    weakly = True
    for v in pres.quiver.vertices:
        soc = socle_of_projective(alg, v)
        if len(soc) == 1 and soc[0][0] == v:
            socle_types[v] = v
        else:
            socle_types[v] = soc[0][0] if len(soc) == 1 else None
            weakly = False
    return ValidationReport(True, True, weakly, loops, socle_types, dim=alg.dim)


def socle_of_projective(alg: FDAlgebra, v: str):
    """soc(e_v A) as a list of (vertex w, coefficient vector over slice w->v).

    x in e_v A e_w is in the socle iff x.a = 0 for every arrow a with
    target w.  Returns only vertices with nonzero socle part.
    """
    from .linalg import nullspace

    field = alg.field
    out = []
    for w in alg.quiver.vertices:
        sl = alg.slice_basis(w, v)
        if not sl:
            continue
        rows = []
        for a in alg.quiver.in_arrows[w]:
            ap = alg.quiver.path_from_indices((a.index,))
            dst = alg.slice_basis(a.source, v)
            for d in dst:
                rows.append([alg.mul_paths(p, ap).terms.get(d, field.zero) for p in sl])
        vecs = nullspace(field, rows, ncols=len(sl))
        for vec in vecs:
            out.append((w, vec))
    return out


# ---------------------------------------------------------------------------
# quotient-slice bases


SLICE_SPECS = {"I", "J", "JI", "IJ", "JxI", "IxJ"}  # x = junction avoids a vertex


@dataclass
class SliceQuotientBasis:
    """Echelonized representatives of a quotient of subideal slices.

    Representatives are genuine elements of I (combinations of paths from
    ``src`` to ``tgt``), reduced against the denominator span; the span
    carries provenance so membership witnesses can be reconstructed.
    """

    tag: str
    tgt: str
    src: str
    representatives: list[PathCombination]
    den_echelon: "_TrackedEchelon"
    rep_echelon: SparseEchelon
    rep_order: list[Path]      # pivot path of each representative
    truncation: int
    islices: dict = dc_field(default_factory=dict)
    display: list[PathCombination] = dc_field(default_factory=list)

    def __post_init__(self):
        if not self.display:
            self.display = list(self.representatives)


class _TrackedEchelon:
    """Sparse echelon that remembers how each pivot was built from tagged
    generators, so solved memberships come with provenance."""

    def __init__(self, field, key_order):
        self.field = field
        self.key_order = key_order
        self.pivots: dict = {}      # lead -> (vector, expr dict tag -> coeff)

    def _axpy(self, expr, c, other):
        for t, x in other.items():
            nv = expr.get(t, self.field.zero) - c * x
            if nv:
                expr[t] = nv
            else:
                expr.pop(t, None)

    def reduce(self, vec: dict):
        v = dict(vec)
        expr: dict = {}
        while v:
            matching = [k for k in v if k in self.pivots]
            if not matching:
                break
            k = max(matching, key=self.key_order)
            c = v[k]
            pvec, pexpr = self.pivots[k]
            for kk, x in pvec.items():
                nv = v.get(kk, self.field.zero) - c * x
                if nv:
                    v[kk] = nv
                else:
                    v.pop(kk, None)
            self._axpy(expr, c, {t: -x for t, x in pexpr.items()})
        return v, expr

    def add(self, vec: dict, tag) -> bool:
        v, expr = self.reduce(vec)
        if not v:
            return False
        # residue = vec - expr.gens and vec = gen_tag, so the stored monic
        # vector is (gen_tag - expr.gens) / lead coefficient
        lead = max(v, key=self.key_order)
        inv = self.field.inv(v[lead])
        pexpr = {t: -x * inv for t, x in expr.items()}
        pexpr[tag] = pexpr.get(tag, self.field.zero) + inv
        v = {k: x * inv for k, x in v.items()}
        self.pivots[lead] = (v, {t: x for t, x in pexpr.items() if x})
        return True

    @property
    def dim(self):
        return len(self.pivots)


def ideal_slice_basis(alg: FDAlgebra, src: str, tgt: str, limit: int) -> list[PathCombination]:
    """Basis of {x in span(paths src->tgt, len <= limit) : x in I}."""
    paths = [p for p in enumerate_paths(alg.quiver, limit, source=src, target=tgt)]
    field = alg.field
    images = []
    for p in paths:
        if len(p) > alg.D:
            images.append({})
        else:
            images.append({alg.index[q]: c
                           for q, c in alg.nf(PathCombination.from_path(field, p)).terms.items()})
    # nullspace of the nf matrix (columns = paths)
    rows: dict[int, list] = {}
    for col, img in enumerate(images):
        for bi, c in img.items():
            rows.setdefault(bi, [field.zero] * len(paths))[col] = c
    from .linalg import nullspace
    mat = list(rows.values())
    vecs = nullspace(field, mat, ncols=len(paths))
    out = []
    for vec in vecs:
        terms = {paths[i]: c for i, c in enumerate(vec) if c}
        out.append(PathCombination(field, terms))
    key = alg.quiver.path_key
    out.sort(key=lambda x: key(max(x.terms, key=key)))
    return out


def _truncate(combo: PathCombination, limit: int) -> PathCombination:
    return PathCombination(combo.field,
                           {p: c for p, c in combo.terms.items() if len(p) <= limit})


def quotient_slice_basis(alg: FDAlgebra, numerator, denominator, tgt: str, src: str,
                         avoid: str | None = None, tag: str = "generic") -> SliceQuotientBasis:
    """Echelonized representatives of a k-basis of
    e_tgt (N / D) e_src, for N, D built from the closed vocabulary
    {I, JI, IJ, JxI, IxJ} (x marks a junction avoiding `avoid`).

    The computation happens in the truncation kQ/J^(T+1) where T is sound
    for the requested denominator: T = M when D contains IJ or JI,
    T = M + 1 when it only contains the junction-avoiding products.
    """
    numerator = tuple(numerator)
    denominator = tuple(denominator)
    for t in numerator + denominator:
        if t not in SLICE_SPECS:
            raise UnknownSpec(f"unknown subideal token {t!r}")
    if numerator != ("I",):
        raise UnknownSpec("only numerator ('I',) is supported")
    if any(t in ("JxI", "IxJ") for t in denominator) and avoid is None:
        raise UnknownSpec("junction-avoiding tokens need the avoided vertex")
    plain = any(t in ("IJ", "JI") for t in denominator)
    T = alg.M if plain else alg.M + 1
    field = alg.field
    quiver = alg.quiver
    key = quiver.path_key

    islice_cache: dict[tuple[str, str], list[PathCombination]] = {}

    def islice(s, t):
        if (s, t) not in islice_cache:
            islice_cache[(s, t)] = ideal_slice_basis(alg, s, t, T)
        return islice_cache[(s, t)]

    den = _TrackedEchelon(field, key)
    for token in denominator:
        if token in ("JI", "JxI"):
            # u o y with y in I(src -> l), u: l -> tgt, junction l (maybe avoided)
            for l in quiver.vertices:
                if token == "JxI" and l == avoid:
                    continue
                ys = islice(src, l)
                if not ys:
                    continue
                for u in enumerate_paths(quiver, T - 2, source=l, target=tgt):
                    if len(u) == 0:
                        continue
                    up = PathCombination.from_path(field, u)
                    for yi, y in enumerate(ys):
                        prod = _truncate(up * y, T)
                        if prod.is_zero():
                            continue
                        den.add(dict(prod.terms), (token, u, src, l, yi))
        elif token in ("IJ", "IxJ"):
            # y o u with y in I(l -> tgt), u: src -> l
            for l in quiver.vertices:
                if token == "IxJ" and l == avoid:
                    continue
                ys = islice(l, tgt)
                if not ys:
                    continue
                for u in enumerate_paths(quiver, T - 2, source=src, target=l):
                    if len(u) == 0:
                        continue
                    up = PathCombination.from_path(field, u)
                    for yi, y in enumerate(ys):
                        prod = _truncate(y * up, T)
                        if prod.is_zero():
                            continue
                        den.add(dict(prod.terms), (token, u, l, tgt, yi))
        else:
            raise UnknownSpec(f"token {token!r} not allowed in denominators")

    rep_order: list[Path] = []
    rep_ech = SparseEchelon(field, key)
    for y in islice(src, tgt):
        residue, _ = den.reduce(dict(y.terms))
        if not residue:
            continue
        residue2 = rep_ech.add(residue)
        if residue2 is None:
            continue
        rep_order.append(max(residue2, key=key))
    # read representatives back from the (inter-reduced) echelon so the
    # stored combinations and the pivots agree exactly
    reps = [PathCombination(field, rep_ech.pivots[lead]) for lead in rep_order]
    return SliceQuotientBasis(tag, tgt, src, reps, den, rep_ech, rep_order, T,
                              islices=islice_cache)


def single_path_class_members(alg: FDAlgebra, sqb: SliceQuotientBasis, idx: int) -> list[Path]:
    """Single paths p with den-residue equal to representative idx, i.e.
    candidate one-path witnesses of that quotient class.  Canonical order."""
    key = alg.quiver.path_key
    rep = sqb.rep_echelon.pivots[sqb.rep_order[idx]]
    out = []
    for p in enumerate_paths(alg.quiver, sqb.truncation, source=sqb.src, target=sqb.tgt):
        if p.is_trivial:
            continue
        residue, _ = sqb.den_echelon.reduce({p: alg.field.one})
        if residue == rep:
            out.append(p)
    out.sort(key=key)
    return out


def express_in_quotient(alg: FDAlgebra, sqb: SliceQuotientBasis, x: PathCombination):
    """Write x (an element of the numerator slice, terms of length <= T) as
    sum of representative coordinates plus a denominator part.

    Returns (coords, den_expr) where coords maps representative index ->
    coefficient and den_expr maps provenance tags -> coefficient, so that
    x = sum coords_s * rep_s + sum den_expr_t * generator_t  (in kQ,
    modulo paths longer than the truncation, which lie in the denominator).
    """
    field = alg.field
    key = alg.quiver.path_key
    xt = _truncate(x, sqb.truncation)
    residue, den_expr = sqb.den_echelon.reduce(dict(xt.terms))
    coords: dict[int, object] = {}
    v = residue
    while v:
        lead = max(v, key=key)
        if lead not in sqb.rep_echelon.pivots:
            raise ValueError("element is not in the numerator slice")
        idx = sqb.rep_order.index(lead)
        pv = sqb.rep_echelon.pivots[lead]
        c = v[lead]
        coords[idx] = coords.get(idx, field.zero) + c
        for k, val in pv.items():
            nv = v.get(k, field.zero) - c * val
            if nv:
                v[k] = nv
            else:
                v.pop(k, None)
    return coords, den_expr
