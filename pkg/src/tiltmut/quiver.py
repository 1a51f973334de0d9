"""Quivers, paths, path combinations, and the canonical presentation grammar.

Conventions (fixed across the whole package):

* Paths compose right to left.  A path's word is stored leftmost-first,
  meaning ``word[0]`` is the *last* arrow applied and ``word[-1]`` the
  first.  ``source(p)`` is the source of the last entry, ``target(p)`` the
  target of the first.  ``compose(p, q)`` is "q first, then p" and is
  defined iff ``source(p) == target(q)``.
* ``divide_left(x, q)`` realizes x/q (strip q from the word's right end,
  i.e. q applied first); ``divide_right(q, x)`` realizes q\\x (strip q from
  the left end).  Both extend linearly and send non-divisible terms to 0.
* Canonical path order: word length first, then lexicographic on arrow
  declaration indices; trivial paths are ordered by vertex declaration.

Grammar (UTF-8, line oriented, ``#`` comments)::

    field Q            | field F <p>
    vertex <id>
    arrow <label> : <src> -> <tgt>
    rel <term> (± <term>)*     term := [<coeff>*]<label>(*<label>)*

``p*q`` in a term means q is applied first.  Plain labels match
``[A-Za-z_][A-Za-z0-9_]*``; labels synthesized by mutation may carry a
single trailing ``*`` or ``'`` and a parenthesized core, e.g. ``a1*`` or
``(a1.a3)'``, and the scanner disambiguates a trailing ``*`` from the
separator by one character of lookahead.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .fields import QQ, field_from_name


class ParseError(ValueError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        loc = f" (line {line}" + (f", col {col}" if col is not None else "") + ")" if line else ""
        super().__init__(message + loc)


@dataclass(frozen=True, slots=True)
class Arrow:
    index: int
    label: str
    source: str
    target: str


@dataclass(frozen=True, slots=True)
class Path:
    """A path in a quiver; ``arrows`` holds arrow indices, leftmost applied last."""

    source: str
    target: str
    arrows: tuple[int, ...]

    def __len__(self):
        return len(self.arrows)

    @property
    def is_trivial(self):
        return not self.arrows


_PLAIN_LABEL = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_NUMERIC = re.compile(r"-?\d+(/\d+)?$")


def _label_ok(label: str) -> bool:
    if _NUMERIC.match(label):
        return False
    core, suffix = label, ""
    if core and core[-1] in "*'":
        core, suffix = core[:-1], core[-1]
    if core.startswith("("):
        return core.endswith(")") and len(core) > 2 and not any(c.isspace() for c in core)
    return bool(_PLAIN_LABEL.match(core)) or bool(re.match(r"[A-Za-z0-9_.]+$", core))


class Quiver:
    """A finite quiver: ordered vertices and labeled arrows."""

    def __init__(self, vertices: list[str], arrows: list[tuple[str, str, str]]):
        if len(set(vertices)) != len(vertices):
            raise ValueError("duplicate vertex ids")
        self.vertices = list(vertices)
        self.vertex_index = {v: i for i, v in enumerate(vertices)}
        self.arrows: list[Arrow] = []
        self.by_label: dict[str, Arrow] = {}
        for label, src, tgt in arrows:
            if label in self.by_label:
                raise ValueError(f"duplicate arrow label {label!r}")
            if src not in self.vertex_index or tgt not in self.vertex_index:
                raise ValueError(f"arrow {label!r} references undeclared vertex")
            if not _label_ok(label):
                raise ValueError(f"illegal arrow label {label!r}")
            a = Arrow(len(self.arrows), label, src, tgt)
            self.arrows.append(a)
            self.by_label[label] = a
        self.out_arrows = {v: [a for a in self.arrows if a.source == v] for v in vertices}
        self.in_arrows = {v: [a for a in self.arrows if a.target == v] for v in vertices}

    def loops(self, v: str) -> list[Arrow]:
        return [a for a in self.out_arrows[v] if a.target == v]

    def trivial(self, v: str) -> Path:
        if v not in self.vertex_index:
            raise ValueError(f"unknown vertex {v!r}")
        return Path(v, v, ())

    def path_from_indices(self, indices) -> Path:
        indices = tuple(indices)
        if not indices:
            raise ValueError("use trivial(v) for empty paths")
        arrs = [self.arrows[i] for i in indices]
        for a, b in zip(arrs, arrs[1:]):
            if a.source != b.target:
                raise ValueError(f"non-composable arrows {a.label!r}, {b.label!r}")
        return Path(arrs[-1].source, arrs[0].target, indices)

    def path(self, labels: list[str]) -> Path:
        return self.path_from_indices([self.by_label[l].index for l in labels])

    def path_key(self, p: Path):
        """Canonical order key: length, then arrow indices, trivial by vertex."""
        return (len(p.arrows), p.arrows if p.arrows else (self.vertex_index[p.source],))

    def path_str(self, p: Path) -> str:
        if p.is_trivial:
            return f"e({p.source})"
        return "*".join(self.arrows[i].label for i in p.arrows)

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [(a.label, a.target, a.source) for a in self.arrows])

    def reverse_path(self, p: Path) -> Path:
        """The same word read in the opposite quiver."""
        return Path(p.target, p.source, tuple(reversed(p.arrows)))


def compose(p: Path, q: Path) -> Path | None:
    """q first, then p; None on endpoint mismatch."""
    if p.source != q.target:
        return None
    return Path(q.source, p.target, p.arrows + q.arrows)


class PathCombination:
    """A finite k-linear combination of paths; zero coefficients are dropped."""

    __slots__ = ("field", "terms")

    def __init__(self, field, terms: dict[Path, object] | None = None):
        self.field = field
        self.terms: dict[Path, object] = {}
        if terms:
            for p, c in terms.items():
                if c:
                    self.terms[p] = c

    @classmethod
    def zero(cls, field):
        return cls(field)

    @classmethod
    def from_path(cls, field, p: Path, coeff=None):
        return cls(field, {p: field.one if coeff is None else coeff})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for p, c in other.terms.items():
            nc = out.get(p, self.field.zero) + c
            if nc:
                out[p] = nc
            else:
                out.pop(p, None)
        return PathCombination(self.field, out)

    def __sub__(self, other):
        out = dict(self.terms)
        for p, c in other.terms.items():
            nc = out.get(p, self.field.zero) - c
            if nc:
                out[p] = nc
            else:
                out.pop(p, None)
        return PathCombination(self.field, out)

    def __neg__(self):
        return PathCombination(self.field, {p: -c for p, c in self.terms.items()})

    def scale(self, c):
        if not c:
            return PathCombination(self.field)
        return PathCombination(self.field, {p: c * x for p, x in self.terms.items()})

    def __mul__(self, other):
        """Linear extension of compose; non-composable products vanish."""
        out: dict[Path, object] = {}
        for p, cp in self.terms.items():
            for q, cq in other.terms.items():
                r = compose(p, q)
                if r is None:
                    continue
                nc = out.get(r, self.field.zero) + cp * cq
                if nc:
                    out[r] = nc
                else:
                    out.pop(r, None)
        return PathCombination(self.field, out)

    def is_homogeneous(self):
        """All terms share one source and one target."""
        ends = {(p.source, p.target) for p in self.terms}
        return len(ends) <= 1

    def endpoints(self):
        if not self.terms:
            return None
        ends = {(p.source, p.target) for p in self.terms}
        if len(ends) != 1:
            return None
        return next(iter(ends))

    def max_len(self):
        return max((len(p) for p in self.terms), default=0)

    def min_len(self):
        return min((len(p) for p in self.terms), default=0)

    def __eq__(self, other):
        return isinstance(other, PathCombination) and self.terms == other.terms

    def __repr__(self):
        return f"PathCombination({self.terms!r})"


def divide_left(x: PathCombination, q: Path) -> PathCombination:
    """x/q: keep terms p = p'q (q applied first) and return the p' part."""
    out: dict[Path, object] = {}
    k = len(q.arrows)
    for p, c in x.terms.items():
        if p.source != q.source:
            continue
        if k == 0:
            out[p] = out.get(p, x.field.zero) + c
            continue
        if len(p.arrows) < k or p.arrows[-k:] != q.arrows:
            continue
        rest = Path(q.target, p.target, p.arrows[:-k])
        nc = out.get(rest, x.field.zero) + c
        if nc:
            out[rest] = nc
        else:
            out.pop(rest, None)
    return PathCombination(x.field, out)


def divide_right(q: Path, x: PathCombination) -> PathCombination:
    """q\\x: keep terms p = qp' (q applied last) and return the p' part."""
    out: dict[Path, object] = {}
    k = len(q.arrows)
    for p, c in x.terms.items():
        if p.target != q.target:
            continue
        if k == 0:
            out[p] = out.get(p, x.field.zero) + c
            continue
        if len(p.arrows) < k or p.arrows[:k] != q.arrows:
            continue
        rest = Path(p.source, q.source, p.arrows[k:])
        nc = out.get(rest, x.field.zero) + c
        if nc:
            out[rest] = nc
        else:
            out.pop(rest, None)
    return PathCombination(x.field, out)


def enumerate_paths(quiver: Quiver, max_len: int, source: str | None = None,
                    target: str | None = None) -> list[Path]:
    """All paths of length <= max_len matching the filters, canonical order."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    seeds = [quiver.trivial(v) for v in quiver.vertices if source is None or v == source]
    out = [p for p in seeds if target is None or p.target == target]
    level = seeds
    for _ in range(max_len):
        nxt = []
        for a in quiver.arrows:
            for w in level:
                if a.source == w.target:
                    nxt.append(Path(w.source, a.target, (a.index,) + w.arrows))
        nxt.sort(key=quiver.path_key)
        out.extend(p for p in nxt if target is None or p.target == target)
        level = nxt
        if not level:
            break
    return out


@dataclass
class QuiverPresentation:
    """A quiver with a scalar field and a list of homogeneous relations."""

    quiver: Quiver
    field: object = dc_field(default_factory=lambda: QQ)
    relations: list[PathCombination] = dc_field(default_factory=list)

    def __post_init__(self):
        for i, r in enumerate(self.relations):
            if not r.is_homogeneous():
                raise ValueError(f"relation {i} is not endpoint-homogeneous")

    def opposite(self) -> "QuiverPresentation":
        opp = self.quiver.opposite()
        rels = []
        for r in self.relations:
            rels.append(PathCombination(self.field, {
                self.quiver.reverse_path(p): c for p, c in r.terms.items()}))
        return QuiverPresentation(opp, self.field, rels)


# ---------------------------------------------------------------------------
# grammar


def _scan_label(s: str, pos: int, line_no: int):
    i = pos
    if i < len(s) and s[i] == "(":
        depth = 0
        j = i
        while j < len(s):
            if s[j] == "(":
                depth += 1
            elif s[j] == ")":
                depth -= 1
                if depth == 0:
                    break
            j += 1
        if depth != 0:
            raise ParseError("unbalanced parentheses in label", line_no, pos + 1)
        atom = s[i:j + 1]
        i = j + 1
    else:
        m = re.match(r"[A-Za-z0-9_.]+", s[i:])
        if not m:
            raise ParseError(f"expected a label at {s[i:]!r}", line_no, pos + 1)
        atom = m.group(0)
        i += m.end()
    if i < len(s) and s[i] == "'":
        atom += "'"
        i += 1
    elif i < len(s) and s[i] == "*":
        if i + 1 == len(s) or s[i + 1] == "*":
            atom += "*"
            i += 1
    return atom, i


def _scan_term(s: str, field, line_no: int):
    """Scan one term; returns (coeff, [labels])."""
    i = 0
    coeff = field.one
    m = re.match(r"-?\d+(/\d+)?", s)
    if m and m.end() < len(s) and s[m.end()] == "*":
        coeff = field.parse(m.group(0))
        i = m.end() + 1
    labels = []
    while i < len(s):
        atom, i = _scan_label(s, i, line_no)
        labels.append(atom)
        if i < len(s):
            if s[i] != "*":
                raise ParseError(f"expected '*' between labels, got {s[i]!r}", line_no, i + 1)
            i += 1
            if i == len(s):
                raise ParseError("dangling '*' at end of term", line_no, i)
    if not labels:
        raise ParseError("empty term", line_no)
    return coeff, labels


def parse_presentation(text: str) -> QuiverPresentation:
    field = QQ
    vertices: list[str] = []
    arrow_decls: list[tuple[str, str, str]] = []
    rel_lines: list[tuple[int, str]] = []
    seen_field = False
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, body = line.partition(" ")
        body = body.strip()
        if head == "field":
            try:
                field = field_from_name(body)
            except ValueError as e:
                raise ParseError(str(e), ln) from None
            seen_field = True
        elif head == "vertex":
            if not body or " " in body:
                raise ParseError("vertex takes a single id", ln)
            if body in vertices:
                raise ParseError(f"duplicate vertex {body!r}", ln)
            vertices.append(body)
        elif head == "arrow":
            m = re.match(r"(\S+)\s*:\s*(\S+)\s*->\s*(\S+)$", body)
            if not m:
                raise ParseError("expected 'arrow <label> : <src> -> <tgt>'", ln)
            arrow_decls.append((m.group(1), m.group(2), m.group(3)))
        elif head == "rel":
            rel_lines.append((ln, body))
        else:
            raise ParseError(f"unknown directive {head!r}", ln)
    if not seen_field:
        raise ParseError("missing 'field' line", 1)
    try:
        quiver = Quiver(vertices, arrow_decls)
    except ValueError as e:
        raise ParseError(str(e)) from None

    relations = []
    for ln, body in rel_lines:
        chunks = body.split()
        if not chunks:
            raise ParseError("empty relation", ln)
        signed: list[tuple[object, str]] = []
        sign = field.one
        expect_term = True
        for ch in chunks:
            if ch in ("+", "-"):
                if expect_term:
                    raise ParseError("misplaced sign in relation", ln)
                sign = field.one if ch == "+" else -field.one
                expect_term = True
            else:
                if not expect_term:
                    raise ParseError("missing '+'/'-' between terms", ln)
                signed.append((sign, ch))
                expect_term = False
        if expect_term:
            raise ParseError("relation ends with a sign", ln)
        combo = PathCombination.zero(field)
        for sgn, term in signed:
            coeff, labels = _scan_term(term, field, ln)
            for l in labels:
                if l not in quiver.by_label:
                    raise ParseError(f"unknown arrow label {l!r}", ln)
            try:
                p = quiver.path(labels)
            except ValueError as e:
                raise ParseError(str(e), ln) from None
            combo = combo + PathCombination.from_path(field, p, sgn * coeff)
        if not combo.is_homogeneous():
            raise ParseError("relation is not endpoint-homogeneous", ln)
        relations.append(combo)
    return QuiverPresentation(quiver, field, relations)


def format_combination(quiver: Quiver, combo: PathCombination, monic: bool = True) -> str:
    """Render a relation body in canonical grammar (terms in descending
    canonical path order; scaled so the leading coefficient is 1)."""
    field = combo.field
    if combo.is_zero():
        return "0"
    items = sorted(combo.terms.items(), key=lambda kv: quiver.path_key(kv[0]), reverse=True)
    if monic:
        lead_c = items[0][1]
        items = [(p, c / lead_c) for p, c in items]
    parts = []
    for k, (p, c) in enumerate(items):
        word = quiver.path_str(p)
        neg = False
        try:
            neg = c < 0  # Fraction
        except TypeError:
            pass
        mag = -c if neg else c
        body = word if mag == field.one else f"{field.fmt(mag)}*{word}"
        if k == 0:
            parts.append(("-" + field.fmt(mag) + "*" + word) if neg and mag != field.one
                         else ("-1*" + word if neg else body))
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def print_presentation(pres: QuiverPresentation) -> str:
    lines = [f"field {pres.field.name}"]
    for v in pres.quiver.vertices:
        lines.append(f"vertex {v}")
    for a in pres.quiver.arrows:
        lines.append(f"arrow {a.label} : {a.source} -> {a.target}")
    for r in pres.relations:
        lines.append(f"rel {format_combination(pres.quiver, r)}")
    return "\n".join(lines) + "\n"
