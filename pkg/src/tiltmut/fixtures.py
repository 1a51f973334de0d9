"""Built-in corpus of weakly symmetric presentations.

* ``e1(m)``: the self-injective algebra of type (D_{3m}, 1/3, 1) for m >= 2:
  cyclic quiver 0 <- 1 <- ... <- (m-1) <- 0 with arrows a1..am, a_i: i -> i-1
  (am: 0 -> m-1), a loop b at 0, and relations
    a1*...*am - b*b,
    a_i*...*am*b*a1*...*a_i  (one per i, length m+2),
    am*a1.
* ``e2()``: the 3-vertex algebra with arrows a1: 1->2, a2: 2->3, a3: 3->1,
  b1: 2->1, b2: 3->2, b3: 1->3 and relations b_i a_i = a_i b_i = 0,
  a_{i+2} a_{i+1} a_i = b_i b_{i+1} b_{i+2}.
* ``two_vertex()``: serial Nakayama algebra on 1 <=> 2 with relations
  aba = bab = 0 (the two-vertex Brauer-line algebra).
* ``kx2()``: k[x]/(x^2) as a one-vertex quiver with a loop.

Fixtures are generated programmatically and also shipped as canonical
``.alg`` text under ``fixtures/``.
"""

from __future__ import annotations

from .quiver import QuiverPresentation, parse_presentation, print_presentation


def e1_text(m: int) -> str:
    if m < 2:
        raise ValueError("e1 needs m >= 2")
    lines = ["field Q"]
    lines += [f"vertex {i}" for i in range(m)]
    lines.append("arrow b : 0 -> 0")
    for i in range(1, m + 1):
        src = i % m
        tgt = (i - 1) % m
        lines.append(f"arrow a{i} : {src} -> {tgt}")
    alpha_cycle = "*".join(f"a{i}" for i in range(1, m + 1))
    lines.append(f"rel {alpha_cycle} - b*b")
    for i in range(1, m + 1):
        left = "*".join(f"a{j}" for j in range(i, m + 1))
        right = "*".join(f"a{j}" for j in range(1, i + 1))
        lines.append(f"rel {left}*b*{right}")
    lines.append("rel am_a1".replace("am_a1", f"a{m}*a1"))
    return "\n".join(lines) + "\n"


def e1(m: int) -> QuiverPresentation:
    return parse_presentation(e1_text(m))


def e2_text() -> str:
    lines = [
        "field Q",
        "vertex 1",
        "vertex 2",
        "vertex 3",
        "arrow a1 : 1 -> 2",
        "arrow a2 : 2 -> 3",
        "arrow a3 : 3 -> 1",
        "arrow b1 : 2 -> 1",
        "arrow b2 : 3 -> 2",
        "arrow b3 : 1 -> 3",
    ]
    for i in range(1, 4):
        j = i % 3 + 1
        k = j % 3 + 1
        lines.append(f"rel b{i}*a{i}")
        lines.append(f"rel a{i}*b{i}")
        lines.append(f"rel a{k}*a{j}*a{i} - b{i}*b{j}*b{k}")
    return "\n".join(lines) + "\n"


def e2() -> QuiverPresentation:
    return parse_presentation(e2_text())


def two_vertex_text() -> str:
    return (
        "field Q\n"
        "vertex 1\n"
        "vertex 2\n"
        "arrow a : 1 -> 2\n"
        "arrow b : 2 -> 1\n"
        "rel a*b*a\n"
        "rel b*a*b\n"
    )


def two_vertex() -> QuiverPresentation:
    return parse_presentation(two_vertex_text())


def kx2_text() -> str:
    return (
        "field Q\n"
        "vertex 1\n"
        "arrow x : 1 -> 1\n"
        "rel x*x\n"
    )


def kx2() -> QuiverPresentation:
    return parse_presentation(kx2_text())


BUILTIN = {
    "e2": e2_text,
    "e1_3": lambda: e1_text(3),
    "e1_4": lambda: e1_text(4),
    "e1_5": lambda: e1_text(5),
    "e1_2": lambda: e1_text(2),
    "two_vertex": two_vertex_text,
    "loop_at_1": kx2_text,
}


def builtin_names() -> list[str]:
    return sorted(BUILTIN)


def builtin_text(name: str) -> str:
    return BUILTIN[name]()


def write_fixture_files(directory) -> None:
    """Regenerate the shipped fixtures/*.alg files (canonical text)."""
    import pathlib

    d = pathlib.Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for name, maker in BUILTIN.items():
        pres = parse_presentation(maker())
        (d / f"{name}.alg").write_text(print_presentation(pres))
