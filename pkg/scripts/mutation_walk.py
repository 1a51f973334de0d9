#!/usr/bin/env python3
"""Walk a sequence of mutations and track the brick systems.

Iterates left mutations over the loopless vertices of a fixture, mutating
the simple system alongside, and reports at every step the dimension
vectors of the bricks, whether the orthogonality axioms survive (they
must) and whether the presentation returned to the starting one.  This is
the cheap way to produce nontrivial orthogonal-brick systems.

Usage: python3 scripts/mutation_walk.py [fixture] [steps]
"""

import sys

sys.path.insert(0, "src")

from tiltmut import fixtures
from tiltmut.algebra import FDAlgebra, build_table
from tiltmut.msob import mutate_system_left, simples_system
from tiltmut.mutation import mutate_plus, presentation_iso
from tiltmut.quiver import parse_presentation


def main():
    name = sys.argv[1] if len(sys.argv) > 1 else "e2"
    steps = int(sys.argv[2]) if len(sys.argv) > 2 else 4
    pres = parse_presentation(fixtures.builtin_text(name))
    alg = FDAlgebra(build_table(pres))
    system = simples_system(alg)
    current = pres
    loopless = [v for v in alg.quiver.vertices if not alg.quiver.loops(v)]
    print(f"walking {steps} left mutations of {name} over vertices {loopless}")
    for step in range(steps):
        v = loopless[step % len(loopless)]
        cur_alg = FDAlgebra(build_table(current))
        if cur_alg.quiver.loops(v):
            print(f"step {step}: vertex {v} grew a loop, skipping")
            continue
        res = mutate_plus(cur_alg, v, checked=cur_alg.dim <= 200)
        i = alg.quiver.vertices.index(v)
        try:
            system = mutate_system_left(system, i)
        except Exception as e:
            print(f"step {step}: brick mutation blocked ({e})")
            break
        back = presentation_iso(res.reduced, pres, budget=50000)
        dims = [list(X.dim_vector()) for X in system.bricks]
        print(f"step {step}: mu+_{v}; bricks {dims}; axioms "
              f"{system.orthobrick and system.no2periodic}; "
              f"back to start: {back is not None}")
        current = res.reduced
    print("walk done")


if __name__ == "__main__":
    main()
