"""Classical reduction of the 551 system: carry refinement + propagation.

Starting from the absolute carry bounds, each equation narrows the carry
ranges it touches; interleaved propagation rules fix forced bits, eliminate
complementary pairs, and drop satisfied equations.  For 551 the ten-bit
system collapses to three parity equations over three bits of p.
"""

import argparse

from hafactor import (
    InfeasibleSplit,
    build_equations,
    enumerate_splits,
    init_bounds,
    propagate,
    refine_bounds,
    solve_residual_exhaustively,
)
from hafactor.pipeline import assemble_factors


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("n", nargs="?", type=int, default=551)
    args = parser.parse_args()
    n = args.n

    for split in enumerate_splits(n):
        print(f"\n=== split (l_p={split.l_p}, l_q={split.l_q}, case {split.case}) ===")
        system = build_equations(n, split)
        start = init_bounds(split)
        print("absolute carry bounds: "
              + ", ".join(f"{v} in [{lo},{hi}]" for v, (lo, hi) in sorted(start.ranges.items())))
        try:
            table = refine_bounds(system, start)
            print("refined carry bounds:  "
                  + ", ".join(f"{v} in [{lo},{hi}]" for v, (lo, hi) in sorted(table.ranges.items())))
            residual = propagate(system, table)
        except InfeasibleSplit as exc:
            print(f"infeasible: {exc}")
            continue

        print("fixed after propagation: "
              + ", ".join(f"{v}={x}" for v, x in sorted(residual.fixed.items())))
        for v, expr in residual.eliminated:
            print(f"eliminated: {v} = {expr}")
        print(f"residual: {len(residual.equations)} equations over {residual.free_vars}")
        for eq in residual.equations:
            print(f"  {eq} = 0")

        if len(residual.free_vars) <= 12:
            for sol in solve_residual_exhaustively(residual):
                p, q = assemble_factors(residual.complete(sol), split)
                mark = "ok" if p * q == n else "NOT a factorization (bug!)"
                print(f"  solution {sol} -> p={p}, q={q}  [{mark}]")
        return  # first viable split is enough for the walkthrough


if __name__ == "__main__":
    main()
