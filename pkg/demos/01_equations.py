"""Walk through the bitwise factoring equations for n = 551.

Writing n = p*q with 5-bit factors whose first and last bits are 1, the
product decomposes into one equation per output column, each linear in the
cumulative carries.  This script prints the banded matrix form and the
column equations the rest of the pipeline works from.
"""

import argparse

from hafactor import BitSplit, build_equations, enumerate_splits, matrix_view


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("n", nargs="?", type=int, default=551)
    args = parser.parse_args()
    n = args.n

    print(f"candidate bit-length splits for n = {n}:")
    for split in enumerate_splits(n):
        print(f"  l_p = {split.l_p}, l_q = {split.l_q}, case {split.case} "
              f"(terminal carry C{split.terminal_carry_index} = {split.terminal_carry_value})")

    split = enumerate_splits(n)[0]
    system = build_equations(n, split)
    print(f"\nusing the balanced split ({split.l_p}, {split.l_q}, {split.case}):")
    print(f"pinned bits: " + ", ".join(f"{v} = {x}" for v, x in sorted(system.fixed.items())))

    view = matrix_view(system)
    print("\nbanded matrix view (rows = output columns):")
    width = max(len(s) for row in view["matrix"] for s in row)
    for m, row in enumerate(view["matrix"]):
        cells = " ".join(s.rjust(width) for s in row)
        print(f"  m={m}: [{cells}]  + {view['carry_in'][m]:>3}"
              f" = {view['rhs_bits'][m]} + 2*{view['carry_out'][m]}")

    print("\ncolumn equations (lhs = n_m + 2*C_{m+1}):")
    for eq in system.equations:
        print(f"  m={eq.m}: {eq.lhs} = {eq.n_m} + 2*C{eq.m + 1}")


if __name__ == "__main__":
    main()
