"""From the residual equations to a diagonal cost Hamiltonian.

Each residual equation e = 0 contributes the penalty e**2; mapping every bit
to the number operator (I - Z)/2 expands the total penalty into Z-Pauli
strings with exact dyadic coefficients.  Zero-energy basis states are exactly
the solutions of the residual system.
"""

import argparse

from hafactor import (
    build_bitwise_hamiltonian,
    build_equations,
    enumerate_splits,
    init_bounds,
    propagate,
    refine_bounds,
)


def z_string(term, k):
    if not term.z_support:
        return "I" * k
    return "".join("Z" if i in term.z_support else "I" for i in range(k))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("n", nargs="?", type=int, default=551)
    args = parser.parse_args()

    split = enumerate_splits(args.n)[0]
    system = build_equations(args.n, split)
    residual = propagate(system, refine_bounds(system, init_bounds(split)))
    if not residual.free_vars:
        print(f"{args.n}: the classical stage already fixed every bit -- nothing to encode")
        return

    spec = build_bitwise_hamiltonian(residual)
    k = spec.num_qubits
    print(f"n = {args.n}: {len(residual.equations)} residual equations over "
          f"{residual.free_vars} -> {k} qubits")
    print("qubit order:", ", ".join(f"{i}: {v}" for i, v in enumerate(spec.qubit_map.qubits)))

    print("\ncost Hamiltonian (Z-Pauli strings):")
    for term in spec.terms:
        print(f"  {str(term.coeff):>5} * {z_string(term, k)}")

    diag = spec.final_diagonal()
    print("\nenergies of the computational basis states:")
    for b in range(1 << k):
        label = format(b, f"0{k}b")
        mark = "   <- solution" if diag[b] == 0 else ""
        print(f"  |{label}> : {diag[b]:g}{mark}")


if __name__ == "__main__":
    main()
