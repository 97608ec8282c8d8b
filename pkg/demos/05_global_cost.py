"""Cross-check mode: the global cost (n - P*Q)**2 without classical reduction.

For tiny n the whole product constraint fits in a handful of qubits: pin the
first and last bits of both factors and encode every remaining bit directly.
This needs no carry analysis, but the qubit count grows with the factor
lengths, which is exactly why the hybrid pipeline reduces first.
"""

import argparse

from hafactor import PipelineConfig, factor


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("numbers", nargs="*", type=int, default=[9, 15, 21, 25, 35, 49])
    args = parser.parse_args()

    for n in args.numbers:
        result = factor(n, PipelineConfig(mode="peng"))
        fidelity = "-" if result.final_fidelity is None else f"{result.final_fidelity:.4f}"
        print(f"{n:>4} = {result.p} * {result.q}  "
              f"[{result.qubits} qubits, fidelity {fidelity}]")


if __name__ == "__main__":
    main()
