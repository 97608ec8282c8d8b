"""Simulated adiabatic evolution of the 551 register.

Drives the three-qubit register from the transverse-field ground state
|---> through the linear schedule H(s) = (1-s) H_i + s H_f in M steps,
printing the probability flow into the two solution states and the
distribution fidelity per step.  Optionally writes the full trace and the
instantaneous spectrum as CSV for plotting.
"""

import argparse

from hafactor import PipelineConfig, Schedule, factor, spectrum_trace


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("n", nargs="?", type=int, default=551)
    parser.add_argument("--total-time", type=float, default=3.5)
    parser.add_argument("--steps", type=int, default=20)
    parser.add_argument("--trace-csv", metavar="PATH")
    parser.add_argument("--spectrum-csv", metavar="PATH")
    args = parser.parse_args()

    schedule = Schedule(total_time=args.total_time, steps=args.steps)
    result = factor(args.n, PipelineConfig(schedule=schedule))
    print(f"{args.n} = {result.p} * {result.q}  [{result.method.value}]")
    if result.trace is None:
        print("no quantum stage was needed")
        return

    trace = result.trace
    solution_states = [
        b for b in range(len(trace.target_distribution))
        if trace.target_distribution[b] > 0
    ]
    k = result.qubits
    labels = ", ".join(f"|{format(b, f'0{k}b')}>" for b in solution_states)
    print(f"\nsolution states: {labels}")
    print(f"{'step':>4} {'s':>6} {'P(solutions)':>13} {'fidelity':>9}")
    for m, s in enumerate(trace.s_values):
        p_sol = trace.probabilities[m, solution_states].sum()
        print(f"{m:>4} {s:>6.2f} {p_sol:>13.4f} {trace.fidelities[m]:>9.4f}")

    print(f"\nfinal fidelity {trace.final_fidelity:.4f}, "
          f"combined solution probability {result.solution_probability:.4f}")

    if args.trace_csv:
        trace.to_csv(args.trace_csv)
        print(f"wrote step trace to {args.trace_csv}")
    if args.spectrum_csv:
        spectrum_trace(result.hamiltonian, 101).to_csv(args.spectrum_csv)
        print(f"wrote 101-sample spectrum to {args.spectrum_csv}")


if __name__ == "__main__":
    main()
