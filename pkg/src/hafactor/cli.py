"""Command line interface.

    hafactor factor <n> [--steps M] [--total-time T] [--mode hybrid|peng]
                        [--split LP,LQ] [--dump-residual P] [--dump-hamiltonian P]
                        [--trace P.csv] [--json]
    hafactor spectrum <n> [--samples S] --out P.csv

Exit codes: 0 success, 2 prime / not factorable, 3 qubit cap exceeded,
4 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import adiabatic, hamiltonian, pipeline
from .hamiltonian import QubitCapExceeded
from .pipeline import NotFactorable, PipelineConfig


def _parse_split(text: str) -> tuple[int, int]:
    try:
        l_p, l_q = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected LP,LQ (e.g. 5,5)")
    return l_p, l_q


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hafactor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    f = sub.add_parser("factor", help="factor a composite number")
    f.add_argument("n", type=int)
    f.add_argument("--steps", type=int, default=20, metavar="M")
    f.add_argument("--total-time", type=float, default=3.5, metavar="T")
    f.add_argument("--mode", choices=["hybrid", "peng"], default="hybrid")
    f.add_argument("--split", type=_parse_split, metavar="LP,LQ")
    f.add_argument("--qubit-cap", type=int, default=hamiltonian.DEFAULT_QUBIT_CAP)
    f.add_argument("--dump-residual", metavar="PATH")
    f.add_argument("--dump-hamiltonian", metavar="PATH")
    f.add_argument("--trace", metavar="PATH")
    f.add_argument("--json", action="store_true")

    s = sub.add_parser("spectrum", help="emit eigenvalue traces of H(s)")
    s.add_argument("n", type=int)
    s.add_argument("--samples", type=int, default=101, metavar="S")
    s.add_argument("--split", type=_parse_split, metavar="LP,LQ")
    s.add_argument("--out", required=True, metavar="PATH")
    return parser


def _cmd_factor(args) -> int:
    cfg = PipelineConfig(
        schedule=adiabatic.Schedule(total_time=args.total_time, steps=args.steps),
        qubit_cap=args.qubit_cap,
        mode=args.mode,
        split_override=args.split,
    )
    result = pipeline.factor(args.n, cfg)
    if args.dump_residual and result.residual is not None:
        with open(args.dump_residual, "w") as fh:
            json.dump(result.residual.to_json(), fh, indent=2)
    if args.dump_hamiltonian and result.hamiltonian is not None:
        with open(args.dump_hamiltonian, "w") as fh:
            json.dump(result.hamiltonian.to_json(), fh, indent=2)
    if args.trace and result.trace is not None:
        result.trace.to_csv(args.trace)
    if args.json:
        print(json.dumps(result.to_json()))
    else:
        print(f"{result.n} = {result.p} * {result.q}  [{result.method.value}, "
              f"{result.qubits} qubits, verified={result.verified}]")
    return 0


def _cmd_spectrum(args) -> int:
    cfg = PipelineConfig(split_override=args.split)
    result = pipeline.factor(args.n, cfg)
    if result.hamiltonian is None:
        print("classical stage solved the system; no Hamiltonian to sample",
              file=sys.stderr)
        return 2
    trace = adiabatic.spectrum_trace(result.hamiltonian, args.samples)
    trace.to_csv(args.out)
    print(f"wrote {args.samples} samples to {args.out} (min gap {trace.min_gap:.6g})")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "factor":
            return _cmd_factor(args)
        return _cmd_spectrum(args)
    except NotFactorable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QubitCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
