"""Piecewise-constant simulated adiabatic evolution with full diagnostics.

The register starts in the ground state |-...-> of the transverse field and is
driven through H(s) = (1-s) H_i + s H_f in M equal steps; step m applies
U_m = exp(-i 2*pi H(m/M) tau) with tau = T/M, so the last step uses H_f
exactly.  Hamiltonian coefficients are in ordinary frequency units (cycles per
time unit) and hbar = 1, hence the 2*pi in the step phase; this is the NMR
convention under which a total time of 3.5 with 20 steps reproduces the
published 0.99 solution fidelity for the three-qubit 551 register.

Every step is recorded: interpolation parameter, basis-state probabilities,
instantaneous spectrum, ground-state gap and the cosine-similarity fidelity of
the probability distribution against the target (uniform over the minimum-
energy basis states of H_f).  When the final ground space is degenerate the
reported gap at a given s skips the degenerate block (distinct eigenvalues),
so the diagnostic adiabatic-time estimate stays finite.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .hamiltonian import DEFAULT_QUBIT_CAP, HamiltonianSpec, QubitCapExceeded, initial_matrix

_DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class Schedule:
    total_time: float = 3.5
    steps: int = 20
    interpolation: str = "linear"

    def __post_init__(self):
        if self.total_time < 0:
            raise ValueError("total_time must be >= 0")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.interpolation != "linear":
            raise ValueError(f"unsupported interpolation {self.interpolation!r}")

    @property
    def tau(self) -> float:
        return self.total_time / self.steps

    @property
    def phase_tau(self) -> float:
        """Phase accumulated per unit energy per step: 2*pi*tau (frequency units)."""
        return 2.0 * np.pi * self.tau


def interpolate(spec: HamiltonianSpec, s: float) -> np.ndarray:
    """(1-s) H_i + s H_f as a dense Hermitian matrix."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    h_i = initial_matrix(spec.num_qubits)
    h_f = np.diag(spec.final_diagonal())
    return (1.0 - s) * h_i + s * h_f


def step_unitary(h: np.ndarray, tau: float) -> np.ndarray:
    """exp(-i h tau) via eigendecomposition of the Hermitian step Hamiltonian."""
    w, v = np.linalg.eigh(h)
    u = (v * np.exp(-1j * w * tau)) @ v.conj().T
    defect = np.abs(u.conj().T @ u - np.eye(len(h))).max()
    if defect > 1e-10:
        raise ArithmeticError(f"step unitary deviates from unitarity by {defect:g}")
    return u


def prepare_initial_ground(k: int) -> np.ndarray:
    """Tensor power |-> ** k: amplitude (-1)**popcount(b) / sqrt(2**k)."""
    if k < 1:
        raise ValueError("need at least one qubit")
    dim = 1 << k
    signs = np.array([(-1) ** bin(b).count("1") for b in range(dim)], dtype=complex)
    return signs / np.sqrt(dim)


def fidelity(p_expected: np.ndarray, p_actual: np.ndarray) -> float:
    """Cosine similarity of two probability distributions over basis states."""
    p_expected = np.asarray(p_expected, dtype=float)
    p_actual = np.asarray(p_actual, dtype=float)
    if p_expected.shape != p_actual.shape:
        raise ValueError("distributions must have equal length")
    if (p_expected < 0).any() or (p_actual < 0).any():
        raise ValueError("probabilities must be non-negative")
    denom = np.sqrt((p_expected**2).sum() * (p_actual**2).sum())
    if denom == 0:
        raise ValueError("zero-norm distribution")
    return float((p_expected * p_actual).sum() / denom)


def _distinct_gap(energies: np.ndarray, tol: float = _DEGENERACY_TOL) -> float:
    """Gap from the ground level to the next distinct level (0 if none)."""
    distinct = [energies[0]]
    for e in energies[1:]:
        if e - distinct[-1] > tol:
            distinct.append(e)
            break
    return float(distinct[1] - distinct[0]) if len(distinct) > 1 else 0.0


@dataclass
class AdiabaticTrace:
    s_values: np.ndarray          # (M+1,)
    probabilities: np.ndarray     # (M+1, 2**k)
    energies: np.ndarray          # (M+1, 2**k), each row sorted ascending
    gaps: np.ndarray              # (M+1,)
    fidelities: np.ndarray        # (M+1,)
    final_state: np.ndarray       # (2**k,) complex
    target_distribution: np.ndarray
    max_unitarity_defect: float
    max_norm_error: float

    @property
    def final_probabilities(self) -> np.ndarray:
        return self.probabilities[-1]

    @property
    def final_fidelity(self) -> float:
        return float(self.fidelities[-1])

    def to_csv(self, path) -> None:
        """Columns: step, s, E_0.., gap, fidelity, P_0.. in fixed order."""
        dim = self.probabilities.shape[1]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["step", "s"]
                + [f"E_{j}" for j in range(dim)]
                + ["gap", "fidelity"]
                + [f"P_{j}" for j in range(dim)]
            )
            for m, s in enumerate(self.s_values):
                writer.writerow(
                    [m, f"{s:.10g}"]
                    + [f"{e:.12g}" for e in self.energies[m]]
                    + [f"{self.gaps[m]:.12g}", f"{self.fidelities[m]:.12g}"]
                    + [f"{p:.12g}" for p in self.probabilities[m]]
                )


def evolve(
    spec: HamiltonianSpec,
    schedule: Schedule,
    qubit_cap: int = DEFAULT_QUBIT_CAP,
) -> AdiabaticTrace:
    """Run the stepwise evolution from |-...-> and record a full trace."""
    k = spec.num_qubits
    if k > qubit_cap:
        raise QubitCapExceeded(f"{k} qubits exceed cap {qubit_cap}")
    h_i = initial_matrix(k)
    diag_f = spec.final_diagonal()
    target = np.zeros(1 << k)
    ground = diag_f <= diag_f.min() + _DEGENERACY_TOL
    target[ground] = 1.0 / ground.sum()

    m_steps = schedule.steps
    tau = schedule.phase_tau
    psi = prepare_initial_ground(k)

    s_values = np.zeros(m_steps + 1)
    probs = np.zeros((m_steps + 1, 1 << k))
    energies = np.zeros((m_steps + 1, 1 << k))
    gaps = np.zeros(m_steps + 1)
    fids = np.zeros(m_steps + 1)
    max_defect = 0.0
    max_norm_err = 0.0

    def record(m: int, s: float, w: np.ndarray):
        s_values[m] = s
        p = np.abs(psi) ** 2
        probs[m] = p
        energies[m] = w
        gaps[m] = _distinct_gap(w)
        fids[m] = fidelity(target, p)

    record(0, 0.0, np.linalg.eigvalsh(h_i))
    for m in range(1, m_steps + 1):
        s = m / m_steps
        h = (1.0 - s) * h_i + s * np.diag(diag_f)
        w, v = np.linalg.eigh(h)
        u = (v * np.exp(-1j * w * tau)) @ v.conj().T
        max_defect = max(max_defect, float(np.abs(u.conj().T @ u - np.eye(1 << k)).max()))
        psi = u @ psi
        max_norm_err = max(max_norm_err, abs(float(np.linalg.norm(psi)) - 1.0))
        record(m, s, w)

    return AdiabaticTrace(
        s_values=s_values,
        probabilities=probs,
        energies=energies,
        gaps=gaps,
        fidelities=fids,
        final_state=psi,
        target_distribution=target,
        max_unitarity_defect=max_defect,
        max_norm_error=max_norm_err,
    )


@dataclass
class SpectrumTrace:
    s_values: np.ndarray
    energies: np.ndarray  # (samples, 2**k)
    min_gap: float

    def to_csv(self, path) -> None:
        dim = self.energies.shape[1]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["s"] + [f"E_{j}" for j in range(dim)])
            for s, row in zip(self.s_values, self.energies):
                writer.writerow([f"{s:.10g}"] + [f"{e:.12g}" for e in row])


def spectrum_trace(spec: HamiltonianSpec, samples: int) -> SpectrumTrace:
    """Sorted eigenvalues of H(s) at uniformly spaced s, plus the minimum gap."""
    if samples < 2:
        raise ValueError("need at least 2 samples")
    h_i = initial_matrix(spec.num_qubits)
    h_f = np.diag(spec.final_diagonal())
    s_values = np.linspace(0.0, 1.0, samples)
    energies = np.array([np.linalg.eigvalsh((1 - s) * h_i + s * h_f) for s in s_values])
    min_gap = min(_distinct_gap(row) for row in energies)
    return SpectrumTrace(s_values, energies, min_gap)


def adiabatic_time_estimate(
    spec: HamiltonianSpec,
    epsilon: float,
    samples: int = 101,
    gap_floor: float = 1e-9,
) -> float:
    """Diagnostic T = ||H_f - H_i||_2 / (epsilon * gap**2) for the linear path.

    A degenerate final ground space would drive the naive E_1 - E_0 gap to
    zero even though every degenerate state encodes a solution, so the gap is
    measured to the lowest level that stays above the final ground multiplicity
    g: gap(s) = E_g(s) - E_0(s), minimized over the samples.  Below `gap_floor`
    the estimate is reported as infinity (degenerate-gap warning).  This value
    is never used to drive `evolve`.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    h_i = initial_matrix(spec.num_qubits)
    diag_f = spec.final_diagonal()
    h_f = np.diag(diag_f)
    norm = float(np.abs(np.linalg.eigvalsh(h_f - h_i)).max())
    if norm == 0:
        return 0.0
    g = int((diag_f <= diag_f.min() + _DEGENERACY_TOL).sum())
    energies = spectrum_trace(spec, samples).energies
    if g >= energies.shape[1]:
        return float("inf")
    gap = float((energies[:, g] - energies[:, 0]).min())
    if gap < gap_floor:
        return float("inf")
    return norm / (epsilon * gap**2)
