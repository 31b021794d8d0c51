"""Gate characterization protocols.

Channels are represented by their Pauli transfer map: the real matrix
``R[i, j] = tr(P_i E(P_j)) / d`` over the unnormalized Pauli basis, 16x16 in
the two-qubit physical space (PS) and 4x4 in the logical space (LS).  States
enter the protocol loops as Pauli coefficient vectors ``r_j = tr(P_j rho)``,
so survival probabilities and purities are inner products and sequence
simulation is matrix composition.

Protocols: quantum process tomography (:func:`qpt`), average gate fidelity
via the transfer-map closed form, Clifford randomized benchmarking
(reference and interleaved), purity benchmarking without recovery gates, and
the coherent/incoherent error split combining both.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from . import braid_space
from ._linalg import dagger, phase_distance

PAULI_1Q = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
PAULI_LABELS_1Q = ("I", "X", "Y", "Z")

DEFAULT_M_GRID = (1, 2, 4, 8, 16, 32, 64)
DEFAULT_SEQUENCES = 30

Channel = Callable[[np.ndarray], np.ndarray]


def pauli_basis(n_qubits: int) -> list[np.ndarray]:
    """Unnormalized Pauli operators, identity first, lexicographic order."""
    basis = list(PAULI_1Q)
    for _ in range(n_qubits - 1):
        basis = [np.kron(a, b) for a in basis for b in PAULI_1Q]
    return basis


def pauli_labels(n_qubits: int) -> list[str]:
    return ["".join(t) for t in itertools.product(PAULI_LABELS_1Q, repeat=n_qubits)]


def _n_qubits(dim: int) -> int:
    n = int(round(math.log2(dim)))
    if 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True)
class PauliTransferMap:
    """Real transfer matrix of a channel in the Pauli basis."""

    matrix: np.ndarray
    dim: int

    def __post_init__(self) -> None:
        d2 = self.dim**2
        if self.matrix.shape != (d2, d2):
            raise ValueError(f"transfer matrix must be {d2}x{d2} for dimension {self.dim}")

    @property
    def trace_preserving_defect(self) -> float:
        """Deviation of the identity-Pauli row from (1, 0, ..., 0)."""
        row = self.matrix[0].copy()
        row[0] -= 1.0
        return float(np.abs(row).max())

    def traceless_block(self) -> np.ndarray:
        return self.matrix[1:, 1:]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Act on a density matrix through the Pauli-coefficient picture."""
        coeffs = state_coefficients(rho)
        out = self.matrix @ coeffs
        return matrix_from_coefficients(out, self.dim)

    def compose(self, other: "PauliTransferMap") -> "PauliTransferMap":
        """This map applied after ``other``."""
        return PauliTransferMap(self.matrix @ other.matrix, self.dim)


def state_coefficients(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    basis = pauli_basis(_n_qubits(rho.shape[0]))
    return np.array([np.trace(p @ rho).real for p in basis])


def matrix_from_coefficients(coeffs: np.ndarray, dim: int) -> np.ndarray:
    basis = pauli_basis(_n_qubits(dim))
    out = np.zeros((dim, dim), dtype=complex)
    for c, p in zip(coeffs, basis):
        out += c * p
    return out / dim


def ptm_of_unitary(u: np.ndarray) -> PauliTransferMap:
    u = np.asarray(u, dtype=complex)
    d = u.shape[0]
    basis = pauli_basis(_n_qubits(d))
    mat = np.array(
        [[np.trace(p_i @ u @ p_j @ dagger(u)).real / d for p_j in basis] for p_i in basis]
    )
    return PauliTransferMap(mat, d)


def qpt(channel: Channel, dim: int, linearity_tol: float | None = 1e-8) -> PauliTransferMap:
    """Reconstruct the transfer map of a black-box channel on density matrices.

    Each Pauli basis operator is propagated through the channel via valid
    input states: the maximally mixed state and ``(I + P)/d`` for every
    traceless Pauli ``P``.  A residual check on two fixed non-Pauli probe
    states rejects channels that are not linear maps.
    """
    basis = pauli_basis(_n_qubits(dim))
    mixed_out = np.asarray(channel(np.eye(dim, dtype=complex) / dim))
    columns = [state_coefficients(dim * mixed_out)]
    for p in basis[1:]:
        rho_in = (np.eye(dim, dtype=complex) + p) / dim
        out = np.asarray(channel(rho_in))
        columns.append(state_coefficients(dim * (out - mixed_out)))
    mat = np.stack(columns, axis=1) / dim
    ptm = PauliTransferMap(mat, dim)

    if linearity_tol is not None:
        rng = np.random.Generator(np.random.Philox(key=[17, 29]))
        for _ in range(2):
            vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
            vec /= np.linalg.norm(vec)
            probe = 0.7 * np.outer(vec, vec.conj()) + 0.3 * np.eye(dim) / dim
            predicted = ptm.apply(probe)
            actual = np.asarray(channel(probe))
            residual = float(np.abs(predicted - actual).max())
            if residual > linearity_tol:
                raise ValueError(
                    f"channel is not linear: reconstruction residual {residual:.3e}"
                )
    return ptm


def average_gate_fidelity(ptm: PauliTransferMap, ideal: np.ndarray) -> float:
    """Closed-form average gate fidelity from transfer maps.

    Uses ``F_pro = tr(R_ideal^T R) / d^2`` and
    ``F_avg = (d F_pro + 1) / (d + 1)``, the standard simplification of the
    Haar-average fidelity integral for a fully reconstructed channel.
    """
    ideal_ptm = ptm_of_unitary(ideal)
    if ideal_ptm.dim != ptm.dim:
        raise ValueError("dimension mismatch between channel and ideal gate")
    d = ptm.dim
    f_pro = float(np.trace(ideal_ptm.matrix.T @ ptm.matrix)) / d**2
    return (d * f_pro + 1.0) / (d + 1.0)


def unitarity(ptm: PauliTransferMap) -> float:
    """Coherence of a channel: squared Frobenius norm of the traceless block
    over ``d^2 - 1``, normalized so the identity channel gives one."""
    block = ptm.traceless_block()
    return float(np.sum(block * block)) / (ptm.dim**2 - 1)


def purity_of(rho) -> float:
    """Rescaled purity ``(d tr(rho^2) - 1) / (d - 1)``: 1 for pure states,
    0 for the maximally mixed state."""
    matrix = np.asarray(getattr(rho, "matrix", rho), dtype=complex)
    d = matrix.shape[0]
    plain = float(np.trace(matrix @ matrix).real)
    return (d * plain - 1.0) / (d - 1.0)


def _purity_from_coefficients(coeffs: np.ndarray, dim: int) -> float:
    plain = float(np.sum(coeffs**2)) / dim
    return (dim * plain - 1.0) / (dim - 1.0)


def project_to_logical(ptm_ps: PauliTransferMap, iso: np.ndarray | None = None) -> PauliTransferMap:
    """Compress a physical-space transfer map to the logical qubit.

    For a leakage-free channel this commutes with computing the logical map
    directly.  The logical Pauli operators are the encoded ``iso sigma iso†``.
    """
    if ptm_ps.dim != 4:
        raise ValueError("expected a physical-space (dimension 4) transfer map")
    iso = braid_space.logical_encoding() if iso is None else iso
    ps_basis = pauli_basis(2)
    embedded = [iso @ p @ dagger(iso) for p in PAULI_1Q]
    coords = np.array(
        [[np.trace(p_k @ e).conj() / 4 for p_k in ps_basis] for e in embedded]
    )  # coords[i, k]: PS-Pauli coordinates of embedded logical Pauli i
    mat = np.real(2.0 * coords.conj() @ ptm_ps.matrix @ coords.T)
    return PauliTransferMap(mat, 2)


# ---------------------------------------------------------------------------
# Synthetic noise channels (transfer-map form)
# ---------------------------------------------------------------------------


def identity_ptm(dim: int) -> PauliTransferMap:
    return PauliTransferMap(np.eye(dim**2), dim)


def depolarizing_ptm(dim: int, prob: float) -> PauliTransferMap:
    mat = np.eye(dim**2) * (1.0 - prob)
    mat[0, 0] = 1.0
    return PauliTransferMap(mat, dim)


def dephasing_ptm(decay: float) -> PauliTransferMap:
    """Single-qubit z-basis dephasing with off-diagonal factor ``decay``."""
    return PauliTransferMap(np.diag([1.0, decay, decay, 1.0]), 2)


def depolarizing_fidelity(dim: int, prob: float) -> float:
    """Average gate fidelity of the depolarizing channel against identity."""
    return 1.0 - prob * (dim - 1) / dim


# ---------------------------------------------------------------------------
# Clifford group
# ---------------------------------------------------------------------------


_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_PHASE_S = np.array([[1, 0], [0, 1j]], dtype=complex)


def _phase_canonical(u: np.ndarray) -> np.ndarray:
    flat = u.flatten()
    pivot = flat[np.argmax(np.abs(flat) > 1e-9)]
    return u * (abs(pivot) / pivot)


class CliffordGroup:
    """The 24-element single-qubit Clifford group modulo global phase.

    Generated by closure from the Hadamard and the quarter-phase gate; each
    element also carries a physical-space extension acting as the identity on
    the complement of the logical subspace.
    """

    def __init__(self) -> None:
        seen: list[np.ndarray] = [np.eye(2, dtype=complex)]
        frontier = [np.eye(2, dtype=complex)]
        while frontier:
            nxt = []
            for u in frontier:
                for g in (_HADAMARD, _PHASE_S):
                    cand = _phase_canonical(g @ u)
                    # dedup tolerance must sit well above the sqrt noise
                    # floor of the phase distance (~1e-8 for equal matrices)
                    if all(phase_distance(cand, v) > 1e-6 for v in seen):
                        seen.append(cand)
                        nxt.append(cand)
            frontier = nxt
        if len(seen) != 24:
            raise AssertionError(f"Clifford closure produced {len(seen)} elements, expected 24")
        self.elements: tuple[np.ndarray, ...] = tuple(seen)
        self._inverse = tuple(self.find(dagger(u)) for u in self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def find(self, u: np.ndarray, tol: float = 1e-6) -> int:
        """Index of the group element equal to ``u`` up to phase."""
        dists = [phase_distance(u, v) for v in self.elements]
        i = int(np.argmin(dists))
        if dists[i] > tol:
            raise ValueError(f"matrix is not a Clifford element (distance {dists[i]:.3e})")
        return i

    def nearest(self, u: np.ndarray) -> int:
        """Index of the closest group element (no tolerance check)."""
        return int(np.argmin([phase_distance(u, v) for v in self.elements]))

    def inverse_index(self, index: int) -> int:
        return self._inverse[index]

    def ps_extension(self, index: int, iso: np.ndarray | None = None) -> np.ndarray:
        iso = braid_space.logical_encoding() if iso is None else iso
        c = self.elements[index]
        return iso @ c @ dagger(iso) + (np.eye(4) - iso @ dagger(iso))


# ---------------------------------------------------------------------------
# Randomized and purity benchmarking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NoisyGate:
    """A gate as simulated in a benchmarking sequence: its ideal unitary (for
    recovery bookkeeping) and the transfer map actually applied."""

    unitary: np.ndarray
    ptm: PauliTransferMap

    @classmethod
    def ideal(cls, unitary: np.ndarray) -> "NoisyGate":
        return cls(unitary, ptm_of_unitary(unitary))

    @classmethod
    def with_noise(cls, unitary: np.ndarray, noise: PauliTransferMap) -> "NoisyGate":
        return cls(unitary, noise.compose(ptm_of_unitary(unitary)))


@dataclass(frozen=True)
class GateSet:
    """Clifford gate set prepared for sequence protocols in one space."""

    dim: int
    group: CliffordGroup
    gates: tuple[NoisyGate, ...]          # one per group element, same order
    prep: np.ndarray                      # Pauli coefficients of the initial state
    measure: np.ndarray                   # Pauli coefficients of the survival effect
    spam_ptm: PauliTransferMap | None = None

    def survival(self, coeffs: np.ndarray) -> float:
        return float(self.measure @ coeffs) / self.dim


def logical_gateset(
    noise: PauliTransferMap | None = None,
    group: CliffordGroup | None = None,
    spam_ptm: PauliTransferMap | None = None,
) -> GateSet:
    """Gate set acting directly on the logical qubit (d = 2)."""
    group = group or CliffordGroup()
    noise = noise or identity_ptm(2)
    gates = tuple(NoisyGate.with_noise(u, noise) for u in group.elements)
    zero = np.zeros((2, 2), dtype=complex)
    zero[0, 0] = 1.0
    coeffs = state_coefficients(zero)
    return GateSet(2, group, gates, coeffs, coeffs, spam_ptm)


def physical_gateset(
    noise: PauliTransferMap | None = None,
    group: CliffordGroup | None = None,
    spam_ptm: PauliTransferMap | None = None,
) -> GateSet:
    """Gate set of encoded Cliffords on the two-qubit physical space (d = 4).

    Gates act as the logical Clifford on the code subspace and as the
    identity on its complement; preparation and readout use the encoded
    ``|0_L>``.
    """
    group = group or CliffordGroup()
    noise = noise or identity_ptm(4)
    iso = braid_space.logical_encoding()
    gates = tuple(
        NoisyGate.with_noise(group.ps_extension(i, iso), noise) for i in range(len(group))
    )
    zero_l = np.outer(iso[:, 0], iso[:, 0].conj())
    coeffs = state_coefficients(zero_l)
    return GateSet(4, group, gates, coeffs, coeffs, spam_ptm)


def rng_for(seed: int, task_index: int) -> np.random.Generator:
    """Counter-based generator stream for task ``task_index`` of a master
    seed; identical whether tasks run serially or in parallel."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, task_index], dtype=np.uint64)))


@dataclass(frozen=True)
class DecayFit:
    """Exponential-decay fit result with the per-length statistics."""

    a: float
    b: float
    rate: float
    m_values: tuple[int, ...]
    means: tuple[float, ...]
    stddevs: tuple[float, ...]
    residual: float
    model: str  # "rb": A + B r^m, "pb": A + B r^(m-1)

    def to_dict(self) -> dict:
        return {
            "A": self.a,
            "B": self.b,
            "rate": self.rate,
            "residual": self.residual,
            "model": self.model,
        }

    def to_csv(self, sequences_per_length: int) -> str:
        """Decay statistics as CSV with columns ``m, mean, stddev, k``."""
        lines = ["m,mean,stddev,k"]
        for m, mean, std in zip(self.m_values, self.means, self.stddevs):
            lines.append(f"{m},{mean!r},{std!r},{sequences_per_length}")
        return "\n".join(lines) + "\n"


class FitDivergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


def fit_decay(
    m_values: Sequence[int],
    means: Sequence[float],
    stddevs: Sequence[float],
    model: str = "rb",
) -> DecayFit:
    """Nonlinear least squares of ``A + B r^m`` (or ``A + B r^(m-1)`` for
    purity curves) with the documented initial guesses."""
    m = np.asarray(m_values, dtype=float)
    y = np.asarray(means, dtype=float)
    exponent = m if model == "rb" else m - 1.0

    if float(np.ptp(y)) < 1e-9:
        # flat data: no decay information; rate 1 by convention
        return DecayFit(0.0, float(y.mean()), 1.0, tuple(int(v) for v in m_values),
                        tuple(float(v) for v in means), tuple(float(v) for v in stddevs),
                        float(np.sqrt(np.mean((y - y.mean()) ** 2))), model)

    # initial rate from a log-linear regression of (mean - A_guess)
    a_guess, b_guess = 0.5, 0.5
    shifted = np.clip(y - a_guess, 1e-6, None)
    slope = np.polyfit(exponent, np.log(shifted), 1)[0]
    r_guess = float(np.clip(np.exp(slope), 1e-4, 1.0 - 1e-9))

    def curve(x, a, b, r):
        return a + b * np.power(r, x)

    try:
        with warnings.catch_warnings():
            # near-flat data makes the covariance singular; we report our own
            # residual instead of using it
            warnings.simplefilter("ignore", OptimizeWarning)
            params, _ = curve_fit(
                curve, exponent, y,
                p0=[a_guess, b_guess, r_guess],
                bounds=([-1.0, -2.0, 1e-9], [1.0, 2.0, 1.0]),
                maxfev=20000,
            )
    except (RuntimeError, ValueError) as exc:
        residual = float(np.sqrt(np.mean((y - y.mean()) ** 2)))
        raise FitDivergenceError(f"decay fit failed to converge: {exc}", residual) from exc

    a, b, rate = (float(p) for p in params)
    residual = float(np.sqrt(np.mean((curve(exponent, a, b, rate) - y) ** 2)))
    return DecayFit(a, b, rate, tuple(int(v) for v in m_values),
                    tuple(float(v) for v in means), tuple(float(v) for v in stddevs),
                    residual, model)


def _run_sequences(
    gateset: GateSet,
    m_values: Sequence[int],
    k: int,
    seed: int,
    interleave: NoisyGate | None,
    recovery: bool,
) -> tuple[np.ndarray, np.ndarray]:
    """Survival (or purity) statistics over random Clifford sequences.

    Returns per-length means and standard deviations: survival probabilities
    when ``recovery`` is set (RB), rescaled purities otherwise (PB).
    """
    group = gateset.group
    means, stds = [], []
    for mi, m in enumerate(m_values):
        values = []
        for ki in range(k):
            rng = rng_for(seed, mi * 100_000 + ki)
            indices = rng.integers(0, len(group), size=m)
            coeffs = gateset.prep.copy()
            if gateset.spam_ptm is not None:
                coeffs = gateset.spam_ptm.matrix @ coeffs
            ideal = np.eye(gateset.dim, dtype=complex)
            for idx in indices:
                gate = gateset.gates[idx]
                coeffs = gate.ptm.matrix @ coeffs
                ideal = gate.unitary @ ideal
                if interleave is not None:
                    coeffs = interleave.ptm.matrix @ coeffs
                    ideal = interleave.unitary @ ideal
            if recovery:
                if gateset.dim == 2:
                    rec_idx = group.nearest(dagger(ideal))
                else:
                    iso = braid_space.logical_encoding()
                    rec_idx = group.nearest(dagger(dagger(iso) @ ideal @ iso))
                rec = gateset.gates[rec_idx]
                coeffs = rec.ptm.matrix @ coeffs
                values.append(gateset.survival(coeffs))
            else:
                values.append(_purity_from_coefficients(coeffs, gateset.dim))
        values = np.asarray(values)
        means.append(values.mean())
        stds.append(values.std(ddof=1) if k > 1 else 0.0)
    return np.asarray(means), np.asarray(stds)


def reference_fidelity_from_rate(rate: float, dim: int) -> float:
    """Per-gate average fidelity from an RB decay rate:
    ``1 - F = (1 - f)(d - 1)/d``."""
    return 1.0 - (1.0 - rate) * (dim - 1) / dim


def rb_reference(
    gateset: GateSet, m_values: Sequence[int] = DEFAULT_M_GRID,
    k: int = DEFAULT_SEQUENCES, seed: int = 0,
) -> DecayFit:
    """Reference randomized benchmarking: random Cliffords plus the inverting
    recovery gate, survival of the initial state fitted to ``A + B f^m``."""
    means, stds = _run_sequences(gateset, m_values, k, seed, None, recovery=True)
    return fit_decay(m_values, means, stds, model="rb")


@dataclass(frozen=True)
class InterleavedResult:
    fit: DecayFit
    reference: DecayFit
    f_rb: float
    warnings: tuple[str, ...] = ()


def rb_interleaved(
    target: NoisyGate,
    gateset: GateSet,
    m_values: Sequence[int] = DEFAULT_M_GRID,
    k: int = DEFAULT_SEQUENCES,
    seed: int = 0,
    reference: DecayFit | None = None,
) -> InterleavedResult:
    """Interleaved RB of a target gate.

    The target follows every random Clifford; the gate fidelity comes from
    ``1 - F_RB = (1 - f_int/f)(d - 1)/d`` against the reference decay."""
    if reference is None:
        reference = rb_reference(gateset, m_values, k, seed)
    means, stds = _run_sequences(gateset, m_values, k, seed + 1, target, recovery=True)
    fit = fit_decay(m_values, means, stds, model="rb")
    warnings = ()
    if fit.rate > reference.rate:
        warnings = ("interleaved decay exceeds reference: estimated infidelity is negative within noise",)
    d = gateset.dim
    f_rb = 1.0 - (1.0 - fit.rate / reference.rate) * (d - 1) / d
    return InterleavedResult(fit, reference, f_rb, warnings)


@dataclass(frozen=True)
class PurityResult:
    fit: DecayFit                 # rate is the unitarity estimate u
    incoherent_per_gate: float    # (1 - sqrt(u)) (d-1)/d


def pb_run(
    gateset: GateSet,
    interleave: NoisyGate | None = None,
    m_values: Sequence[int] = DEFAULT_M_GRID,
    k: int = DEFAULT_SEQUENCES,
    seed: int = 0,
) -> PurityResult:
    """Purity benchmarking: sequences without recovery, rescaled purity
    fitted to ``A + B u^(m-1)``; the incoherent error per segment follows
    from ``1 - e_inc = 1 - (1 - sqrt(u))(d - 1)/d``."""
    means, stds = _run_sequences(gateset, m_values, k, seed, interleave, recovery=False)
    fit = fit_decay(m_values, means, stds, model="pb")
    d = gateset.dim
    incoherent = (1.0 - math.sqrt(max(fit.rate, 0.0))) * (d - 1) / d
    return PurityResult(fit, incoherent)


@dataclass(frozen=True)
class ErrorBudget:
    total_infidelity: float
    incoherent: float
    coherent: float
    warnings: tuple[str, ...] = ()


def error_budget(
    rb_int: InterleavedResult,
    pb_ref: PurityResult,
    pb_int: PurityResult,
    dim: int = 2,
    tolerance: float = 5e-3,
) -> ErrorBudget:
    """Split the interleaved-RB infidelity into incoherent and coherent parts.

    The incoherent share of the target gate is
    ``(1 - sqrt(u_int/u_ref))(d - 1)/d``; the coherent share is the remainder
    of the RB infidelity.  ``dim`` must match the space the fits were
    produced in."""
    u_ref = max(pb_ref.fit.rate, 1e-12)
    u_int = max(pb_int.fit.rate, 0.0)
    ratio = u_int / u_ref
    incoherent = (1.0 - math.sqrt(max(ratio, 0.0))) * (dim - 1) / dim
    total = 1.0 - rb_int.f_rb
    coherent = total - incoherent
    warnings = tuple(rb_int.warnings)
    if ratio > 1.0 + tolerance:
        warnings += ("interleaved purity decays slower than reference beyond tolerance",)
    if coherent < -tolerance:
        warnings += (f"coherent component {coherent:.4f} negative beyond tolerance",)
    return ErrorBudget(total, incoherent, coherent, warnings)
