"""Brute-force ground truth on dense statevectors, for small environments only.

Qubit convention: the system is qubit 0 (most significant bit of the
amplitude index); environment qubit k of an OverlapVector or PVector is
qubit k + 1.
"""

import logging
import math
from itertools import combinations

import numpy as np

from config.settings import (
    EIGEN_CLAMP,
    NORMALIZATION_TOL,
    ORACLE_MAX_ENV_QUBITS,
    ORACLE_MAX_KEPT_DIM,
)
from core.entropy_core import shannon_entropy, von_neumann_entropy
from models.overlap_model import FractionSelection, GhzJunkConfig, OverlapVector, PVector
from utils.validators import DomainError, NormalizationError, SizeGuardError

logger = logging.getLogger(__name__)

KET_0 = np.array([1.0, 0.0], dtype=complex)
KET_1 = np.array([0.0, 1.0], dtype=complex)
KET_PLUS = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)


class StateVector:
    """Normalised pure state of 1 + n_env qubits."""

    def __init__(self, amplitudes, n_env):
        amplitudes = np.asarray(amplitudes, dtype=complex).ravel()
        if amplitudes.size != 2 ** (n_env + 1):
            raise DomainError(f"{amplitudes.size} amplitudes do not describe {n_env + 1} qubits")
        norm = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm - 1.0) > NORMALIZATION_TOL:
            raise NormalizationError(f"state has squared norm {norm!r}")
        self.amplitudes = amplitudes
        self.n_env = n_env

    @property
    def n_qubits(self):
        return self.n_env + 1

    def tensor(self):
        return self.amplitudes.reshape([2] * self.n_qubits)


def _guard_env(n_env):
    if n_env > ORACLE_MAX_ENV_QUBITS:
        raise SizeGuardError(
            f"oracle refuses N={n_env} environment qubits (limit {ORACLE_MAX_ENV_QUBITS})"
        )


def _product(kets):
    state = np.array([1.0], dtype=complex)
    for ket in kets:
        state = np.kron(state, ket)
    return state


def _two_branch(branch_a, branch_b):
    """(|0>_S |A> + |1>_S |B>) / sqrt(2) for product branches given qubit by qubit."""
    amplitudes = (np.kron(KET_0, _product(branch_a)) + np.kron(KET_1, _product(branch_b)))
    return StateVector(amplitudes / math.sqrt(2.0), len(branch_a))


def build_state_ghz_junk(cfg: GhzJunkConfig, junk_state=KET_0) -> StateVector:
    _guard_env(cfg.n_total)
    junk = np.asarray(junk_state, dtype=complex)
    junk = junk / np.linalg.norm(junk)
    m, n = cfg.n_correlated, cfg.n_total
    branch_a = [KET_0] * m + [junk] * (n - m)
    branch_b = [KET_1] * m + [junk] * (n - m)
    return _two_branch(branch_a, branch_b)


def _icnot_branch(p):
    return np.array([math.sqrt(1.0 - p), math.sqrt(p)], dtype=complex)


def icnot_matrix(p):
    """Two-qubit gate applying sqrt(1-p) Z + sqrt(p) X to the target when the control is 1."""
    a, b = math.sqrt(1.0 - p), math.sqrt(p)
    return np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, a, b], [0, 0, b, -a]],
        dtype=complex,
    )


def apply_icnot(sv: StateVector, control, target, p) -> StateVector:
    gate = icnot_matrix(p).reshape(2, 2, 2, 2)
    psi = np.moveaxis(sv.tensor(), (control, target), (0, 1))
    psi = np.einsum("abcd,cd...->ab...", gate, psi)
    psi = np.moveaxis(psi, (0, 1), (control, target))
    return StateVector(psi.ravel(), sv.n_env)


def build_state_icnot(p: PVector, via_gates=False) -> StateVector:
    """State after every environment qubit met the system through an iCNOT,
    starting from |+>_S |0...0>."""
    _guard_env(p.n)
    if not via_gates:
        branch_a = [KET_0] * p.n
        branch_b = [_icnot_branch(v) for v in p.probs]
        return _two_branch(branch_a, branch_b)
    sv = StateVector(_product([KET_PLUS] + [KET_0] * p.n), p.n)
    for k, v in enumerate(p.probs):
        sv = apply_icnot(sv, 0, k + 1, v)
    return sv


def build_state_from_overlaps(ov: OverlapVector) -> StateVector:
    """A two-branch state with the given branch overlaps (iCNOT with p = 1 - o^2)."""
    return build_state_icnot(PVector(probs=tuple(1.0 - o * o for o in ov.overlaps)))


def partial_trace(sv: StateVector, keep):
    """Reduced density matrix over the kept qubits.

    `keep` holds absolute qubit indices (system = 0), as a FractionSelection or
    any iterable.
    """
    if isinstance(keep, FractionSelection):
        keep = keep.indices
    keep = sorted(set(keep))
    if any(not 0 <= q < sv.n_qubits for q in keep):
        raise DomainError(f"kept qubits {keep} out of range for {sv.n_qubits} qubits")
    dim = 2 ** len(keep)
    if dim > ORACLE_MAX_KEPT_DIM:
        raise SizeGuardError(f"kept dimension {dim} exceeds {ORACLE_MAX_KEPT_DIM}")
    traced = [q for q in range(sv.n_qubits) if q not in keep]
    psi = np.transpose(sv.tensor(), keep + traced).reshape(dim, -1)
    return psi @ psi.conj().T


def _env_qubits(sel: FractionSelection, n_env):
    sel.validate_for(n_env)
    return [k + 1 for k in sel.indices]


def entropy_of(sv: StateVector, qubits, direct=False):
    """von Neumann entropy of a subsystem.

    By default the smaller side is traced, using S(A) = S(rest) for a pure
    state. direct=True diagonalises the requested qubits themselves, so purity
    identities can be checked rather than assumed.
    """
    qubits = sorted(set(qubits))
    if not qubits or (len(qubits) == sv.n_qubits and not direct):
        return 0.0
    rest = [q for q in range(sv.n_qubits) if q not in qubits]
    side = qubits if direct or len(qubits) <= len(rest) else rest
    rho = partial_trace(sv, side)
    spectrum = np.linalg.eigvalsh(rho)
    spectrum = np.where(np.abs(spectrum) < EIGEN_CLAMP, 0.0, spectrum)
    return von_neumann_entropy(spectrum)


def qmi_brute(sv: StateVector, sel: FractionSelection, direct=False):
    """I(S:E_sel) = S(rho_S) + S(rho_E) - S(rho_SE) from reduced spectra."""
    env = _env_qubits(sel, sv.n_env)
    return (
        entropy_of(sv, [0], direct)
        + entropy_of(sv, env, direct)
        - entropy_of(sv, [0] + env, direct)
    )


def averaged_qmi_brute(sv: StateVector, l):
    if not 0 <= l <= sv.n_env:
        raise DomainError(f"fraction size l={l} outside [0, {sv.n_env}]")
    values = [
        qmi_brute(sv, FractionSelection(indices=subset))
        for subset in combinations(range(sv.n_env), l)
    ]
    return math.fsum(values) / len(values)


def computational_joint(sv: StateVector, sel: FractionSelection):
    """Outcome probabilities of measuring the system (rows) and the selected
    environment qubits (columns, binary order) in the computational basis."""
    env = _env_qubits(sel, sv.n_env)
    probs = np.abs(sv.tensor()) ** 2
    traced = tuple(q for q in range(sv.n_qubits) if q not in [0] + env)
    marginal = probs.sum(axis=traced) if traced else probs
    return marginal.reshape(2, 2 ** len(env))


def classical_mi_brute(joint):
    joint = np.asarray(joint, dtype=float)
    if joint.ndim != 2:
        raise DomainError("joint distribution must be a matrix")
    if np.any(joint < -NORMALIZATION_TOL):
        raise DomainError("joint distribution has negative entries")
    total = math.fsum(joint.ravel().tolist())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NormalizationError(f"joint distribution sums to {total!r}")
    joint = np.clip(joint, 0.0, None)
    return (
        shannon_entropy(joint.sum(axis=1))
        + shannon_entropy(joint.sum(axis=0))
        - shannon_entropy(joint.ravel())
    )


def three_outcome_joint(P):
    """Joint table of the three outcome classes: rows system 0/1, columns
    environment all-zero / anything else."""
    return np.array([[0.5, 0.0], [P, 0.5 - P]])


def spectrum_report(rho):
    """Eigenvalues of a reduced state, for JSON debugging dumps."""
    return {"eigenvalues": [float(v) for v in np.linalg.eigvalsh(rho)]}
