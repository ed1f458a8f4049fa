"""Small dense state-vector engine (1 to 3 qubits).

Register layout is big-endian: qubit 0 is the most significant bit of the
basis index, so for the protocol register (C, A, B) the amplitude of
|c a b> sits at index 4*c + 2*a + b.  All values are immutable; every
operation returns a new object.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .probs import JointProbs

NORM_TOL = 1e-12
FLUSH_TOL = 1e-15
MAX_QUBITS = 3

_R = 1.0 / math.sqrt(2.0)
# Rows are <+| and <-| in the computational basis.
_HADAMARD = np.array([[_R, _R], [_R, -_R]], dtype=complex)


class Basis(enum.Enum):
    COMPUTATIONAL = "computational"
    PLUS_MINUS = "plus_minus"

    @property
    def outcomes(self) -> tuple[int, int]:
        """Outcome labels, first basis vector first."""
        return (0, 1) if self is Basis.COMPUTATIONAL else (1, -1)

    @property
    def change(self) -> np.ndarray:
        """Matrix whose rows are the basis bras."""
        return np.eye(2, dtype=complex) if self is Basis.COMPUTATIONAL else _HADAMARD


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state of ``n_qubits`` qubits."""

    amps: np.ndarray

    def __post_init__(self):
        amps = _readonly(self.amps).reshape(-1)
        n = amps.size.bit_length() - 1
        if amps.size != 1 << n or not 1 <= n <= MAX_QUBITS:
            raise ValueError(f"state length {amps.size} is not 2**n for n in 1..{MAX_QUBITS}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("state contains non-finite amplitudes")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (|psi|^2 = {norm2!r})")
        object.__setattr__(self, "amps", amps)

    @classmethod
    def normalized(cls, amps) -> StateVector:
        a = np.asarray(amps, dtype=complex).reshape(-1)
        return cls(a / np.linalg.norm(a))

    @property
    def n_qubits(self) -> int:
        return self.amps.size.bit_length() - 1

    @property
    def norm2(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def tensor(self) -> np.ndarray:
        return self.amps.reshape((2,) * self.n_qubits)

    def __matmul__(self, other: StateVector) -> StateVector:
        """Tensor product, ``self`` occupying the leading register slots."""
        return StateVector(np.kron(self.amps, other.amps))

    def overlap(self, other: StateVector) -> complex:
        return complex(np.vdot(self.amps, other.amps))

    def allclose(self, other: StateVector, atol: float = NORM_TOL, up_to_phase: bool = False) -> bool:
        if self.n_qubits != other.n_qubits:
            return False
        if up_to_phase:
            return abs(abs(self.overlap(other)) - 1.0) <= atol
        return bool(np.allclose(self.amps, other.amps, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        return f"StateVector({np.array2string(self.amps, precision=6)})"


def ket(label: str) -> StateVector:
    """Product state from a label over {0, 1, +, -}, e.g. ``ket("+01")``."""
    single = {
        "0": np.array([1, 0], dtype=complex),
        "1": np.array([0, 1], dtype=complex),
        "+": np.array([_R, _R], dtype=complex),
        "-": np.array([_R, -_R], dtype=complex),
    }
    if not label or any(ch not in single for ch in label):
        raise ValueError(f"bad ket label {label!r}")
    amps = np.array([1], dtype=complex)
    for ch in label:
        amps = np.kron(amps, single[ch])
    return StateVector(amps)


def singlet() -> StateVector:
    """(|01> - |10>)/sqrt(2) on register (A, B)."""
    return StateVector(np.array([0.0, _R, -_R, 0.0], dtype=complex))


@dataclass(frozen=True, eq=False)
class SingleQubitUnitary:
    matrix: np.ndarray

    def __post_init__(self):
        m = _readonly(self.matrix)
        if m.shape != (2, 2):
            raise ValueError(f"single-qubit unitary must be 2x2, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("unitary contains non-finite entries")
        if not np.allclose(m.conj().T @ m, np.eye(2), rtol=0.0, atol=NORM_TOL):
            raise ValueError("matrix is not unitary")
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other: SingleQubitUnitary) -> SingleQubitUnitary:
        return SingleQubitUnitary(self.matrix @ other.matrix)


def clock_evolution(omega: float, dt: float) -> SingleQubitUnitary:
    """Clock-qubit propagator diag(exp(+i w dt), exp(-i w dt)).

    The |0> level picks up exp(+i w dt), matching the evolved singlet
    (exp(iwt)|01> - exp(-iwt)|10>)/sqrt(2).  Probabilities do not depend on
    this sign convention.
    """
    if not (math.isfinite(omega) and math.isfinite(dt)):
        raise ValueError("omega and dt must be finite")
    if dt < 0:
        raise ValueError(f"dt must be non-negative, got {dt!r}")
    phase = omega * dt
    return SingleQubitUnitary(np.diag([np.exp(1j * phase), np.exp(-1j * phase)]))


def _check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.n_qubits:
        raise IndexError(f"qubit {qubit} out of range for {state.n_qubits}-qubit register")


def _split(amps: np.ndarray, n_qubits: int, qubit: int) -> np.ndarray:
    """View the amplitudes as (left, qubit, right) so 2x2 matrices act by matmul."""
    return amps.reshape(1 << qubit, 2, 1 << (n_qubits - qubit - 1))


def _apply_matrix(state_tensor: np.ndarray, qubit: int, m: np.ndarray) -> np.ndarray:
    out = np.tensordot(m, state_tensor, axes=([1], [qubit]))
    return np.moveaxis(out, 0, qubit)


def apply_single(state: StateVector, qubit: int, u: SingleQubitUnitary) -> StateVector:
    _check_qubit(state, qubit)
    return StateVector((u.matrix @ _split(state.amps, state.n_qubits, qubit)).reshape(-1))


def proxy_matrix(n_qubits: int = 3) -> np.ndarray:
    """Matrix of the proxy interaction on a register whose first two slots are (C, A).

    In the +/- basis of both qubits it is a bit flip of C controlled on A
    being |->; in the computational basis that is P+_A (x) 1_C + P-_A (x) Z_C.
    """
    if not 2 <= n_qubits <= MAX_QUBITS:
        raise ValueError(f"proxy interaction needs 2..{MAX_QUBITS} qubits, got {n_qubits}")
    plus = np.outer(_HADAMARD[0], _HADAMARD[0].conj())
    minus = np.outer(_HADAMARD[1], _HADAMARD[1].conj())
    z = np.diag([1.0, -1.0]).astype(complex)
    ca = np.kron(np.eye(2), plus) + np.kron(z, minus)
    return np.kron(ca, np.eye(1 << (n_qubits - 2)))


def proxy_interaction(state: StateVector) -> StateVector:
    if state.n_qubits < 2:
        raise ValueError("proxy interaction needs a register (C, A, ...)")
    return StateVector(proxy_matrix(state.n_qubits) @ state.amps)


def _rotated(state: StateVector, qubit: int, basis: Basis) -> np.ndarray:
    _check_qubit(state, qubit)
    return basis.change @ _split(state.amps, state.n_qubits, qubit)


def born_probs(state: StateVector, qubit: int, basis: Basis) -> tuple[float, float]:
    weights = (np.abs(_rotated(state, qubit, basis)) ** 2).sum(axis=(0, 2))
    total = weights[0] + weights[1]
    return float(weights[0] / total), float(weights[1] / total)


def measure(state: StateVector, qubit: int, basis: Basis, draw: float) -> tuple[int, StateVector, float]:
    """Projective measurement of one qubit.

    The first basis outcome is selected iff ``draw < p_first``; with draw in
    [0, 1) a zero-probability branch is never chosen.  Returns the outcome
    label (+1/-1 or 0/1), the renormalized post-measurement state and the
    probability of the selected branch.
    """
    if not 0.0 <= draw < 1.0:
        raise ValueError(f"draw must lie in [0, 1), got {draw!r}")
    t = _rotated(state, qubit, basis)
    # flush first so a branch made only of rounding debris has weight exactly 0
    t[np.abs(t) < FLUSH_TOL] = 0.0
    weights = (np.abs(t) ** 2).sum(axis=(0, 2))
    p_first = float(weights[0] / (weights[0] + weights[1]))
    k = 0 if draw < p_first else 1
    prob = p_first if k == 0 else 1.0 - p_first

    t[:, 1 - k, :] = 0.0
    # basis.change is real orthogonal, so its transpose maps back
    collapsed = (basis.change.T @ t).reshape(-1)
    collapsed /= np.linalg.norm(collapsed)
    return basis.outcomes[k], StateVector(collapsed), prob


def joint_distribution(state: StateVector, qubit1: int, qubit2: int, basis: Basis) -> JointProbs:
    """Exact two-qubit outcome distribution, remaining qubits traced out."""
    if qubit1 == qubit2:
        raise ValueError("joint distribution needs two distinct qubits")
    _check_qubit(state, qubit1)
    _check_qubit(state, qubit2)
    t = state.tensor()
    t = _apply_matrix(t, qubit1, basis.change)
    t = _apply_matrix(t, qubit2, basis.change)
    t = np.moveaxis(t, (qubit1, qubit2), (0, 1))
    w = (np.abs(t) ** 2).reshape(2, 2, -1).sum(axis=2)
    w = w / w.sum()
    return JointProbs(float(w[0, 0]), float(w[0, 1]), float(w[1, 0]), float(w[1, 1]))
