"""Exchange expectations, the v-vector, and the W-operator family.

The three n = 3 exchange operators are repackaged as a frame
W1 = (pi_AB + pi_BC + pi_AC)/3, W2 = (2 pi_AB - pi_BC - pi_AC)/3,
W3 = (pi_BC - pi_AC)/sqrt(3); W1 commutes with and annihilates W2, W3,
while W2 and W3 anticommute with equal squares, so the rotated operator
W_theta = W2 cos(theta) + W3 sin(theta) has theta-independent square.
These identities are what make the double-cone membership test exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import group_core
from .eigh import SpectralDecomposition, symmetric_spectrum
from .errors import ContractError, ConvergenceError, ValidationError
from .states import MixedState, PureState

HERMITICITY_TOL = 1e-12
IMAG_RESIDUE_TOL = 1e-9
EIGENVECTOR_MATCH_GAP = 1e-8


def _as_operator(op, dim: int):
    """Return (mapping, matrix) with exactly one of them set."""
    if isinstance(op, group_core.PermutationOperator):
        if op.dim != dim:
            raise ValidationError(f"operator dimension {op.dim} does not match state {dim}")
        if not op.is_involution():
            raise ContractError("permutation operator is not Hermitian (not an involution)")
        return op.mapping, None
    M = np.asarray(op, dtype=np.complex128)
    if M.shape != (dim, dim):
        raise ValidationError(f"operator shape {M.shape} does not match state dimension {dim}")
    if np.abs(M - M.conj().T).max(initial=0.0) > HERMITICITY_TOL:
        raise ContractError("operator is not Hermitian within 1e-12")
    return None, M


def expectation(state: PureState | MixedState, op) -> float:
    """<Op> in a pure or mixed state; Op must be Hermitian.

    The imaginary residue is checked against 1e-9 and discarded.
    """
    if isinstance(state, PureState):
        mapping, M = _as_operator(op, state.dim)
        amps = state.amplitudes
        if mapping is not None:
            value = complex(np.vdot(amps, amps[mapping]))
        else:
            value = complex(np.vdot(amps, M @ amps))
    elif isinstance(state, MixedState):
        mapping, M = _as_operator(op, state.dim)
        rho = state.matrix
        if mapping is not None:
            value = complex(rho[np.arange(state.dim), mapping].sum())
        else:
            value = complex(np.trace(rho @ M))
    else:
        raise ValidationError(f"unsupported state type {type(state).__name__}")
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        raise ConvergenceError(f"expectation has imaginary residue {value.imag:.2e}")
    return float(value.real)


def v_vector(state: PureState | MixedState) -> np.ndarray:
    """Exchange expectations over canonical pairs; for n = 3 the order is
    (v_AB, v_BC, v_AC)."""
    ops = group_core.all_exchange_operators(state.n)
    return np.array([expectation(state, op) for op in ops])


@dataclass(frozen=True)
class WFrame:
    """The three n = 3 frame vectors and their operator matrices."""

    w1: np.ndarray
    w2: np.ndarray
    w3: np.ndarray
    W1: np.ndarray
    W2: np.ndarray
    W3: np.ndarray

    def vectors(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.w1, self.w2, self.w3)

    def matrices(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.W1, self.W2, self.W3)


@lru_cache(maxsize=1)
def w_frame() -> WFrame:
    w1 = np.array([1.0, 1.0, 1.0]) / 3.0
    w2 = np.array([2.0, -1.0, -1.0]) / 3.0
    w3 = np.array([0.0, 1.0, -1.0]) / np.sqrt(3.0)
    mats = [op.matrix() for op in group_core.all_exchange_operators(3)]
    W1, W2, W3 = (sum(c * M for c, M in zip(w, mats)) for w in (w1, w2, w3))
    for arr in (w1, w2, w3, W1, W2, W3):
        arr.setflags(write=False)
    return WFrame(w1, w2, w3, W1, W2, W3)


def _validate_angle(theta: float, upper: float, name: str, inclusive: bool = False) -> float:
    theta = float(theta)
    top = upper + 1e-12 if inclusive else upper
    if not np.isfinite(theta) or not (0.0 <= theta < top):
        bracket = "]" if inclusive else ")"
        raise ValidationError(f"{name} must lie in [0, {upper:.6g}{bracket}, got {theta}")
    return theta


def w_theta(theta: float) -> np.ndarray:
    """W2 cos(theta) + W3 sin(theta) for theta in [0, 2pi)."""
    theta = _validate_angle(theta, 2.0 * np.pi, "theta")
    frame = w_frame()
    return frame.W2 * np.cos(theta) + frame.W3 * np.sin(theta)


def parse_sign(value) -> int:
    if value in (+1, -1):
        return int(value)
    if value in ("+", "-"):
        return 1 if value == "+" else -1
    raise ValidationError(f"sign must be +1 or -1, got {value!r}")


@lru_cache(maxsize=None)
def _theta_eigenbasis(theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic (+1, -1) eigenvectors of W_theta: first column of each
    eigenvalue cluster from the fixed-order solver."""
    dec = symmetric_spectrum(w_theta(theta))
    try:
        plus = dec.eigenvectors[:, dec.cluster_slice(1.0, EIGENVECTOR_MATCH_GAP).start]
        minus = dec.eigenvectors[:, dec.cluster_slice(-1.0, EIGENVECTOR_MATCH_GAP).start]
    except ConvergenceError:
        raise ConvergenceError(
            "W_theta has no unit eigenvector; the eigensolver is broken"
        ) from None
    return plus, minus


def chi_state(theta: float, phi: float, s1, s2) -> PureState:
    """Boundary-family state cos(phi)|s1> + sin(phi)|psi_theta^(s2)>.

    |+1> / |-1> are the fully symmetric / antisymmetric three-box states and
    psi_theta^(+-) is a unit eigenvector of W_theta.  Every such state sits
    exactly on the monogamy region's surface.
    """
    from .states import named_state

    theta = _validate_angle(theta, 2.0 * np.pi, "theta")
    phi = _validate_angle(phi, np.pi / 2.0, "phi", inclusive=True)
    s1, s2 = parse_sign(s1), parse_sign(s2)
    base1 = named_state("sym_plus" if s1 > 0 else "antisym_minus").amplitudes
    plus, minus = _theta_eigenbasis(theta)
    base2 = plus if s2 > 0 else minus
    return PureState(3, np.cos(phi) * base1 + np.sin(phi) * base2)


def bunching_probability(v: float) -> float:
    """Probability (1 + v)/2 that the pair bunches in a two-port interference
    test; v = +1 is a perfect boson pair."""
    v = float(v)
    if not np.isfinite(v) or abs(v) > 1.0 + 1e-9:
        raise ValidationError(f"exchange expectation must lie in [-1, 1], got {v}")
    return (1.0 + v) / 2.0


def antibunching_probability(v: float) -> float:
    """Probability (1 - v)/2 of antibunching; v = -1 is a perfect fermion pair."""
    return bunching_probability(-float(v))


__all__ = [
    "expectation",
    "v_vector",
    "WFrame",
    "w_frame",
    "w_theta",
    "chi_state",
    "parse_sign",
    "bunching_probability",
    "antibunching_probability",
    "SpectralDecomposition",
    "symmetric_spectrum",
]
