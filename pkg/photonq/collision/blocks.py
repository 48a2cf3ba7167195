"""Collision unitaries and their decomposition into the sixteen system blocks.

The interaction space is C^2 (right chain ancilla) x C^2 (left chain ancilla) x C^d. A block
V[out, in] is the system operator <out|U|in> for two-bit ancilla labels such as "10"
(right ancilla excited, left ancilla in vacuum).
"""

from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..model import SystemModel
from ..numerics import matrix_exponential
from ..utils import LOGGER, ModelConfigurationError

__all__ = (
    "BlockMode",
    "VBlocks",
    "LABELS",
    "label_index",
    "exact_collision_unitary",
    "first_order_blocks",
    "blocks_from_unitary",
    "collision_blocks",
)

BlockMode = Literal["exact", "first-order"]
LABELS = ("00", "01", "10", "11")

_SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |1><0|
_SIGMA_MINUS = _SIGMA_PLUS.T.copy()
_I2 = np.eye(2, dtype=complex)


def label_index(label: str | int) -> int:
    """Index of a two-bit ancilla label, "i1i2" -> 2 * i1 + i2."""
    if isinstance(label, int | np.integer):
        if not 0 <= label < 4:
            raise ModelConfigurationError(f"invalid ancilla label index {label}")
        return int(label)
    if label not in LABELS:
        raise ModelConfigurationError(f"invalid ancilla label {label!r}")
    return 2 * int(label[0]) + int(label[1])


@dataclass(frozen=True, slots=True)
class VBlocks:
    """The sixteen d x d blocks of a collision unitary, stored as an array [out, in, d, d]."""

    blocks: np.ndarray
    tau: float
    mode: str

    def __post_init__(self):  # noqa
        blocks = np.array(self.blocks, dtype=complex)
        if blocks.ndim != 4 or blocks.shape[:2] != (4, 4) or blocks.shape[2] != blocks.shape[3]:
            raise ModelConfigurationError(f"invalid block array of shape {blocks.shape}")
        blocks.setflags(write=False)
        object.__setattr__(self, "blocks", blocks)

    @property
    def dim(self) -> int:  # noqa
        return self.blocks.shape[2]

    def __getitem__(self, key: tuple[str | int, str | int]) -> np.ndarray:
        """Block V[out, in], e.g. `blocks["10", "00"]`."""
        out, inp = key
        return self.blocks[label_index(out), label_index(inp)]

    def assemble(self) -> np.ndarray:
        """The 4d x 4d operator with these blocks."""
        d = self.dim
        return self.blocks.transpose(0, 2, 1, 3).reshape(4 * d, 4 * d)

    def unitarity_defect(self) -> float:
        """Spectral norm of U^dagger U - I for the assembled operator."""
        U = self.assemble()
        return float(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0]), 2))


def _check_tau(tau: float):
    if not tau > 0:
        raise ModelConfigurationError(f"time step must be positive, got {tau}")


def exact_collision_unitary(model: SystemModel, tau: float) -> np.ndarray:
    """exp(-i tau H_k) on C^2 x C^2 x C^d.

    H_k = H + (i / sqrt(tau)) sum_l (sigma+_l x L_l - sigma-_l x L_l^dagger), with the right
    chain ancilla as the first tensor factor.

    Args:
        model (SystemModel): the system.
        tau (float): collision time.

    Returns:
        np.ndarray: the 4d x 4d unitary.
    """
    _check_tau(tau)
    H, L1, L2 = model.H, model.L1, model.L2
    coupling = (
        np.kron(np.kron(_SIGMA_PLUS, _I2), L1)
        - np.kron(np.kron(_SIGMA_MINUS, _I2), L1.conj().T)
        + np.kron(np.kron(_I2, _SIGMA_PLUS), L2)
        - np.kron(np.kron(_I2, _SIGMA_MINUS), L2.conj().T)
    )
    Hk = np.kron(np.eye(4, dtype=complex), H) + (1j / np.sqrt(tau)) * coupling
    # Hk is Hermitian, so the exponential goes through the unitary Schur path
    Hk = (Hk + Hk.conj().T) / 2
    return matrix_exponential(Hk, -1j * tau)


def blocks_from_unitary(U: np.ndarray, tau: float = float("nan"), mode: str = "exact") -> VBlocks:
    """Split a 4d x 4d operator into its |i1 i2><i3 i4| blocks.

    Raises:
        ModelConfigurationError: if `U` is not square with a dimension divisible by 4.
    """
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1] or U.shape[0] % 4 != 0:
        raise ModelConfigurationError(f"cannot split a matrix of shape {U.shape} into blocks")
    d = U.shape[0] // 4
    return VBlocks(blocks=U.reshape(4, d, 4, d).transpose(0, 2, 1, 3), tau=tau, mode=mode)


def first_order_blocks(
    model: SystemModel,
    tau: float,
    cross_terms: Literal["listed", "symmetric"] = "listed",
) -> VBlocks:
    """Leading order expansion of the collision unitary in sqrt(tau).

    The diagonal blocks are 1 - i tau [H - (i/2)(...)] and the single excitation exchange
    blocks are +-sqrt(tau) L. The four double exchange blocks are O(tau). With
    `cross_terms="listed"` they are (tau/2) L1 L2, (tau/2) L1^dagger L2^dagger,
    (tau/2) L1^dagger L2 and (tau/2) L1 L2^dagger. With `"symmetric"` they are the exact
    second order terms (tau/2)(L1 L2 + L2 L1), (tau/2)(L1^dagger L2^dagger + L2^dagger L1^dagger),
    -(tau/2)(L1^dagger L2 + L2 L1^dagger) and -(tau/2)(L1 L2^dagger + L2^dagger L1), which keep
    the assembled operator unitary up to O(tau^{3/2}).

    Args:
        model (SystemModel): the system.
        tau (float): collision time.
        cross_terms (Literal["listed", "symmetric"], optional): double exchange convention. Defaults to "listed".

    Returns:
        VBlocks: the blocks, mode "first-order".
    """
    _check_tau(tau)
    if cross_terms not in ("listed", "symmetric"):
        raise ModelConfigurationError(f"unknown cross term convention {cross_terms!r}")
    d = model.dim
    Id = np.eye(d, dtype=complex)
    H, L1, L2 = model.H, model.L1, model.L2
    L1d, L2d = L1.conj().T, L2.conj().T
    s = np.sqrt(tau)

    def diagonal(first: np.ndarray, second: np.ndarray) -> np.ndarray:
        return Id - 1j * tau * (H - 0.5j * (first + second))

    V = np.zeros((4, 4, d, d), dtype=complex)
    i00, i01, i10, i11 = (label_index(label) for label in LABELS)
    V[i00, i00] = diagonal(L1d @ L1, L2d @ L2)
    V[i01, i01] = diagonal(L1d @ L1, L2 @ L2d)
    V[i10, i10] = diagonal(L1 @ L1d, L2d @ L2)
    V[i11, i11] = diagonal(L1 @ L1d, L2 @ L2d)
    V[i00, i01] = V[i10, i11] = -s * L2d
    V[i00, i10] = V[i01, i11] = -s * L1d
    V[i01, i00] = V[i11, i10] = s * L2
    V[i10, i00] = V[i11, i01] = s * L1
    if cross_terms == "listed":
        V[i11, i00] = 0.5 * tau * L1 @ L2
        V[i00, i11] = 0.5 * tau * L1d @ L2d
        V[i01, i10] = 0.5 * tau * L1d @ L2
        V[i10, i01] = 0.5 * tau * L1 @ L2d
    else:
        V[i11, i00] = 0.5 * tau * (L1 @ L2 + L2 @ L1)
        V[i00, i11] = 0.5 * tau * (L1d @ L2d + L2d @ L1d)
        V[i01, i10] = -0.5 * tau * (L1d @ L2 + L2 @ L1d)
        V[i10, i01] = -0.5 * tau * (L1 @ L2d + L2d @ L1)
    return VBlocks(blocks=V, tau=tau, mode="first-order")


def collision_blocks(model: SystemModel, tau: float, mode: BlockMode = "first-order") -> VBlocks:
    """Blocks of the requested mode: "exact" (matrix exponential) or "first-order".

    Raises:
        ModelConfigurationError: on an unknown mode.
    """
    if mode == "exact":
        LOGGER.debug(f"exact collision unitary: d={model.dim}, tau={tau:.3g}")
        return blocks_from_unitary(exact_collision_unitary(model, tau), tau=tau, mode="exact")
    if mode == "first-order":
        return first_order_blocks(model, tau)
    raise ModelConfigurationError(f"unknown block mode {mode!r}")
