import logging
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from ttspin.services.spinpair.fano import DensityMatrix4, FanoState, assemble_density
from ttspin.settings import settings
from ttspin.utils.constants import SIGMA_YY
from ttspin.utils.errors import NonPhysicalState, PhysicalityViolation

logger = logging.getLogger(__name__)


def min_eigenvalue(rho: DensityMatrix4) -> float:
    """Smallest eigenvalue of the matrix."""
    return float(rho.eigenvalues()[0])


def is_physical(rho: DensityMatrix4, eps: Optional[float] = None) -> bool:
    """True when every eigenvalue is at least -eps (settings.PHYSICALITY_EPS by default)."""
    return min_eigenvalue(rho) >= -(settings.PHYSICALITY_EPS if eps is None else eps)


def _clamped_spectrum(rho: DensityMatrix4) -> Tuple[np.ndarray, np.ndarray]:
    """
    Diagonalize a physical matrix, clamping round-off negative eigenvalues to zero.

    Args:
        rho (DensityMatrix4): Matrix expected to be positive semidefinite.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Clamped eigenvalues and eigenvectors.

    Raises:
        NonPhysicalState: If an eigenvalue is below -settings.PHYSICALITY_EPS.
    """
    values, vectors = np.linalg.eigh(rho.entries)
    if values[0] < -settings.PHYSICALITY_EPS:
        raise NonPhysicalState(f"eigenvalue {values[0]:.3e} below -{settings.PHYSICALITY_EPS:g}")
    if values[0] < 0.0:
        logger.debug("clamping eigenvalue %.3e to zero", values[0])
    return np.clip(values, 0.0, None), vectors


def psd_sqrt(rho: DensityMatrix4) -> np.ndarray:
    """Matrix square root of a physical state by spectral decomposition."""
    values, vectors = _clamped_spectrum(rho)
    return (vectors * np.sqrt(values)) @ vectors.conj().T


def spin_flip(rho: DensityMatrix4) -> np.ndarray:
    """Return (sigma_y x sigma_y) rho* (sigma_y x sigma_y)."""
    return SIGMA_YY @ rho.entries.conj() @ SIGMA_YY


def concurrence(rho: DensityMatrix4) -> float:
    """
    Wootters concurrence of a two-qubit state.

    The lambda_i are the square roots of the eigenvalues of rho * rho_tilde, which coincide with the eigenvalues of
    sqrt(sqrt(rho) rho_tilde sqrt(rho)).

    Args:
        rho (DensityMatrix4): Unit-trace physical state.

    Returns:
        float: max(0, l1 - l2 - l3 - l4) with l sorted in decreasing order.

    Raises:
        NonPhysicalState: If rho has an eigenvalue below the physicality tolerance.
    """
    _clamped_spectrum(rho)
    eigs = np.linalg.eigvals(rho.entries @ spin_flip(rho))
    lambdas = np.sort(np.sqrt(np.clip(eigs.real, 0.0, None)))[::-1]
    return float(max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]))


def concurrence_by_root(rho: DensityMatrix4) -> float:
    """Concurrence from the eigenvalues of sqrt(sqrt(rho) rho_tilde sqrt(rho)), the literal definition."""
    root = psd_sqrt(rho)
    inner = DensityMatrix4(entries=(root @ spin_flip(rho) @ root + (root @ spin_flip(rho) @ root).conj().T) / 2)
    lambdas = np.sqrt(np.clip(inner.eigenvalues(), 0.0, None))[::-1]
    return float(max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]))


def concurrence_tstate(c_diag: Sequence[float]) -> float:
    """
    Closed-form concurrence of an unpolarized state with diagonal correlations.

    Args:
        c_diag (Sequence[float]): (C1, C2, C3).

    Returns:
        float: (1/2) max(-C3 + |C1 + C2| - 1, 0) for C3 <= 0, else (1/2) max(C3 + |C1 - C2| - 1, 0).

    Raises:
        PhysicalityViolation: If C3 + |C1 + C2| - 1 or -C3 + |C1 - C2| - 1 exceeds settings.CLOSED_FORM_EPS.
    """
    c1, c2, c3 = (float(v) for v in c_diag)
    excess = max(c3 + abs(c1 + c2) - 1.0, -c3 + abs(c1 - c2) - 1.0)
    if excess > settings.CLOSED_FORM_EPS:
        raise PhysicalityViolation(f"correlations ({c1:.6g}, {c2:.6g}, {c3:.6g}) do not describe a physical state")
    if c3 <= 0.0:
        return 0.5 * max(-c3 + abs(c1 + c2) - 1.0, 0.0)
    return 0.5 * max(c3 + abs(c1 - c2) - 1.0, 0.0)


def partial_transpose(rho: DensityMatrix4) -> DensityMatrix4:
    """Transpose each 2x2 block, i.e. the partial transpose over the antiparticle."""
    blocks = rho.entries.reshape(2, 2, 2, 2)
    return DensityMatrix4(entries=blocks.transpose(0, 3, 2, 1).reshape(4, 4), basis_tag=rho.basis_tag)


def peres_horodecki(rho: DensityMatrix4) -> Tuple[float, bool]:
    """
    Peres-Horodecki test, necessary and sufficient for two qubits.

    Args:
        rho (DensityMatrix4): Physical state.

    Returns:
        Tuple[float, bool]: Smallest eigenvalue of the partial transpose and whether the state is entangled.

    Raises:
        NonPhysicalState: If rho itself is not physical.
    """
    _clamped_spectrum(rho)
    lowest = min_eigenvalue(partial_transpose(rho))
    return lowest, lowest < -settings.PHYSICALITY_EPS


def delta_marker(c: np.ndarray) -> float:
    """
    Entanglement marker (-C33 + |C11 + C22| - 1) / 2; positive values certify entanglement.

    Args:
        c (np.ndarray): Correlation matrix whose third axis plays the role of n (or z).

    Returns:
        float: The marker.
    """
    c = np.asarray(c, dtype=float)
    return 0.5 * (-c[2, 2] + abs(c[0, 0] + c[1, 1]) - 1.0)


def chsh_eigenvalues(c: np.ndarray) -> np.ndarray:
    """Eigenvalues of C^T C in decreasing order."""
    c = np.asarray(c, dtype=float)
    return np.sort(np.linalg.eigvalsh(c.T @ c))[::-1]


def chsh_value(c: np.ndarray) -> float:
    """
    Maximal CHSH expectation 2 sqrt(mu1 + mu2) from the two largest eigenvalues of C^T C.

    Args:
        c (np.ndarray): Correlation matrix.

    Returns:
        float: The Horodecki value; above 2 the inequality is violated.
    """
    mu = chsh_eigenvalues(c)
    return float(2.0 * np.sqrt(max(mu[0] + mu[1], 0.0)))


def chsh_mu(c: np.ndarray) -> float:
    """mu1 + mu2 - 1, i.e. tr(C^T C) minus its smallest eigenvalue minus one; positive iff CHSH is violated."""
    mu = chsh_eigenvalues(c)
    return float(mu[0] + mu[1] - 1.0)


def _unit(theta: float, phi: float) -> np.ndarray:
    """Unit vector from spherical angles."""
    return np.array([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])


def chsh_brute_force(c: np.ndarray, starts: int = 24, seed: int = 0) -> float:
    """
    Maximize the CHSH combination directly over measurement directions.

    For fixed b1, b2 the optimal a1, a2 are parallel to C(b1 + b2) and C(b1 - b2), so only the four angles of b1 and
    b2 are searched, from several random starts.

    Args:
        c (np.ndarray): Correlation matrix.
        starts (int): Number of random starting points.
        seed (int): Seed of the starting points.

    Returns:
        float: max over directions of |a1.C(b1 + b2) + a2.C(b1 - b2)|.
    """
    c = np.asarray(c, dtype=float)

    def negative(angles: np.ndarray) -> float:
        """Minus the CHSH value at the given angles of b1 and b2."""
        b1, b2 = _unit(angles[0], angles[1]), _unit(angles[2], angles[3])
        return -(np.linalg.norm(c @ (b1 + b2)) + np.linalg.norm(c @ (b1 - b2)))

    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(starts):
        start = rng.uniform([0.0, 0.0, 0.0, 0.0], [np.pi, 2 * np.pi, np.pi, 2 * np.pi])
        result = optimize.minimize(negative, start, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12})
        best = max(best, -result.fun)
    return float(best)


def witness_d(c: np.ndarray) -> Tuple[float, float]:
    """
    Opening-angle observable and the witness built from it.

    Args:
        c (np.ndarray): Correlation matrix.

    Returns:
        Tuple[float, float]: D = tr(C) / 3 and W = D + 1/3; W < 0 certifies entanglement.
    """
    d = float(np.trace(np.asarray(c, dtype=float))) / 3.0
    return d, d + 1.0 / 3.0


def concurrence_from_d(d: float) -> float:
    """Concurrence max(-1 - 3D, 0) / 2 of an axial state with C_perp < 0 and C_z <= 0."""
    return max(-1.0 - 3.0 * d, 0.0) / 2.0


def axial_delta(c_perp: float, c_z: float) -> float:
    """(-C_z + 2|C_perp| - 1) / 2, positive iff an unpolarized axial state is entangled."""
    return 0.5 * (-c_z + 2.0 * abs(c_perp) - 1.0)


def axial_chsh_mu(c_perp: float, c_z: float) -> float:
    """max(2 C_perp^2, C_perp^2 + C_z^2) - 1, positive iff an axial state violates CHSH."""
    return max(2.0 * c_perp**2, c_perp**2 + c_z**2) - 1.0


def axial_polarized_entangled(c_perp: float, c_z: float, bplus_z: float = 0.0, bminus_z: float = 0.0) -> bool:
    """Peres-Horodecki for axial states polarized along z: 4 C_perp^2 + (B+_z + B-_z)^2 - (1 + C_z)^2 > 0."""
    return 4.0 * c_perp**2 + (bplus_z + bminus_z) ** 2 - (1.0 + c_z) ** 2 > 0.0


def fidelity(rho: DensityMatrix4, sigma: DensityMatrix4) -> float:
    """
    Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Args:
        rho (DensityMatrix4): Physical state.
        sigma (DensityMatrix4): Physical state.

    Returns:
        float: Fidelity in [0, 1].
    """
    root = psd_sqrt(rho)
    inner = root @ sigma.entries @ root
    inner = DensityMatrix4(entries=(inner + inner.conj().T) / 2)
    return float(np.sum(np.sqrt(np.clip(inner.eigenvalues(), 0.0, None))) ** 2)


def project_physical(rho: DensityMatrix4) -> DensityMatrix4:
    """
    Clip negative eigenvalues to zero and restore unit trace.

    Args:
        rho (DensityMatrix4): Possibly non-physical Hermitian matrix.

    Returns:
        DensityMatrix4: A physical state.
    """
    values, vectors = np.linalg.eigh(rho.entries)
    values = np.clip(values, 0.0, None)
    projected = (vectors * values) @ vectors.conj().T
    projected = (projected + projected.conj().T) / 2
    return DensityMatrix4(entries=projected / np.trace(projected).real, basis_tag=rho.basis_tag)


def random_physical_state(rng: np.random.Generator, rank: Optional[int] = None) -> DensityMatrix4:
    """
    Random state obtained by mixing random pure states with Dirichlet weights.

    Args:
        rng (np.random.Generator): Source of randomness.
        rank (int, optional): Number of mixed pure states, drawn from 1..4 when omitted.

    Returns:
        DensityMatrix4: A physical state.
    """
    rank = int(rng.integers(1, 5)) if rank is None else rank
    kets = rng.normal(size=(rank, 4)) + 1j * rng.normal(size=(rank, 4))
    kets /= np.linalg.norm(kets, axis=1, keepdims=True)
    weights = rng.dirichlet(np.ones(rank))
    rho = sum(w * np.outer(k, k.conj()) for w, k in zip(weights, kets))
    return DensityMatrix4(entries=(rho + rho.conj().T) / 2)


def state_markers(state: FanoState) -> dict:
    """
    Every basis-independent marker of a state in one dictionary.

    Args:
        state (FanoState): Normalized or unnormalized state.

    Returns:
        dict: concurrence, Peres-Horodecki eigenvalue and verdict, delta, CHSH value, D and W.
    """
    g = state.normalized()
    rho = assemble_density(g)
    lowest, entangled = peres_horodecki(rho)
    d, w = witness_d(g.c)
    return {
        "concurrence": concurrence(rho),
        "ptMinEigenvalue": lowest,
        "entangled": entangled,
        "delta": delta_marker(g.c),
        "chsh": chsh_value(g.c),
        "chshViolated": chsh_value(g.c) > 2.0,
        "d": d,
        "w": w,
    }

