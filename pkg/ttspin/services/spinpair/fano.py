from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ttspin.settings import settings
from ttspin.utils.constants import BASIS_HELICITY, PAULI, SIGMA_0
from ttspin.utils.errors import DegenerateNormalization, DomainError

_LOCAL_PLUS = tuple(np.kron(s, SIGMA_0) for s in PAULI)
_LOCAL_MINUS = tuple(np.kron(SIGMA_0, s) for s in PAULI)
_CORRELATORS = tuple(tuple(np.kron(si, sj) for sj in PAULI) for si in PAULI)


def _frozen(values, shape: tuple) -> np.ndarray:
    """Return a read-only float copy of values with the given shape."""
    array = np.array(values, dtype=float).reshape(shape)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class FanoState:
    """
    Fano decomposition of a two-qubit operator R = a I + B+ . sigma x I + B- . I x sigma + C_ij sigma_i x sigma_j.

    The normalized form has a = 1 and describes rho = R / 4. The unnormalized form (a > 0) is an R-matrix whose
    trace 4a is proportional to a differential cross-section.

    Args:
        a (float): Coefficient of the identity.
        bplus (np.ndarray): Polarization 3-vector of the particle.
        bminus (np.ndarray): Polarization 3-vector of the antiparticle.
        c (np.ndarray): 3x3 spin correlation matrix.
        basis_tag (str): Spin basis the vectors are expressed in.
    """

    a: float = 1.0
    bplus: np.ndarray = field(default_factory=lambda: np.zeros(3))
    bminus: np.ndarray = field(default_factory=lambda: np.zeros(3))
    c: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))
    basis_tag: str = BASIS_HELICITY

    def __post_init__(self) -> None:
        """Freeze the arrays and check that every entry is finite."""
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "bplus", _frozen(self.bplus, (3,)))
        object.__setattr__(self, "bminus", _frozen(self.bminus, (3,)))
        object.__setattr__(self, "c", _frozen(self.c, (3, 3)))
        if not (
            np.isfinite(self.a)
            and np.all(np.isfinite(self.bplus))
            and np.all(np.isfinite(self.bminus))
            and np.all(np.isfinite(self.c))
        ):
            raise DomainError("Fano coefficients must be finite")

    @classmethod
    def from_correlations(
        cls,
        c: Sequence,
        bplus: Optional[Sequence] = None,
        bminus: Optional[Sequence] = None,
        basis_tag: str = BASIS_HELICITY,
    ) -> "FanoState":
        """Build a normalized state from its correlation matrix and optional polarizations."""
        return cls(
            a=1.0,
            bplus=np.zeros(3) if bplus is None else bplus,
            bminus=np.zeros(3) if bminus is None else bminus,
            c=c,
            basis_tag=basis_tag,
        )

    def normalized(self) -> "FanoState":
        """
        Divide every coefficient by a.

        Returns:
            FanoState: The physical-state form with a = 1.

        Raises:
            DegenerateNormalization: If a is not positive.
        """
        if self.a <= 0.0:
            raise DegenerateNormalization(f"normalization coefficient must be positive, got {self.a:.6g}")
        return FanoState(
            a=1.0,
            bplus=self.bplus / self.a,
            bminus=self.bminus / self.a,
            c=self.c / self.a,
            basis_tag=self.basis_tag,
        )

    def with_basis(self, basis_tag: str) -> "FanoState":
        """Return the same coefficients under another basis label."""
        return FanoState(a=self.a, bplus=self.bplus, bminus=self.bminus, c=self.c, basis_tag=basis_tag)

    @property
    def is_unpolarized(self) -> bool:
        """True when both polarization vectors vanish."""
        return not (np.any(self.bplus) or np.any(self.bminus))


@dataclass(frozen=True)
class DensityMatrix4:
    """
    Explicit 4x4 Hermitian matrix of a two-qubit state.

    Args:
        entries (np.ndarray): Complex 4x4 matrix in the basis |up up>, |up down>, |down up>, |down down>.
        basis_tag (str): Spin basis the matrix is expressed in.
    """

    entries: np.ndarray
    basis_tag: str = BASIS_HELICITY

    def __post_init__(self) -> None:
        """Freeze the matrix and check shape and hermiticity."""
        entries = np.array(self.entries, dtype=complex)
        if entries.shape != (4, 4):
            raise DomainError(f"density matrix must be 4x4, got shape {entries.shape}")
        if np.max(np.abs(entries - entries.conj().T)) > settings.ALGEBRA_EPS:
            raise DomainError("density matrix is not Hermitian")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def trace(self) -> float:
        """Real part of the trace."""
        return float(np.trace(self.entries).real)

    def eigenvalues(self) -> np.ndarray:
        """Ascending real eigenvalues."""
        return np.linalg.eigvalsh(self.entries)


def assemble_density(f: FanoState) -> DensityMatrix4:
    """
    Build rho = R / tr R from the Fano coefficients.

    For a normalized state this is (I + B+ . sigma x I + B- . I x sigma + C_ij sigma_i x sigma_j) / 4. Physicality
    is not checked here.

    Args:
        f (FanoState): Normalized or unnormalized coefficients.

    Returns:
        DensityMatrix4: The unit-trace matrix.
    """
    g = f.normalized()
    rho = np.eye(4, dtype=complex)
    for i in range(3):
        rho += g.bplus[i] * _LOCAL_PLUS[i] + g.bminus[i] * _LOCAL_MINUS[i]
        for j in range(3):
            rho += g.c[i, j] * _CORRELATORS[i][j]
    return DensityMatrix4(entries=rho / 4.0, basis_tag=g.basis_tag)


def extract_fano(rho: DensityMatrix4) -> FanoState:
    """
    Read the Fano coefficients back from a matrix.

    Args:
        rho (DensityMatrix4): A Hermitian matrix.

    Returns:
        FanoState: a = tr rho, B+_i = tr(rho sigma_i x I), B-_i = tr(rho I x sigma_i), C_ij = tr(rho sigma_i x sigma_j).
    """
    m = rho.entries
    bplus = [np.trace(m @ op).real for op in _LOCAL_PLUS]
    bminus = [np.trace(m @ op).real for op in _LOCAL_MINUS]
    c = [[np.trace(m @ op).real for op in row] for row in _CORRELATORS]
    return FanoState(a=rho.trace, bplus=bplus, bminus=bminus, c=c, basis_tag=rho.basis_tag)


def rotate(f: FanoState, o1: np.ndarray, o2: np.ndarray) -> FanoState:
    """
    Apply independent local rotations to both spins.

    Args:
        f (FanoState): State to rotate.
        o1 (np.ndarray): Orthogonal 3x3 matrix acting on the particle.
        o2 (np.ndarray): Orthogonal 3x3 matrix acting on the antiparticle.

    Returns:
        FanoState: C -> O1^T C O2, B+ -> O1^T B+, B- -> O2^T B-.
    """
    return FanoState(
        a=f.a,
        bplus=o1.T @ f.bplus,
        bminus=o2.T @ f.bminus,
        c=o1.T @ f.c @ o2,
        basis_tag=f.basis_tag,
    )


def mix(states: Sequence[FanoState], weights: Sequence[float]) -> FanoState:
    """
    Convex combination of normalized states.

    Args:
        states (Sequence[FanoState]): Components, normalized internally.
        weights (Sequence[float]): Non-negative weights, renormalized to sum 1.

    Returns:
        FanoState: The normalized mixture, tagged with the first component's basis.

    Raises:
        DegenerateNormalization: If the weights do not have a positive sum.
    """
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0.0) or w.sum() <= 0.0:
        raise DegenerateNormalization("mixture weights must be non-negative with a positive sum")
    w = w / w.sum()
    normalized = [s.normalized() for s in states]
    return FanoState(
        a=1.0,
        bplus=sum(wi * s.bplus for wi, s in zip(w, normalized)),
        bminus=sum(wi * s.bminus for wi, s in zip(w, normalized)),
        c=sum(wi * s.c for wi, s in zip(w, normalized)),
        basis_tag=normalized[0].basis_tag,
    )


def singlet() -> FanoState:
    """Spin-singlet state, C = -I."""
    return FanoState.from_correlations(-np.eye(3))


def maximally_mixed() -> FanoState:
    """Identity state I/4."""
    return FanoState.from_correlations(np.zeros((3, 3)))
