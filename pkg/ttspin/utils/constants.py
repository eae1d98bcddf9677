import numpy as np

SIGMA_0 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y)

# Helicity basis index order used for every correlation matrix: (k, r, n).
K, R, N = 0, 1, 2
HELICITY_LABELS = ("k", "r", "n")
BEAM_LABELS = ("x", "y", "z")

BASIS_HELICITY = "helicity"
BASIS_BEAM = "beam"
BASIS_DIAGONAL = "diagonal"
BASIS_FICTITIOUS = "helicity-averaged(fictitious)"

F_QQBAR = 1.0 / 18.0

PDG_GLUON = 21
QUARK_FLAVORS = (1, 2, 3, 4, 5)
