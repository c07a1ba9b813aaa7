"""t-product algebra for third-order tensors.

T-eigenvalues, pseudospectra, eigenvalue perturbation bounds and the
t-exponential, all computed face by face after a DFT along the third mode.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .tensor_core import (Tensor3, BlockCirculant, bcirc, unfold, fold, tprod,
                          conj_transpose, transpose, identity_tensor, t_inverse,
                          tensor_norm, is_hermitian, is_normal, is_f_diagonal)
from .transform import FaceSet, to_faces, from_faces, face_map
from .spectral import (TSpectrum, TSchur, t_eigenvalues, generalized_t_eigenvalues,
                       t_schur, f_diagonalize_normal, spectral_variation, match_spectra)
from .pseudospectra import (PseudoGrid, resolvent_quantity, pseudo_grid, membership,
                            perturbation_witness, check_pseudo_properties,
                            bauer_fike_inclusion_check)
from .perturbation import (DiskSet, BoundReport, gershgorin_disks, bauer_fike_bound,
                           generalized_bf_bound, kahan_regions)
from .ode import (OdeSolution, WronskianTrace, t_exp, solve_ivp, superposition_check,
                  wronskian, real_solution_split)
from .fileio import save_tensor, load_tensor
from .examples import gen_example
