"""Spectral rank, trace, Wedderburn-Artin and Shoda computations for
finite-dimensional semisimple complex algebras."""
from .algebra import (Algebra, Element, Spectrum, Subspace, commutator, is_invertible,
                      left_regular_matrix, membership, random_element, spectrum, subspace_dim,
                      subspace_span)
from .central import (equivalence_harness, pred_central, pred_commutators_trivial,
                      pred_corner_rank, pred_extremal_dims, pred_square_zero)
from .errors import (AlgebraMismatch, BadSpectralValue, CertificateFailed, ContourHitsSpectrum,
                     DecompositionFailed, DimensionError, InputError, NeedsDecomposition,
                     NotAProjection, NotInCommutatorSpace, NumericError, PreconditionError,
                     RankSamplingFailed, SocleError)
from .ideals import (corner_dim, ideal_basis, ideals_orthogonal, is_minimal_projection,
                     pairwise_dim, tensor_model_check)
from .linalg import BACKEND, DEFAULT_TOL, Tolerance
from .shoda import (CommutatorCert, corner_square_route, in_commutator_space, shoda_matrix,
                    shoda_socle, zero_diagonal_similarity)
from .spectral import (Diagonalization, SpectralData, diagonalize_maximal, is_in_E,
                       is_maximal_rank, multiplicity, rank, rank_direct, riesz_projection,
                       socle_decompose, spectral_data, spectral_rank, trace, vn_regular_witness)
from .wedderburn import (DualBases, WedderburnIso, dual_bases, enveloping_subalgebra,
                         matrix_units, separating_element, wedderburn_decompose)

__version__ = "0.1.0"
