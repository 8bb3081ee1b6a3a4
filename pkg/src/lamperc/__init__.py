"""Spectra of lamplighter random walks and percolation clusters.

Computes Plancherel-measure moments of switch-walk-switch lamplighter walks,
spectra of absorbing walks on percolation animals, and cross-checks the
identity between the two by independent oracles (convolution powers, range
path sums, animal sums, Monte Carlo).
"""

from ._accel import USE_NUMBA, backend_name
from .animals import (Animal, BondAnimal, ClusterSample, animal_weight,
                      bond_animal_weight, enumerate_bond_animals,
                      enumerate_site_animals, finite_mass, make_bond_animal,
                      make_site_animal, sample_cluster)
from .annealed import (AnnealedMeasure, VerifyReport, annealed_moments_by_animals,
                       annealed_moments_mc, annealed_spectral_measure,
                       lamplighter_moments_exact, range_path_sum, verify_identity)
from .groups import (CayleyBall, GroupOracle, GroupError, LampGroup,
                     ResourceCapError, ball, cyclic_lamp_group, make_group)
from .spectra import (EigenSystem, SpectralMeasure, SubMarkovMatrix, build_PA,
                      eigensolve, point_spectrum, return_moments,
                      rooted_spectral_measure)
from .wreath import (WreathMeasure, abelian_stabilizer_diagonalize,
                     build_mu_tilde, build_mu_tilde_edge, check_orthogonality,
                     convolve, intertwine_check, partial_isometry_products,
                     projection_measure, sinc_measure, sinc_selfconv_residual)

__version__ = "0.1.0"
