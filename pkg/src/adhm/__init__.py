from src.adhm.datum import AdhmDatum, Flavor, GroupKind, GroupSpec, lie_dim
from src.adhm.dimensions import dim_m, dim_n, fibre_dim_over_base, gauge_lie_dim, stratum_dim
from src.adhm.moment import (act, action_matrix, check_equivariance, differential, infinitesimal_action,
                             is_costable, is_regular, is_stable, moment_map, orbit_dim, stabilizer_dim,
                             tangent_basis)
from src.adhm.spectrum import Divisor, characteristic_polynomial, eigenvalue_divisor, generalized_eigenspace
