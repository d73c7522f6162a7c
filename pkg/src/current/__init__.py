from src.current.census import Census, ff_census
from src.current.strata import (RegularNilpotentStrata, StrataTable, StratumEntry, flatness_criterion,
                                mark_attained, regular_nilpotent_strata, strata_dims)
from src.current.truncated import (CurrentElement, CurrentVector, ResidueCheck, action_matrix, cyclic_generator,
                                   residue_commutant_check, sl2_basis, stabilizer_basis, stabilizer_dim,
                                   zero_rank_lift)
