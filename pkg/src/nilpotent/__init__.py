from src.nilpotent.partitions import Partition, even_type_partitions, partition_lists, partitions
from src.nilpotent.jordan import (Chain, EigenspaceNormalForm, NormalFormBasis, associated_partitions, build_nilpotent,
                                  conjugacy_test, conjugator, eigenspace_normal_forms, normal_form_basis)
from src.nilpotent.ab_diagrams import (GOLDEN_TABLE, AbDiagram, AbTableRow, MeasuredDims, OrbitDimensions,
                                       Realization, ab_table, diagram_from_map, enumerate_ab_diagrams,
                                       measured_orbit_dims, o_orbit_dim, orbit_dim, realize, sp_orbit_dim)
