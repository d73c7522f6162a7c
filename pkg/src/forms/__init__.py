from src.forms.bilinear import (BilinearSpace, FormKind, SplitEndo, adjoint, cayley_transform, in_group,
                                is_anti_self_adjoint, is_self_adjoint, isotropic, lie_algebra_basis,
                                orientation_reversing_element, orthogonal_complement, require_in_group,
                                residue_space, right_adjoint, self_adjoint_basis, split_endo, standard_space,
                                trace_pairing_gram, unipotent_exp, z_multiplication)
