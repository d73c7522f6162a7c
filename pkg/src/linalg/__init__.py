from src.linalg.fields import QQ, ExactScalar, Field, FpElement
from src.linalg.matrix import Mat, anticommutator, commutator
from src.linalg.elimination import (column_space_basis, express_in_basis, in_column_span, inverse,
                                    left_nullspace, nullity, nullspace, rank, row_space_basis, rref,
                                    same_column_span, solve, solve_sylvester)
from src.linalg.sparse import SparseEchelon
