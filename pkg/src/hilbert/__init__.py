from src.hilbert.graded import (GradedPiece, GradedSetup, HilbertTruncation, apply_derivation,
                                apply_linear_substitution, compare_series, complete_intersection_series,
                                coordinate_action, differing_degrees, graded_piece, graded_quotient_dim,
                                hilbert_truncated, hypersurface_dim, invariant_basis, invariant_dim, monomial_count,
                                monomials, setup_for, usp1_pair_series)
