from src.factorization.components import (ComponentCensus, component_census, component_index, reference_plane,
                                          tensor_framing)
from src.factorization.gluing import (BlockList, blockwise_element, canonical_order, factorize,
                                      factorize_preserves_costability, gluing_residuals)
from src.factorization.tensor import (tensor_block_permutation, tensor_commutes_with_factorization,
                                      tensor_product, unit_datum)
