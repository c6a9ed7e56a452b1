"""Exact tools for the dominance order, ball-filling probabilities and
totally non-negative Toeplitz / power matrices."""

from .partitions import (Partition, concat, covers, dominates, dual, enumerate_compositions,
                         enumerate_partitions, rearrange_to_partition)
from .series import (Poly, coeff_dominated_by, formal_derivative, multiply, power, row_product,
                     truncate)
from .tn import (MinorIndex, SequenceView, char_iii_check, check_tn, minor, shape, tn2_via_char,
                 transfer_identity_check)
from .probability import (Distribution, EventQuery, condition_C, event_probability,
                          make_distribution, monte_carlo, verify_equivalence)
from .injection import compatible, find_injection, sweep

__version__ = "0.1.0"
