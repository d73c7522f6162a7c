import logging

from src.adhm.datum import Flavor, GroupKind, lie_dim
from src.utils.errors import OutOfRange

logger = logging.getLogger('adhmlab.adhm')


def dim_m(k: int, n: int) -> int:
    """dim M = 2k² + 2kN."""
    return 2 * k * k + 2 * k * n


def dim_n(flavor, k: int, n: int) -> int:
    """dim N = 2·dim p(V) + kN for so/sp data; dim M for ordinary data."""
    flavor = Flavor(flavor)
    if flavor is Flavor.ORDINARY:
        return dim_m(k, n)
    p_dim = k * (k - 1) // 2 if flavor is Flavor.SO_DATA else k * (k + 1) // 2
    return 2 * p_dim + k * n


def gauge_lie_dim(flavor, k: int) -> int:
    flavor = Flavor(flavor)
    kind = {Flavor.ORDINARY: GroupKind.GL, Flavor.SO_DATA: GroupKind.SP, Flavor.SP_DATA: GroupKind.O}[flavor]
    return lie_dim(kind, k)


def stratum_dim(k: int, n: int, l: int) -> int:
    """
    Dimension of the piece of μ⁻¹(0) over SO data whose B1-spectrum has l points.

    dim N − dim g(V) − (k/2 − l), for k even and 1 <= l <= k/2.
    """
    if k % 2 or k <= 0:
        raise OutOfRange(f"Stratum dimensions need a positive even k, got {k}")
    if not 1 <= l <= k // 2:
        raise OutOfRange(f"l={l} outside [1, {k // 2}]: the stratum is empty")
    if n < 4:
        logger.warning(f"N={n} < 4: the stratum formula carries no dimension guarantee")
    return dim_n(Flavor.SO_DATA, k, n) - lie_dim(GroupKind.SP, k) - (k // 2 - l)


def fibre_dim_over_base(s: int, dim_v: int) -> int:
    """dim V − s: fibre of the cotangent moment map over a point with orbit dim s."""
    if not 0 <= s <= dim_v:
        raise OutOfRange(f"Orbit dimension {s} outside [0, {dim_v}]")
    return dim_v - s
