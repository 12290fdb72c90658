"""
Toric cobordism classes of torus bundles over the circle.

The oriented class lives in Z12 = SL(2,Z)/SL(2,Z)' and is normalised so that
the bundle with monodromy (1 1; 0 1) has class 1. The unoriented class lives
in Z2 + Z2 = G/G^2 = G/G' for G = GL(2,Z), with coordinates (A-parity,
R-parity).
"""

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from torb.errors import DomainError
from torb.services.gl2z_core import IDENTITY, Mat2, format_matrix, matrix_exponent_sums, multiply

ORIENTED_ORDER = 12

# 7 * (3 e_A + 2 e_B) mod 12; 7 inverts -5, the raw value of B'A' = (1 1; 0 1)
_NORMALIZER = 7


@dataclass(frozen=True)
class OrientedClass:
    value: int

    def __post_init__(self):
        object.__setattr__(self, 'value', self.value % ORIENTED_ORDER)

    def __add__(self, other: 'OrientedClass') -> 'OrientedClass':
        return OrientedClass(self.value + other.value)

    def __neg__(self) -> 'OrientedClass':
        return OrientedClass(-self.value)

    def __sub__(self, other: 'OrientedClass') -> 'OrientedClass':
        return OrientedClass(self.value - other.value)

    def __mul__(self, k: int) -> 'OrientedClass':
        return OrientedClass(self.value * k)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.value == 0

    def order(self) -> int:
        """Additive order in Z12"""
        k = 1
        while (self.value * k) % ORIENTED_ORDER:
            k += 1
        return k

    def generates(self) -> bool:
        return self.order() == ORIENTED_ORDER

    def __str__(self) -> str:
        return f"{self.value} mod 12"


@dataclass(frozen=True)
class UnorientedClass:
    u: int
    v: int

    def __post_init__(self):
        object.__setattr__(self, 'u', self.u % 2)
        object.__setattr__(self, 'v', self.v % 2)

    def __add__(self, other: 'UnorientedClass') -> 'UnorientedClass':
        return UnorientedClass(self.u + other.u, self.v + other.v)

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def __str__(self) -> str:
        return f"({self.u},{self.v}) in Z2+Z2"


ORIENTED_ZERO = OrientedClass(0)
UNORIENTED_ZERO = UnorientedClass(0, 0)


@dataclass(frozen=True)
class TorusBundle:
    """M_phi; reversed marks the opposite orientation M_phi^-"""

    monodromy: Mat2
    oriented: bool = True
    reversed_orientation: bool = False

    def __post_init__(self):
        if self.oriented and self.monodromy.det != 1:
            raise DomainError(
                f"an oriented torus bundle needs a monodromy of determinant +1, got {format_matrix(self.monodromy)}"
            )
        if self.reversed_orientation and not self.oriented:
            raise DomainError("only oriented bundles can be reversed")

    def reversed(self) -> 'TorusBundle':
        return TorusBundle(self.monodromy, True, not self.reversed_orientation)


def _require_special(m: Mat2, what: str):
    if m.det != 1:
        raise DomainError(f"{what} requires determinant +1")


def oriented_class(m: Mat2) -> OrientedClass:
    _require_special(m, "oriented class")
    e_a, e_b, _ = matrix_exponent_sums(m)
    return OrientedClass(_NORMALIZER * (3 * e_a + 2 * e_b))


def unoriented_class(m: Mat2) -> UnorientedClass:
    # B is trivial in G/G^2: B^3 = A^2 = 1 and B^2 = 1
    e_a, _, e_r = matrix_exponent_sums(m)
    return UnorientedClass(e_a, e_r)


def in_derived_sl(m: Mat2) -> bool:
    """m lies in SL(2,Z)'"""
    _require_special(m, "derived subgroup membership")
    return oriented_class(m).is_zero()


def in_G_squared(m: Mat2) -> bool:
    """m lies in G^2, which equals G' in GL(2,Z)"""
    return unoriented_class(m).is_zero()


def bundle_class(bundle: TorusBundle) -> OrientedClass:
    if not bundle.oriented:
        raise DomainError("oriented class requires an oriented bundle")
    value = oriented_class(bundle.monodromy)
    return -value if bundle.reversed_orientation else value


def cobordant_oriented(x: TorusBundle, y: TorusBundle) -> bool:
    if not (x.oriented and y.oriented):
        raise DomainError("oriented cobordism requires oriented bundles (determinant +1)")
    return bundle_class(x) == bundle_class(y)


def cobordant_unoriented(x: TorusBundle, y: TorusBundle) -> bool:
    return unoriented_class(x.monodromy) == unoriented_class(y.monodromy)


def boundary_product(ms: Iterable[Mat2]) -> Mat2:
    """Ordered product of boundary monodromies; I for an empty boundary"""
    return reduce(multiply, ms, IDENTITY)


def bounds_over_orientable(ms: Sequence[Mat2]) -> bool:
    """The disjoint union of the M_phi bounds over an orientable surface: product in G'"""
    return in_G_squared(boundary_product(ms))


def bounds_over_nonorientable(ms: Sequence[Mat2]) -> bool:
    """The disjoint union of the M_phi bounds over a non-orientable surface: product in G^2"""
    return in_G_squared(boundary_product(ms))


def amphichiral(m: Mat2) -> bool:
    """[M_phi] = -[M_phi], i.e. phi^2 lies in SL(2,Z)'"""
    _require_special(m, "amphichirality")
    return (oriented_class(m) * 2).is_zero()


def union_class(bundles: Iterable[TorusBundle]) -> OrientedClass:
    return reduce(lambda acc, bundle: acc + bundle_class(bundle), bundles, ORIENTED_ZERO)


def union_unoriented_class(bundles: Iterable[TorusBundle]) -> UnorientedClass:
    return reduce(lambda acc, bundle: acc + unoriented_class(bundle.monodromy), bundles, UNORIENTED_ZERO)
