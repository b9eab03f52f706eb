"""Exact arithmetic instances: cones, intervals and two teaching fixtures.

All carriers are integers or integer tuples and every operation is exact,
so kernel verdicts on these instances are certificates, not approximations.
"""

from __future__ import annotations

import itertools

from .errors import NonPositiveBound
from .kernel import PartialAlgebra, check_axioms, derived_le, is_sub_gea


def _as_tuple(u):
    return u if isinstance(u, tuple) else (u,)


def _scalar(u, value):
    # mirror tuple results back to plain ints for scalar bounds
    return value[0] if not isinstance(u, tuple) else value


class NatGEA(PartialAlgebra):
    """Non-negative integers under total addition, enumerated up to a cap."""

    def __init__(self, cap: int = 64):
        if cap < 0:
            raise ValueError("cap must be non-negative")
        self.cap = cap
        self.zero = 0
        self.enumerable = True

    def add(self, a, b):
        return a + b

    def elements(self):
        return range(self.cap + 1)


class EvenGapGEA(PartialAlgebra):
    """{0, 4, 6, 8, ...} with the sum it inherits from the integers.

    The set is closed under ambient sums, so it is a generalized effect
    algebra in its own right, yet its derived order differs from the
    ambient one: 4 <= 6 holds among the integers but not here, because the
    witness 2 is missing.
    """

    def __init__(self, cap: int = 64):
        self.cap = cap
        self.zero = 0
        self.enumerable = True

    @staticmethod
    def contains(x) -> bool:
        return x == 0 or (x >= 4 and x % 2 == 0)

    def add(self, a, b):
        s = a + b
        return s if self.contains(s) else None

    def elements(self):
        return [0] + list(range(4, self.cap + 1, 2))


class ConeGEA(PartialAlgebra):
    """The positive cone of Z^d under total componentwise addition."""

    def __init__(self, dim: int = 2, cap: int = 8):
        self.dim = dim
        self.cap = cap
        self.zero = (0,) * dim
        self.enumerable = True

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def elements(self):
        return list(itertools.product(range(self.cap + 1), repeat=self.dim))


class IntervalEA(PartialAlgebra):
    """Closed interval [0, u]: the sum is defined when it stays below u.

    Has top element u, so it is in fact an effect algebra.  ``u`` may be a
    positive int or a componentwise non-negative, nonzero int tuple.
    """

    def __init__(self, u):
        self.u = u
        ut = _as_tuple(u)
        self.zero = _scalar(u, (0,) * len(ut))
        self.enumerable = True

    @property
    def top(self):
        return self.u

    def add(self, a, b):
        ut = _as_tuple(self.u)
        s = tuple(x + y for x, y in zip(_as_tuple(a), _as_tuple(b)))
        if all(c <= m for c, m in zip(s, ut)):
            return _scalar(self.u, s)
        return None

    def elements(self):
        ut = _as_tuple(self.u)
        return [_scalar(self.u, e) for e in itertools.product(*(range(m + 1) for m in ut))]


class HalfOpenIntervalGEA(PartialAlgebra):
    """Half-open interval [0, u): elements g with 0 <= g <= u and g != u.

    The sum is defined when it stays strictly below u in the cone order.
    For a genuinely multi-dimensional u there is no top element.
    """

    def __init__(self, u):
        self.u = u
        ut = _as_tuple(u)
        self.zero = _scalar(u, (0,) * len(ut))
        self.enumerable = True

    def _inside(self, s: tuple) -> bool:
        ut = _as_tuple(self.u)
        return all(c <= m for c, m in zip(s, ut)) and s != ut

    def add(self, a, b):
        s = tuple(x + y for x, y in zip(_as_tuple(a), _as_tuple(b)))
        return _scalar(self.u, s) if self._inside(s) else None

    def elements(self):
        ut = _as_tuple(self.u)
        return [
            _scalar(self.u, e)
            for e in itertools.product(*(range(m + 1) for m in ut))
            if self._inside(e)
        ]


class BrokenMaxGEA(PartialAlgebra):
    """Deliberately broken fixture: join instead of addition on {0..cap}.

    Satisfies everything except cancellation, which fails as soon as
    max(x, y) = max(x, z) with y != z.
    """

    def __init__(self, cap: int = 8):
        self.cap = cap
        self.zero = 0
        self.enumerable = True

    def add(self, a, b):
        return max(a, b)

    def elements(self):
        return range(self.cap + 1)


def _validate_bound(u):
    ut = _as_tuple(u)
    if not all(isinstance(c, int) for c in ut):
        raise NonPositiveBound(f"bound must be integral, got {u!r}")
    if any(c < 0 for c in ut) or all(c == 0 for c in ut):
        raise NonPositiveBound(f"bound must be strictly positive in the cone order, got {u!r}")


def make_interval_ea(u) -> IntervalEA:
    _validate_bound(u)
    return IntervalEA(u)


def make_half_open(u) -> HalfOpenIntervalGEA:
    _validate_bound(u)
    return HalfOpenIntervalGEA(u)


def restricted_order_demo(cap: int = 50) -> dict:
    """Show that a sum-closed subset need not be a sub-algebra.

    The even-gap set passes all five axioms on its own, yet the two-out-
    of-three closure fails with certificate (4, 2, 6): both 4 and 6 lie in
    the subset while their difference 2 does not, so 4 <= 6 holds in the
    ambient integers but not in the subset order.
    """
    ambient = NatGEA(cap)
    subset = EvenGapGEA(cap)
    members = set(subset.elements())
    check = is_sub_gea(ambient, members)
    return {
        "cap": cap,
        "ambient_axioms_pass": check_axioms(ambient).all_pass,
        "subset_axioms_pass": check_axioms(subset).all_pass,
        "is_sub_gea": check.ok,
        "certificate": check.certificate,
        "le_in_ambient": derived_le(ambient, 4, 6),
        "le_in_subset": derived_le(subset, 4, 6),
    }


def instance_by_name(name: str, cap: int | None = None) -> PartialAlgebra:
    """CLI selector: zplus, even-gap, cone:<d>, interval:<u>, half-open:<u>,
    broken-max.  Tuple bounds are comma-separated, e.g. ``interval:3,2``."""

    def parse_bound(text: str):
        parts = [int(p) for p in text.split(",")]
        return parts[0] if len(parts) == 1 else tuple(parts)

    base, _, arg = name.partition(":")
    if base == "zplus":
        return NatGEA(cap or 64)
    if base == "even-gap":
        return EvenGapGEA(cap or 64)
    if base == "cone":
        return ConeGEA(int(arg) if arg else 2, cap or 8)
    if base == "interval":
        return make_interval_ea(parse_bound(arg) if arg else 6)
    if base == "half-open":
        return make_half_open(parse_bound(arg) if arg else (2, 2))
    if base == "broken-max":
        return BrokenMaxGEA(cap or 8)
    raise ValueError(f"unknown instance {name!r}")
