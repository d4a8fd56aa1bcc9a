"""Affine presentations: a ring of variables plus ideal generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .groebner import GroebnerBasis, MonomialOrder, buchberger, default_order
from .polynomial import Polynomial, Ring, Variable


# reduced bases under the default order, shared between equal presentations
_GB_CACHE: dict[tuple, GroebnerBasis] = {}


@dataclass(frozen=True)
class Presentation:
    """``k[variables] / (generators)``.

    A variety presentation is simply a presentation whose variables are all
    plain (no jet order).
    """

    name: str
    ring: Ring
    generators: tuple[Polynomial, ...] = ()
    groebner_limits: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.ring, Ring):
            object.__setattr__(self, "ring", Ring(self.ring))
        gens = tuple(self.generators)
        for g in gens:
            if g.ring is not self.ring:
                raise ValueError(f"generator {g} is not over {self.ring!r}")
            if g.is_zero():
                raise ValueError("generators must be nonzero")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def from_strings(cls, name: str, variables: Sequence[str], generators: Iterable[str]) -> "Presentation":
        ring = Ring(variables)
        return cls(name, ring, tuple(ring(g) for g in generators))

    @property
    def variables(self) -> tuple[Variable, ...]:
        return self.ring.variables

    @property
    def order(self) -> MonomialOrder:
        return default_order(self.ring)

    @cached_property
    def groebner(self) -> GroebnerBasis:
        key = (self.ring, self.generators)
        G = _GB_CACHE.get(key)
        if G is None:
            G = _GB_CACHE[key] = buchberger(self.generators, self.order, self.ring, **self.groebner_limits)
        return G

    def normal_form(self, p: Polynomial) -> Polynomial:
        return self.groebner.normal_form(p)

    def with_limits(self, **limits) -> "Presentation":
        return Presentation(self.name, self.ring, self.generators, dict(limits))

    def extend(self, extra: Sequence[Variable], name: str | None = None) -> "Presentation":
        """Same generators over a ring with ``extra`` free variables appended."""
        ring = self.ring.extend(extra)
        return Presentation(
            name or self.name,
            ring,
            tuple(g.to_ring(ring) for g in self.generators),
            self.groebner_limits,
        )

    def rename(self, mapping: dict[Variable, Variable], name: str | None = None) -> "Presentation":
        ring = Ring(mapping.get(v, v) for v in self.ring.variables)
        return Presentation(
            name or self.name,
            ring,
            tuple(g.rename(mapping, ring) for g in self.generators),
            self.groebner_limits,
        )

    def same_as(self, other: "Presentation") -> bool:
        """Same ring and same ideal (checked by reduced bases when generators differ)."""
        if self.ring is not other.ring:
            return False
        if set(self.generators) == set(other.generators):
            return True
        return self.groebner.basis == buchberger(other.generators, self.order, self.ring).basis

    def __str__(self):
        return f"{self.name}: k[{', '.join(map(str, self.variables))}] / ({', '.join(map(str, self.generators))})"


def clear_caches() -> None:
    """Forget memoized Groebner bases and monomial sort keys."""
    from . import groebner

    _GB_CACHE.clear()
    groebner._KEY_CACHE.clear()


def affine_space(n: int, name: str | None = None, prefix: str = "x") -> Presentation:
    names = [prefix] if n == 1 else [f"{prefix}{i}" for i in range(1, n + 1)]
    return Presentation(name or f"affine-{n}", Ring(names), ())
