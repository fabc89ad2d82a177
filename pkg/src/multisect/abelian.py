"""Finite abelian groups as tuples of residues.

A group is a product Z/d1 x ... x Z/dr with d1 | d2 | ... | dr, and its
elements are integer tuples reduced componentwise.  These are the targets
of the finite-quotient searches; their size is capped by the configured
bound so enumeration stays cheap.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product
from math import prod
from typing import Iterable, Iterator

DEFAULT_BOUND = 10 ** 6

Element = tuple[int, ...]


def configured_bound() -> int:
    """Size bound for quotient targets and orbit enumeration; the
    MULTISECT_BOUND environment variable overrides the default 10^6."""
    raw = os.environ.get("MULTISECT_BOUND")
    if raw is None:
        return DEFAULT_BOUND
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"MULTISECT_BOUND must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError("MULTISECT_BOUND must be positive")
    return value


@dataclass(frozen=True)
class FiniteAbelianGroup:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        factors = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        for d in factors:
            if d <= 1:
                raise ValueError("invariant factors must exceed 1")
        for x, y in zip(factors, factors[1:]):
            if y % x != 0:
                raise ValueError("invariant factors must form a divisibility chain")
        if self.order > configured_bound():
            raise ValueError(
                f"group order {self.order} exceeds the configured bound")

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def describe(self) -> str:
        return " x ".join(f"Z/{d}" for d in self.invariant_factors) or "trivial"

    def elements(self) -> Iterator[Element]:
        """All elements in lexicographic order."""
        return product(*(range(d) for d in self.invariant_factors))

    def reduce(self, vector: Iterable[int]) -> Element:
        vec = tuple(vector)
        if len(vec) != self.rank:
            raise ValueError("vector length does not match group rank")
        return tuple(x % d for x, d in zip(vec, self.invariant_factors))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % d for a, d in zip(x, self.invariant_factors))

    def scale(self, n: int, x: Element) -> Element:
        return tuple((n * a) % d for a, d in zip(x, self.invariant_factors))

    def subgroup_generated(self, vectors: Iterable[Element]) -> frozenset[Element]:
        gens = [self.reduce(v) for v in vectors]
        seen = {self.zero}
        frontier = [self.zero]
        while frontier:
            current = frontier.pop()
            for g in gens:
                nxt = self.add(current, g)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return frozenset(seen)

    def generates(self, vectors: Iterable[Element]) -> bool:
        return len(self.subgroup_generated(vectors)) == self.order


def invariant_factor_chains(order: int) -> list[tuple[int, ...]]:
    """All invariant-factor decompositions of abelian groups of the given
    order, sorted; each chain satisfies d1 | d2 | ... and prod = order."""
    if order < 1:
        raise ValueError("order must be positive")
    chains = set()

    def rec(remaining: int, minimum: int, acc: tuple[int, ...]):
        if remaining == 1:
            if acc:
                chains.add(acc)
            return
        d = minimum
        while d <= remaining:
            if remaining % d == 0 and (not acc or d % acc[-1] == 0):
                rec(remaining // d, d, acc + (d,))
            d += 1

    if order == 1:
        return []
    rec(order, 2, ())
    return sorted(chains)


def enumerate_abelian_groups(max_order: int, max_rank: int | None = None) -> list[FiniteAbelianGroup]:
    """All finite abelian groups of order 2..max_order in a deterministic
    order (by order, then by invariant factors)."""
    out = []
    for order in range(2, max_order + 1):
        for chain in invariant_factor_chains(order):
            if max_rank is not None and len(chain) > max_rank:
                continue
            out.append(FiniteAbelianGroup(chain))
    return out
