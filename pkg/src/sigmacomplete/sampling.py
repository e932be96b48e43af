"""Seeded generators of rational valuations.

Values are small rationals (numerators in ``[-12, 12]``, denominators in
``{1, 2, 3, 4}``) so that lattice ties happen often. Every run starts with a
structured prefix (constant boundary valuations, per-variable boundary
values and pairwise-equal valuations) before the random mixture.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

from .rationals import Q

BOUNDARY = (Q(0), Q(1), Q(-1), Q(1, 2), Q(-1, 2))


@dataclass(frozen=True)
class RationalSampler:
    numerators: Tuple[int, int] = (-12, 12)
    denominators: Tuple[int, ...] = (1, 2, 3, 4)
    structured: bool = True

    @functools.cached_property
    def _table(self) -> Tuple["Q", ...]:
        lo, hi = self.numerators
        return tuple(Q(p, d) for p in range(lo, hi + 1) for d in self.denominators)

    def value(self, rng: random.Random):
        """Uniform numerator and denominator, drawn with a single call."""
        table = self._table
        return table[rng.randrange(len(table))]

    def _random(self, names: Sequence[str], rng: random.Random) -> Dict[str, "Q"]:
        mode = rng.random()
        lo, hi = self.numerators
        if mode < 0.5:
            return {x: self.value(rng) for x in names}
        if mode < 0.65:
            return {x: Q(rng.randint(lo, hi)) for x in names}
        if mode < 0.8:
            return {x: rng.choice(BOUNDARY) if rng.random() < 0.5 else self.value(rng) for x in names}
        if mode < 0.9:
            return {x: Q(0) if rng.random() < 0.4 else self.value(rng) for x in names}
        # few distinct values: many ties between variables
        pool = [self.value(rng) for _ in range(rng.randint(1, 3))]
        return {x: rng.choice(pool) for x in names}

    def _structured(self, names: Sequence[str], rng: random.Random) -> Iterator[Dict[str, "Q"]]:
        for b in BOUNDARY:
            yield {x: b for x in names}
        for x in names:
            for b in BOUNDARY:
                v = {y: self.value(rng) for y in names}
                v[x] = b
                yield v
        for x, y in itertools.combinations(names, 2):
            v = {z: self.value(rng) for z in names}
            v[y] = v[x]
            yield v

    def valuations(self, names: Sequence[str], trials: int, seed: int) -> Iterator[Dict[str, "Q"]]:
        """``trials`` valuations of ``names``, deterministic in ``seed``."""
        rng = random.Random(seed)
        names = sorted(names)
        count = 0
        if self.structured:
            for v in self._structured(names, rng):
                if count >= trials:
                    return
                yield v
                count += 1
        while count < trials:
            yield self._random(names, rng)
            count += 1

    @functools.lru_cache(maxsize=64)
    def valuation_list(self, names: Tuple[str, ...], trials: int, seed: int) -> Tuple[Dict[str, "Q"], ...]:
        """Cached :meth:`valuations`; callers must not mutate the dicts."""
        return tuple(self.valuations(names, trials, seed))

    def tuples(self, names: Sequence[str], width: int, trials: int, seed: int) -> Iterator[List[Dict[str, "Q"]]]:
        """Per-coordinate valuations for ``width`` coordinates at a time."""
        rng = random.Random(seed)
        names = sorted(names)
        count = 0
        if self.structured:
            for i, v in enumerate(self._structured(names, rng)):
                if count >= trials:
                    return
                # alternate: boundary case on every coordinate / on one coordinate
                if i % 2 == 0 or width == 0:
                    yield [dict(v) for _ in range(width)]
                else:
                    row = [self._random(names, rng) for _ in range(width)]
                    row[i % width] = v
                    yield row
                count += 1
        while count < trials:
            yield [self._random(names, rng) for _ in range(width)]
            count += 1


DEFAULT_SAMPLER = RationalSampler()
