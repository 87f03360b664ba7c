"""Seeded random sampling helpers.

Every randomized routine in the package takes an explicit seed and draws
through ``random.Random`` so identical seeds reproduce identical reports.
Rational samples keep numerators and denominators bounded by 97.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, Sequence

from .gauss import GaussRational

BOUND = 97


def rng_from_seed(seed: int) -> random.Random:
    return random.Random(seed)


def random_fraction(rng: random.Random, bound: int = BOUND) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_small_fraction(rng: random.Random) -> Fraction:
    """A rational of modulus < 1 ('near 0' sampling for jet ranks)."""
    return Fraction(rng.randint(-9, 9), rng.randint(10, BOUND))


def random_gauss(rng: random.Random, bound: int = BOUND) -> GaussRational:
    return GaussRational(random_fraction(rng, bound), random_fraction(rng, bound))


def random_small_gauss(rng: random.Random) -> GaussRational:
    return GaussRational(random_small_fraction(rng), random_small_fraction(rng))


def random_gauss_point(rng: random.Random, names: Sequence[str],
                       small: bool = False) -> Dict[str, GaussRational]:
    draw = random_small_gauss if small else random_gauss
    return {v: draw(rng) for v in names}


def random_complex_ball(rng: random.Random, n: int, radius: float = 0.3):
    """n complex coordinates, each of modulus <= radius (max-norm ball)."""
    out = []
    for _ in range(n):
        re = rng.uniform(-radius, radius) * 0.7
        im = rng.uniform(-radius, radius) * 0.7
        out.append(complex(re, im))
    return out
