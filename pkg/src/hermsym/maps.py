"""Holomorphic self-maps in cell coordinates: exact rational-map values,
their Jacobians, and the JSON wire format for user-supplied map tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .gauss import GaussRational
from .poly import Polynomial, PolyFraction, PolyRing
from .spaces import Space


@dataclass(frozen=True)
class RationalMap:
    """Map F = (F_1..F_n) with each component an exact polynomial fraction
    over the cell coordinate ring; denominators must not vanish at 0."""

    ring: PolyRing
    components: Tuple[PolyFraction, ...]

    def __post_init__(self):
        zero = {v: GaussRational(0) for v in self.ring.vars}
        for f in self.components:
            if f.den.evaluate(zero).is_zero():
                raise ValueError("component denominator vanishes at 0")

    @property
    def n(self) -> int:
        return len(self.components)

    def is_polynomial(self) -> bool:
        return all(f.den.is_constant() for f in self.components)

    def as_fraction_images(self) -> Dict[str, PolyFraction]:
        return {v: f for v, f in zip(self.ring.vars, self.components)}

    def evaluate(self, point: Dict[str, GaussRational]) -> Dict[str, GaussRational]:
        return {v: f.evaluate(point) for v, f in zip(self.ring.vars, self.components)}

    def evaluate_float(self, point: Sequence[complex]) -> List[complex]:
        named = {v: complex(point[i]) for i, v in enumerate(self.ring.vars)}
        return [f.evaluate_float(named) for f in self.components]

    def jacobian_fractions(self) -> List[List[PolyFraction]]:
        """d F_k / d z_i as exact fractions, row index i, column index k."""
        return [[f.derivative(v) for f in self.components] for v in self.ring.vars]


def identity_map(space: Space) -> RationalMap:
    ring = space.ring
    one = ring.one()
    comps = tuple(PolyFraction(ring.var(v), one) for v in ring.vars)
    return RationalMap(ring, comps)


def polynomial_map(space: Space, images: Dict[str, Polynomial]) -> RationalMap:
    ring = space.ring
    one = ring.one()
    comps = tuple(PolyFraction(images.get(v, ring.var(v)), one) for v in ring.vars)
    return RationalMap(ring, comps)


def scaling_map(space: Space, factor) -> RationalMap:
    ring = space.ring
    one = ring.one()
    comps = tuple(PolyFraction(ring.var(v).scale(GaussRational.coerce(factor)), one)
                  for v in ring.vars)
    return RationalMap(ring, comps)


def compose_psi(space: Space, F: RationalMap, polys=None) -> List[PolyFraction]:
    """psi_j o F as exact fractions (psi defaults to the embedding system)."""
    if polys is None:
        polys = space.psi
    images = F.as_fraction_images()
    return [p.compose_fractions(images) for p in polys]


# ---------------------------------------------------------------------------
# map-file wire format
# ---------------------------------------------------------------------------

@dataclass
class MapFile:
    maps: List[RationalMap]
    lambdas: Optional[List[float]]
    lambdas_exact: Optional[List[Fraction]]


def _fraction_from_json(ring: PolyRing, obj) -> PolyFraction:
    num = ring.from_json(obj["num"])
    den = ring.from_json(obj["den"]) if "den" in obj and obj["den"] is not None \
        else ring.one()
    return PolyFraction(num, den)


def parse_map_file(space: Space, payload) -> MapFile:
    """Parse {'maps': [...], 'lambdas': [...]} (or a bare list of maps).

    Each map is a list of n components {num: <poly>, den: <poly>}.  Lambda
    entries given as 'a/b' strings are kept exact; plain numbers are floats.
    """
    if isinstance(payload, list):
        payload = {"maps": payload}
    raw_maps = payload.get("maps")
    if not isinstance(raw_maps, list) or not raw_maps:
        raise ValueError("map file must contain a non-empty 'maps' array")
    maps = []
    for entry in raw_maps:
        if len(entry) != space.n:
            raise ValueError(
                f"map has {len(entry)} components; space cell dimension is {space.n}")
        comps = tuple(_fraction_from_json(space.ring, c) for c in entry)
        maps.append(RationalMap(space.ring, comps))
    lambdas = payload.get("lambdas")
    exact = None
    floats = None
    if lambdas is not None:
        if len(lambdas) != len(maps):
            raise ValueError("lambdas count does not match maps count")
        if all(isinstance(x, str) for x in lambdas):
            exact = [Fraction(x) for x in lambdas]
            floats = [float(f) for f in exact]
        else:
            floats = [float(x) for x in lambdas]
        if any(f <= 0 for f in floats):
            raise ValueError("lambdas must be positive")
    return MapFile(maps, floats, exact)


def map_to_json(F: RationalMap) -> list:
    return [{"num": f.num.to_json(), "den": f.den.to_json()} for f in F.components]
