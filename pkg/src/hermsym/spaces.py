"""Canonical embeddings of the six families of irreducible compact Hermitian
symmetric spaces, in affine cell coordinates.

Each ``Space`` carries the cell dimension ``n``, the ambient projective
dimension ``N``, the embedding polynomials ``psi`` (with ``psi[j] == z_j``
for the first ``n`` slots and vanishing linear part beyond), plus the
``pairing_psi`` vector whose self-pairing generates the Segre polynomial.
For the symplectic Grassmannian the two differ: ``pairing_psi`` is the raw
redundant minor vector (its pairing telescopes to ``det(I + Z Xi^t)`` via
Cauchy-Binet) while ``psi`` is an exact maximal linearly independent basis
selected per degree; the orthonormalized float tail that turns that basis
into an honest Euclidean-coordinate embedding is kept in
``symplectic_tail`` (its coefficients are irrational, so only numeric
checks consume it).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .gauss import GaussRational
from .linalg import RankTracker
from .octonion import (M16_VARS, M27_VARS, cayley_plane_forms, freudenthal_forms)
from .poly import Polynomial, PolyRing


@dataclass(frozen=True)
class SpaceDescriptor:
    kind: str                 # typeI | typeII | typeIII | typeIV | e16 | e27
    params: Tuple[int, ...] = ()

    def __post_init__(self):
        k, p = self.kind, self.params
        if k == "typeI":
            if len(p) != 2 or not (1 <= p[0] <= p[1]):
                raise ValueError("typeI needs 1 <= p <= q")
        elif k == "typeII":
            if len(p) != 1 or p[0] < 2:
                raise ValueError("typeII needs n >= 2 (first Pfaffian block at n=4)")
        elif k == "typeIII":
            if len(p) != 1 or p[0] < 2:
                raise ValueError("typeIII needs n >= 2")
        elif k == "typeIV":
            if len(p) != 1 or p[0] < 3:
                raise ValueError("typeIV needs n >= 3 (irreducible quadric)")
        elif k in ("e16", "e27"):
            if p:
                raise ValueError(f"{k} takes no parameters")
        else:
            raise ValueError(f"unknown space kind {k!r}")

    def label(self) -> str:
        if self.params:
            return f"{self.kind}:{','.join(map(str, self.params))}"
        return self.kind


def parse_space_spec(text: str) -> SpaceDescriptor:
    """Parse grammar 'typeI:p,q | typeII:n | typeIII:n | typeIV:n | e16 | e27'."""
    text = text.strip()
    if ":" in text:
        kind, rest = text.split(":", 1)
        params = tuple(int(x) for x in rest.split(","))
    else:
        kind, params = text, ()
    return SpaceDescriptor(kind, params)


@dataclass(frozen=True)
class SymplecticTail:
    """Float orthonormalization data for the symplectic Grassmannian.

    Per degree k: indices of the exact basis columns, and the combo matrix
    C with (normalized block) = (exact basis block) . C, so that the
    self-pairing of the normalized system equals the raw minor pairing."""
    blocks: Tuple[Tuple[Tuple[int, ...], np.ndarray], ...]


@dataclass(frozen=True)
class Space:
    desc: SpaceDescriptor
    n: int
    N: int
    ring: PolyRing                       # cell coordinate ring
    psi: Tuple[Polynomial, ...]          # independent embedding polynomials
    pairing_psi: Tuple[Polynomial, ...]  # vector whose self-pairing builds rho
    distinguished: str                   # dropped variable of the jet calculus
    symplectic_tail: Optional[SymplecticTail] = None
    degenerate_note: Optional[str] = None

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.ring.vars


# ---------------------------------------------------------------------------
# determinants and Pfaffians of symbolic matrices
# ---------------------------------------------------------------------------

def sym_det(rows: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Leibniz determinant for symbolic matrices (factorial cost; the minor
    enumerations only need small orders)."""
    k = len(rows)
    ring = rows[0][0].ring
    out = ring.zero()
    for perm in itertools.permutations(range(k)):
        sign = _perm_sign(perm)
        term = ring.const(sign)
        for i in range(k):
            term = term * rows[i][perm[i]]
        out = out + term
    return out


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, orbit = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            orbit += 1
        if orbit % 2 == 0:
            sign = -sign
    return sign


def _pair_partitions(indices: Tuple[int, ...]):
    """All partitions of an even index tuple into pairs, with permutation sign."""
    if not indices:
        yield (), 1
        return
    first = indices[0]
    rest = indices[1:]
    for pos, second in enumerate(rest):
        remaining = rest[:pos] + rest[pos + 1:]
        # moving `second` next to `first` hops over `pos` elements
        sign_here = (-1) ** pos
        for pairs, sign in _pair_partitions(remaining):
            yield ((first, second),) + pairs, sign_here * sign


def pfaffian(matrix: Sequence[Sequence[Polynomial]], algo: str = "partition") -> Polynomial:
    """Pfaffian of an antisymmetric matrix of polynomials.

    ``partition`` sums signed pair partitions (the definitional formula,
    practical to order 8); ``recursive`` expands along the first row and
    works for any order.  Odd order gives 0.
    """
    m = len(matrix)
    ring = matrix[0][0].ring if m else None
    for i in range(m):
        for j in range(m):
            if not (matrix[i][j] + matrix[j][i]).is_zero():
                raise ValueError("matrix is not antisymmetric")
    if m == 0:
        raise ValueError("empty matrix")
    if m % 2 == 1:
        return ring.zero()
    if algo == "partition":
        out = ring.zero()
        for pairs, sign in _pair_partitions(tuple(range(m))):
            term = ring.const(sign)
            for i, j in pairs:
                term = term * matrix[i][j]
            out = out + term
        return out
    if algo == "recursive":
        return _pf_recursive(matrix, list(range(m)), ring)
    raise ValueError("algo must be 'partition' or 'recursive'")


def _pf_recursive(matrix, idx: List[int], ring: PolyRing) -> Polynomial:
    if not idx:
        return ring.one()
    out = ring.zero()
    i0 = idx[0]
    for pos in range(1, len(idx)):
        j = idx[pos]
        sign = (-1) ** (pos - 1)
        rest = idx[1:pos] + idx[pos + 1:]
        sub = _pf_recursive(matrix, rest, ring)
        term = matrix[i0][j] * sub
        out = out + (term if sign > 0 else -term)
    return out


# ---------------------------------------------------------------------------
# type I: Grassmannians G(p, q), full minor enumeration
# ---------------------------------------------------------------------------

def _type1_vars(p: int, q: int) -> Tuple[str, ...]:
    return tuple(f"z{i}_{j}" for i in range(1, p + 1) for j in range(1, q + 1))

def minor_index_sets(p: int, q: int):
    """(k, rows, cols) triples in lexicographic order, k = 1..p."""
    for k in range(1, p + 1):
        for rows in itertools.combinations(range(1, p + 1), k):
            for cols in itertools.combinations(range(1, q + 1), k):
                yield k, rows, cols


def matrix_minor(entry, rows, cols) -> Polynomial:
    sub = [[entry(i, j) for j in cols] for i in rows]
    return sym_det(sub)


def build_type1(p: int, q: int) -> Space:
    desc = SpaceDescriptor("typeI", (p, q))
    ring = PolyRing(_type1_vars(p, q))
    entry = lambda i, j: ring.var(f"z{i}_{j}")
    psi = [matrix_minor(entry, rows, cols) for _, rows, cols in minor_index_sets(p, q)]
    return Space(desc, p * q, len(psi), ring, tuple(psi), tuple(psi),
                 distinguished=f"z{p}_{q}")


# ---------------------------------------------------------------------------
# type II: orthogonal Grassmannians, Pfaffian coordinates
# ---------------------------------------------------------------------------

def _type2_vars(n: int) -> Tuple[str, ...]:
    return tuple(f"z{i}_{j}" for i in range(1, n + 1) for j in range(i + 1, n + 1))


def antisym_matrix(ring: PolyRing, n: int, name: str = "z"):
    def entry(i, j):
        if i == j:
            return ring.zero()
        if i < j:
            return ring.var(f"{name}{i}_{j}")
        return -ring.var(f"{name}{j}_{i}")
    return entry


def build_type2(n: int) -> Space:
    desc = SpaceDescriptor("typeII", (n,))
    ring = PolyRing(_type2_vars(n))
    entry = antisym_matrix(ring, n)
    psi = []
    for k in range(2, n + 1, 2):
        for sigma in itertools.combinations(range(1, n + 1), k):
            block = [[entry(i, j) for j in sigma] for i in sigma]
            psi.append(pfaffian(block, "partition" if k <= 8 else "recursive"))
    note = None
    if n < 4:
        note = ("only the degree-1 Pfaffian block exists for n < 4; "
                "the embedding is linear and the space degenerates to "
                "projective space")
    cell = n * (n - 1) // 2
    return Space(desc, cell, len(psi), ring, tuple(psi), tuple(psi),
                 distinguished=f"z{n - 1}_{n}", degenerate_note=note)


# ---------------------------------------------------------------------------
# type III: symplectic Grassmannians, two-layer minor system
# ---------------------------------------------------------------------------

def _type3_vars(n: int) -> Tuple[str, ...]:
    return tuple(f"z{i}_{j}" for i in range(1, n + 1) for j in range(i, n + 1))


def sym_matrix_entry(ring: PolyRing, name: str = "z"):
    def entry(i, j):
        if i <= j:
            return ring.var(f"{name}{i}_{j}")
        return ring.var(f"{name}{j}_{i}")
    return entry


def _poly_coeff_row(p: Polynomial, monomials: List) -> List[GaussRational]:
    return [p.coeff(e) for e in monomials]


def build_type3(n: int, tail_tol: float = 1e-9) -> Space:
    desc = SpaceDescriptor("typeIII", (n,))
    ring = PolyRing(_type3_vars(n))
    entry = sym_matrix_entry(ring)

    raw: List[Polynomial] = []       # layer (a): all minors, redundant
    raw_by_degree: Dict[int, List[Polynomial]] = {}
    for k, rows, cols in minor_index_sets(n, n):
        m = matrix_minor(entry, rows, cols)
        raw.append(m)
        raw_by_degree.setdefault(k, []).append(m)

    # layer (b): per-degree maximal independent subsets, greedy in lex order
    psi: List[Polynomial] = []
    blocks = []
    offset = 0
    for k in range(1, n + 1):
        group = raw_by_degree[k]
        monomials = sorted({e for g in group for e in g.terms})
        tracker = RankTracker(len(monomials))
        chosen_idx: List[int] = []
        for idx, g in enumerate(group):
            if tracker.add_row(_poly_coeff_row(g, monomials)):
                chosen_idx.append(idx)
        basis = [group[i] for i in chosen_idx]

        # expansion matrix A_k with raw_block = basis_block . A_k
        A = _expansion_matrix(basis, group, monomials)
        gram = A @ A.T
        mu, U = np.linalg.eigh(gram)
        if mu.min() <= tail_tol:
            raise ArithmeticError("A_k A_k^t not positive definite")
        combo = U @ np.diag(np.sqrt(mu))
        blocks.append((tuple(range(offset, offset + len(basis))), combo))
        offset += len(basis)
        psi.extend(basis)

    tail = SymplecticTail(tuple(blocks))
    return Space(desc, n * (n + 1) // 2, len(psi), ring, tuple(psi), tuple(raw),
                 distinguished=f"z{n}_{n}", symplectic_tail=tail)


def _expansion_matrix(basis: List[Polynomial], group: List[Polynomial],
                      monomials: List) -> np.ndarray:
    """Rational least-squares-free expansion of each group member over the
    basis, solved exactly by elimination and returned as floats."""
    rows = len(basis)
    B = np.array([[float(p.coeff(e).re) for e in monomials] for p in basis])
    G = np.array([[float(p.coeff(e).re) for e in monomials] for p in group])
    # all coefficients here are integers (minor expansions), so float solve
    # of the consistent system B^T x = g is exact well within tolerance
    A, *_ = np.linalg.lstsq(B.T, G.T, rcond=None)
    return A


def symplectic_tail_eval(space: Space, point: Dict[str, complex]) -> np.ndarray:
    """Evaluate the float-coefficient orthonormalized embedding system."""
    if space.symplectic_tail is None:
        raise ValueError("space has no orthonormalized tail")
    vals = np.array([p.evaluate_float(point) for p in space.psi])
    out = []
    for idx, combo in space.symplectic_tail.blocks:
        block = vals[list(idx)]
        out.append(block @ combo)
    return np.concatenate(out)


# ---------------------------------------------------------------------------
# type IV: hyperquadrics
# ---------------------------------------------------------------------------

def build_type4(n: int) -> Space:
    desc = SpaceDescriptor("typeIV", (n,))
    ring = PolyRing(tuple(f"z{i}" for i in range(1, n + 1)))
    psi = [ring.var(f"z{i}") for i in range(1, n + 1)]
    q = ring.zero()
    for i in range(1, n + 1):
        v = ring.var(f"z{i}")
        q = q + v * v
    psi.append(q.scale(Fraction(1, 2)))
    return Space(desc, n, n + 1, ring, tuple(psi), tuple(psi),
                 distinguished=f"z{n}")


# ---------------------------------------------------------------------------
# the two exceptional spaces
# ---------------------------------------------------------------------------

def build_e16() -> Space:
    desc = SpaceDescriptor("e16")
    ring = PolyRing(M16_VARS)
    psi = tuple(cayley_plane_forms(ring))
    return Space(desc, 16, 26, ring, psi, psi, distinguished="y7")


def build_e27() -> Space:
    desc = SpaceDescriptor("e27")
    ring = PolyRing(M27_VARS)
    psi = tuple(freudenthal_forms(ring))
    return Space(desc, 27, 55, ring, psi, psi, distinguished="x3")


_BUILDERS = {
    "typeI": lambda p: build_type1(*p),
    "typeII": lambda p: build_type2(*p),
    "typeIII": lambda p: build_type3(*p),
    "typeIV": lambda p: build_type4(*p),
    "e16": lambda p: build_e16(),
    "e27": lambda p: build_e27(),
}


def build_space(desc: SpaceDescriptor | str) -> Space:
    if isinstance(desc, str):
        desc = parse_space_spec(desc)
    return _BUILDERS[desc.kind](desc.params)


def space_to_json(space: Space) -> dict:
    return {
        "kind": space.desc.kind,
        "params": list(space.desc.params),
        "n": space.n,
        "N": space.N,
        "distinguished": space.distinguished,
        "psi": [p.to_json() for p in space.psi],
        "psi_numeric_tail": space.symplectic_tail is not None,
        "degenerate_note": space.degenerate_note,
    }


def cell_matrix_point(space: Space, values: Dict[str, GaussRational]):
    """Assemble the matrix (or vector) of a cell point from named values."""
    kind = space.desc.kind
    if kind == "typeI":
        p, q = space.desc.params
        return [[values[f"z{i}_{j}"] for j in range(1, q + 1)] for i in range(1, p + 1)]
    if kind == "typeII":
        n = space.desc.params[0]
        z = GaussRational(0)
        out = [[z for _ in range(n)] for _ in range(n)]
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                v = GaussRational.coerce(values[f"z{i}_{j}"])
                out[i - 1][j - 1] = v
                out[j - 1][i - 1] = -v
        return out
    if kind == "typeIII":
        n = space.desc.params[0]
        out = [[None] * n for _ in range(n)]
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                v = GaussRational.coerce(values[f"z{i}_{j}"])
                out[i - 1][j - 1] = v
                out[j - 1][i - 1] = v
        return out
    return [values[v] for v in space.vars]
