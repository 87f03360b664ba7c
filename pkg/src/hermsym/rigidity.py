"""Machine checks for the three rigidity hypotheses and the
volume-preserving map equation.

Everything rank- or determinant-shaped runs in exact Gaussian-rational
arithmetic; metric-flavored checks (volume equation, isometry pullback,
degeneracy relation extraction) run in floats against stated tolerances.
Genericity arguments become seeded randomized searches, so identical seeds
reproduce identical reports.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .gauss import GaussRational
from .linalg import RankTracker, det_exact, rank_exact
from .maps import RationalMap, compose_psi
from .poly import Polynomial, PolyFraction
from .sampling import random_small_gauss, rng_from_seed
from .segre import SegreFamily, conj_name, hyperplane_mu, _engine
from .spaces import Space


# ---------------------------------------------------------------------------
# jet calculus in the truncated variables
# ---------------------------------------------------------------------------

def truncated_vars(space: Space) -> Tuple[str, ...]:
    return tuple(v for v in space.vars if v != space.distinguished)


def _multiindices(width: int, weight: int):
    """All exponent tuples of the given total weight, lexicographic."""
    if weight == 0:
        yield (0,) * width
        return
    for combo in itertools.combinations_with_replacement(range(width), weight):
        out = [0] * width
        for i in combo:
            out[i] += 1
        yield tuple(out)


def multiindices_upto(width: int, max_weight: int):
    out = []
    for w in range(max_weight + 1):
        out.extend(sorted(_multiindices(width, w)))
    return out


def _derive(obj, var: str):
    return obj.derivative(var)


def _evaluate(obj, point):
    return obj.evaluate(point)


class JetTable:
    """Cache of iterated derivatives of a polynomial (or fraction) system
    with respect to a list of commuting first-order operators.

    Operators are either plain coordinate derivatives (``fields`` is a list
    of variable names) or constant-coefficient directional derivatives
    (``fields`` a list of {var: coeff} dicts)."""

    def __init__(self, system: Sequence, fields: Sequence):
        self.system = list(system)
        self.fields = list(fields)
        self.cache: Dict[Tuple[int, ...], List] = {(0,) * len(fields): self.system}

    def _apply_field(self, obj, k: int):
        f = self.fields[k]
        if isinstance(f, str):
            return _derive(obj, f)
        out = None
        for var, coeff in f.items():
            term = _derive(obj, var)
            if isinstance(term, Polynomial):
                term = term.scale(coeff)
            else:
                term = _scale_fraction(term, coeff)
            out = term if out is None else out + term
        return out

    def rows(self, beta: Tuple[int, ...]) -> List:
        if beta in self.cache:
            return self.cache[beta]
        k = next(i for i, b in enumerate(beta) if b > 0)
        parent = tuple(b - (1 if i == k else 0) for i, b in enumerate(beta))
        prows = self.rows(parent)
        rows = [self._apply_field(p, k) for p in prows]
        self.cache[beta] = rows
        return rows


def _scale_fraction(frac: PolyFraction, coeff) -> PolyFraction:
    return PolyFraction(frac.num.scale(GaussRational.coerce(coeff)), frac.den)


def _psi_system(space: Space, F: RationalMap) -> List:
    """psi o F, simplified to plain polynomials when F is polynomial."""
    comps = compose_psi(space, F)
    if F.is_polynomial():
        out = []
        for f in comps:
            c = f.den.constant_term()
            out.append(f.num.scale(GaussRational(1) / c))
        return out
    return comps


def _sample_jet_point(space: Space, system, rng) -> Dict[str, GaussRational]:
    for _ in range(64):
        pt = {v: random_small_gauss(rng) for v in space.vars}
        try:
            for s in system:
                _evaluate(s, pt)
        except ZeroDivisionError:
            continue
        return pt
    raise ArithmeticError("could not sample a regular point for the jet matrix")


def jet_rank(space: Space, F: RationalMap, k: int, trials: int = 3,
             seed: int = 0, system=None) -> int:
    """Exact rank of the order-<=k truncated-variable jet of psi o F,
    maximized over random rational points near 0."""
    system = _psi_system(space, F) if system is None else list(system)
    table = JetTable(system, list(truncated_vars(space)))
    betas = multiindices_upto(len(truncated_vars(space)), k)
    rng = rng_from_seed(seed)
    best = 0
    for _ in range(trials):
        pt = _sample_jet_point(space, system, rng)
        tracker = RankTracker(len(system))
        for beta in betas:
            row = [_evaluate(x, pt) for x in table.rows(beta)]
            tracker.add_row(row)
            if tracker.rank == len(system):
                break
        best = max(best, tracker.rank)
        if best == len(system):
            break
    return best


def rank_monotonicity_probe(space: Space, F: RationalMap, kmax: int,
                            trials: int = 3, seed: int = 0,
                            system=None) -> List[int]:
    ranks = [jet_rank(space, F, k, trials, seed, system=system)
             for k in range(kmax + 1)]
    for a, b in zip(ranks, ranks[1:]):
        if b < a:
            raise ArithmeticError("jet rank decreased with order; internal error")
    return ranks


# ---------------------------------------------------------------------------
# tangent frames along the family and the nondegeneracy determinant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TangentFrame:
    """First-order fields tangent to the family.

    kind 'segre': L_i = d/dz_i - (rho_i / rho_d) d/dz_d over all cell
    variables except the distinguished d (exact rational coefficients).
    kind 'hyperplane': constant-coefficient fields tangent to a hyperplane
    through a mu-vector with sum(mu^2) + 1 = 0."""
    kind: str
    fields: Tuple                      # names (segre) or direction dicts

    def width(self) -> int:
        return len(self.fields)


def segre_frame(fam: SegreFamily) -> TangentFrame:
    return TangentFrame("segre", tuple(truncated_vars(fam.space)))


def hyperplane_frame(space: Space, mu: Sequence[GaussRational]) -> TangentFrame:
    """Tangent fields of the hyperplane z_last + sum(mu_j z_j) = 0 (quadric)
    or y7 + sum(mu_j y_j) = 0 with plain x-derivatives (16-dim exceptional)."""
    total = GaussRational(0)
    for m in mu:
        total = total + m * m
    if not (total + GaussRational(1)).is_zero():
        raise ValueError("mu must satisfy sum(mu^2) + 1 = 0 exactly")
    kind = space.desc.kind
    if kind == "typeIV":
        n = space.n
        if len(mu) != n - 1:
            raise ValueError("mu length must be n-1")
        fields = tuple({f"z{i + 1}": GaussRational(1), f"z{n}": -mu[i]}
                       for i in range(n - 1))
        return TangentFrame("hyperplane", fields)
    if kind == "e16":
        if len(mu) != 7:
            raise ValueError("mu length must be 7")
        fields = [{f"x{i}": GaussRational(1)} for i in range(8)]
        fields += [{f"y{j}": GaussRational(1), "y7": -mu[j]} for j in range(7)]
        return TangentFrame("hyperplane", tuple(fields))
    raise ValueError("hyperplane frames are defined for typeIV and e16")


class TangencyError(ValueError):
    pass


def _segre_field_apply(fam: SegreFamily, var: str, expr: PolyFraction) -> PolyFraction:
    dist = fam.space.distinguished
    rho_i = fam.rho.derivative(var)
    rho_d = fam.rho.derivative(dist)
    if rho_d.is_zero():
        raise TangencyError("distinguished derivative of the family vanishes identically")
    d_i = expr.derivative(var)
    d_d = expr.derivative(dist)
    # d_i and d_d share the denominator expr.den^2 by construction, so the
    # combination d/dz_i - (rho_i / rho_d) d/dz_d stays on one denominator
    num = d_i.num * rho_d - rho_i * d_d.num
    den = d_i.den * rho_d
    return PolyFraction(num, den)


def tangent_apply(frame: TangentFrame, fam: SegreFamily, expr: PolyFraction,
                  beta: Dict[str, int] | Sequence[int]) -> PolyFraction:
    """Iterated application of the frame fields per the multiindex.

    Composition applies later-listed fields first (the product convention
    L_1^{k_1} L_2^{k_2} ... acting on the right)."""
    if not isinstance(beta, dict):
        beta = {i: b for i, b in enumerate(beta)}
        orders = [(i, beta.get(i, 0)) for i in range(frame.width())]
    else:
        names = list(frame.fields)
        orders = [(names.index(v), k) for v, k in beta.items()]
    out = expr
    for idx, k in reversed(orders):
        for _ in range(k):
            if frame.kind == "segre":
                out = _segre_field_apply(fam, frame.fields[idx], out)
            else:
                direction = frame.fields[idx]
                acc = None
                for var, coeff in direction.items():
                    term = _scale_fraction(out.derivative(var), coeff)
                    acc = term if acc is None else acc + term
                out = acc
    return out


class LambdaUndefinedError(ArithmeticError):
    pass


def lambda_determinant(space: Space, fam: SegreFamily, F: RationalMap,
                       betas: Sequence[Tuple[int, ...]],
                       z0: Dict, xi0: Dict,
                       frame: Optional[TangentFrame] = None) -> GaussRational:
    """Exact determinant of [L^beta_l (psi_j o F)] at a family point.

    Fully symbolic in the frame fields; intended for desk-size spaces (the
    witness search below uses the slice evaluation instead, which agrees at
    the recipe points)."""
    if frame is None:
        frame = segre_frame(fam)
    if not fam.rho_at(z0, xi0).is_zero():
        raise ValueError("point is not on the Segre family")
    point = fam.point_pair(z0, xi0)
    if frame.kind == "segre":
        dist = space.distinguished
        rho_d = fam.rho.derivative(dist)
        rho_d_z0 = rho_d.partial_evaluate(
            {v: point[v] for v in fam.zvars})
        if rho_d_z0.is_zero():
            raise LambdaUndefinedError(
                "Lambda undefined over this Segre variety: distinguished "
                "derivative vanishes identically on it")
        if rho_d.evaluate(point).is_zero():
            raise LambdaUndefinedError("Lambda undefined at point")
    if betas[0] != (0,) * frame.width():
        raise ValueError("first multiindex must be zero")
    psis = compose_psi(space, F)
    if len(betas) != len(psis):
        raise ValueError("need exactly N multiindices")
    ring = fam.ring
    zmap = {v: v for v in space.vars}
    lifted = [PolyFraction(p.num.embed(ring, zmap), p.den.embed(ring, zmap))
              for p in psis]
    rows = []
    for beta in betas:
        row = []
        for f in lifted:
            g = tangent_apply(frame, fam, f, beta)
            row.append(g.evaluate(point))
        rows.append(row)
    return det_exact(rows)


# ---------------------------------------------------------------------------
# recipe points and the witness search
# ---------------------------------------------------------------------------

@dataclass
class WitnessReport:
    found: bool
    z0: Optional[Dict] = None
    xi0: Optional[Dict] = None
    betas: Optional[List[Tuple[int, ...]]] = None
    lambda_value: Optional[GaussRational] = None
    frame_kind: str = "segre"
    max_order_used: int = 0
    candidates_examined: int = 0
    budget_exhausted: bool = False


def special_point(space: Space, rng) -> Tuple[Dict, Dict, Optional[List[GaussRational]]]:
    """The per-type base point construction: a random rational z0 plus the
    distinguished incidence point xi0 (types I/II/III and the 27-dim cell)
    or the hyperplane null direction (quadrics, 16-dim cell).

    Returns (z0, xi0, mu) with mu set for the hyperplane cases."""
    kind = space.desc.kind
    for _ in range(64):
        z0 = {v: random_small_gauss(rng) for v in space.vars}
        if kind in ("typeI", "typeII", "typeIII", "e27"):
            d = space.distinguished
            if z0[d].is_zero():
                continue
            xi0 = {v: GaussRational(0) for v in space.vars}
            xi0[d] = GaussRational(-1) / z0[d]
            return z0, xi0, None
        if kind == "typeIV":
            n = space.n
            mu = hyperplane_mu(n - 1)
            den = GaussRational(0)
            for i in range(n - 1):
                den = den + mu[i] * z0[f"z{i + 1}"]
            den = den + z0[f"z{n}"]
            if den.is_zero():
                continue
            xin = GaussRational(-1) / den
            xi0 = {f"z{i + 1}": mu[i] * xin for i in range(n - 1)}
            xi0[f"z{n}"] = xin
            return z0, xi0, mu
        if kind == "e16":
            mu = hyperplane_mu(7)
            den = GaussRational(0)
            for i in range(7):
                den = den + mu[i] * z0[f"y{i}"]
            den = den + z0["y7"]
            if den.is_zero():
                continue
            xi7 = GaussRational(-1) / den
            xi0 = {f"x{i}": GaussRational(0) for i in range(8)}
            for i in range(7):
                xi0[f"y{i}"] = mu[i] * xi7
            xi0["y7"] = xi7
            return z0, xi0, mu
        raise ValueError(f"unknown kind {kind}")
    raise ArithmeticError("could not construct a special point")


def default_order_bound(space: Space) -> int:
    """Per-type jet order bound for the witness search."""
    kind = space.desc.kind
    if kind in ("typeI", "typeII", "typeIII"):
        return 1 + space.N - space.n
    if kind == "typeIV":
        return 2
    if kind == "e16":
        return 11
    return 29  # 27-dim cell; budget limits the practical search


def witness_fields(space: Space, mu) -> Tuple[str, List]:
    """The slice operators whose iterated action equals the family-tangent
    fields at the special point (plain truncated derivatives, or the
    hyperplane directions for the null-direction types)."""
    kind = space.desc.kind
    if kind in ("typeI", "typeII", "typeIII", "e27"):
        return "segre", list(truncated_vars(space))
    if kind == "typeIV":
        n = space.n
        return "hyperplane", [{f"z{i + 1}": GaussRational(1), f"z{n}": -mu[i]}
                              for i in range(n - 1)]
    fields = [{f"x{i}": GaussRational(1)} for i in range(8)]
    fields += [{f"y{j}": GaussRational(1), "y7": -mu[j]} for j in range(7)]
    return "hyperplane", fields


def find_nondegeneracy_witness(space: Space, fam: SegreFamily, F: RationalMap,
                               max_order: Optional[int] = None,
                               trials: int = 4, seed: int = 0,
                               budget: int = 20000) -> WitnessReport:
    """Greedy exact search for N multiindices with nonvanishing determinant.

    Base points follow the per-type constructions; multiindices are scanned
    breadth-first by weight with lexicographic tie-break, and a row joins
    the collection only when it enlarges the exact rank."""
    if max_order is None:
        max_order = default_order_bound(space)
    rng = rng_from_seed(seed)
    system = _psi_system(space, F)
    N = len(system)
    examined_total = 0
    exhausted = False
    for _ in range(trials):
        z0, xi0, mu = special_point(space, rng)
        if not fam.rho_at(z0, xi0).is_zero():
            raise ArithmeticError("special point is not on the family")
        frame_kind, fields = witness_fields(space, mu)
        table = JetTable(system, fields)
        tracker = RankTracker(N)
        chosen: List[Tuple[int, ...]] = []
        chosen_rows: List[List[GaussRational]] = []
        examined = 0
        width = len(fields)
        for w in range(max_order + 1):
            if tracker.rank == N or examined >= budget:
                break
            for beta in sorted(_multiindices(width, w)):
                if examined >= budget:
                    exhausted = True
                    break
                examined += 1
                row = [_evaluate(x, z0) for x in table.rows(beta)]
                if tracker.add_row(row):
                    chosen.append(beta)
                    chosen_rows.append(row)
                    if tracker.rank == N:
                        break
        examined_total += examined
        if tracker.rank == N:
            lam = det_exact(chosen_rows)
            if lam.is_zero():
                raise ArithmeticError("witness determinant vanished; rank logic broken")
            return WitnessReport(True, z0, xi0, chosen, lam, frame_kind,
                                 max(sum(b) for b in chosen), examined_total,
                                 exhausted)
    return WitnessReport(False, candidates_examined=examined_total,
                         budget_exhausted=exhausted,
                         max_order_used=max_order)


# ---------------------------------------------------------------------------
# degeneracy relation extraction (the jet-collapse consequence)
# ---------------------------------------------------------------------------

@dataclass
class DegeneracyReport:
    slices: List
    coefficients: List[np.ndarray]
    residuals: List[float]
    zero_slice_head_max: float        # max |g_1..g_n| at the slice through 0


class NotDegenerateError(ValueError):
    pass


def degeneracy_relation(polys: Sequence[Polynomial], slice_count: int = 3,
                        grid: int = 40, seed: int = 0,
                        rank_trials: int = 3,
                        null_tol: float = 1e-8) -> DegeneracyReport:
    """Recover per-slice linear relations sum_i g_i(z_m) psi_i(z) = 0.

    The input must be jet-degenerate: rank_{N-m+1} in the truncated
    variables < N (checked first, exactly).  For each fixed value of the
    last variable the coefficient vector is the SVD null direction of the
    evaluation matrix on a float grid, normalized so its largest entry is
    exactly 1."""
    ring = polys[0].ring
    m = len(ring.vars)
    N = len(polys)
    last = ring.vars[-1]

    # exact precondition via the jet machinery
    table = JetTable(list(polys), list(ring.vars[:-1]))
    betas = multiindices_upto(m - 1, N - m + 1)
    rng = rng_from_seed(seed)
    best = 0
    for _ in range(rank_trials):
        pt = {v: random_small_gauss(rng) for v in ring.vars}
        tracker = RankTracker(N)
        for beta in betas:
            tracker.add_row([_evaluate(x, pt) for x in table.rows(beta)])
            if tracker.rank == N:
                break
        best = max(best, tracker.rank)
    if best >= N:
        raise NotDegenerateError("input not degenerate")

    rng2 = np.random.default_rng(seed + 1)
    slices = [Fraction(0)] + [Fraction(k, 10) for k in range(1, slice_count)]
    coefficients, residuals = [], []
    zero_head = None
    for s in slices:
        rows = []
        for _ in range(grid):
            zt = rng2.uniform(-0.4, 0.4, size=m - 1) + 1j * rng2.uniform(-0.4, 0.4, size=m - 1)
            pt = {v: complex(zt[i]) for i, v in enumerate(ring.vars[:-1])}
            pt[last] = complex(float(s))
            rows.append([p.evaluate_float(pt) for p in polys])
        M = np.array(rows, dtype=complex)
        _, sv, vh = np.linalg.svd(M)
        if len(sv) < N:
            sv = np.concatenate([sv, np.zeros(N - len(sv))])
        null_rows = [i for i in range(N) if sv[i] <= null_tol * max(1.0, sv[0])]
        if not null_rows:
            raise NotDegenerateError("input not degenerate")
        basis = vh[null_rows].conj().T          # orthonormal null basis, N x k
        if s == 0:
            # the relation family evaluated at 0 kills the coordinate head;
            # pick the null vector of minimal head norm to expose that
            head = basis[:m, :]
            _, _, vv = np.linalg.svd(head, full_matrices=True)
            g = basis @ vv[-1].conj()
        else:
            g = basis[:, -1]
        k = int(np.argmax(np.abs(g)))
        g = g / g[k]
        coefficients.append(g)
        residuals.append(float(np.max(np.abs(M @ g)) / max(1.0, np.max(np.abs(M)))))
        if s == 0:
            zero_head = float(np.max(np.abs(g[:m])))
    return DegeneracyReport(slices, coefficients, residuals, zero_head)


# ---------------------------------------------------------------------------
# bordered determinant identities
# ---------------------------------------------------------------------------

def _random_matrix(rng, n: int) -> List[List[GaussRational]]:
    return [[random_small_gauss(rng) for _ in range(n)] for _ in range(n)]


def _minor(mat, rows, cols) -> GaussRational:
    sub = [[mat[i][j] for j in cols] for i in rows]
    return det_exact(sub)


def bordered_identity_check(n: int, trials: int = 5, seed: int = 0) -> bool:
    """The bordered two-by-two identity of complementary (n-1)-minors:
    det of the 2x2 block of big minors equals (inner minor) * det(B)."""
    if n < 3:
        raise ValueError("needs n >= 3")
    rng = rng_from_seed(seed)
    for t in range(trials):
        B = _random_matrix(rng, n)
        if t == trials - 1:
            # singular control: replace last row by the sum of the others
            B[n - 1] = [sum((B[i][j] for i in range(n - 1)), GaussRational(0))
                        for j in range(n)]
        detB = det_exact(B)
        for i_set in itertools.combinations(range(n - 1), n - 2):
            for j_set in itertools.combinations(range(n - 1), n - 2):
                top = list(range(n - 1))
                lhs = det_exact([
                    [_minor(B, top, top), _minor(B, top, list(j_set) + [n - 1])],
                    [_minor(B, list(i_set) + [n - 1], top),
                     _minor(B, list(i_set) + [n - 1], list(j_set) + [n - 1])],
                ])
                rhs = _minor(B, i_set, j_set) * detB
                if not (lhs - rhs).is_zero():
                    return False
                if detB.is_zero() and not lhs.is_zero():
                    return False
    return True


def bordered_vanish_probe(n: int, trials: int = 5, seed: int = 0) -> bool:
    """All n bordered determinants det(b_{i1}..b_{i n-1}, a) vanish iff a=0,
    for invertible B (checked on random data plus the a=0 control)."""
    rng = rng_from_seed(seed)
    for _ in range(trials):
        while True:
            B = _random_matrix(rng, n)
            if not det_exact(B).is_zero():
                break
        a = [random_small_gauss(rng) for _ in range(n)]
        if all(x.is_zero() for x in a):
            a[0] = GaussRational(1)
        dets = []
        for cols in itertools.combinations(range(n), n - 1):
            mat = [[B[r][c] for c in cols] + [a[r]] for r in range(n)]
            dets.append(det_exact(mat))
        if all(d.is_zero() for d in dets):
            return False          # nonzero a must leave a nonzero bordered det
        zero = [GaussRational(0)] * n
        for cols in itertools.combinations(range(n), n - 1):
            mat = [[B[r][c] for c in cols] + [zero[r]] for r in range(n)]
            if not det_exact(mat).is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# transversality and the flattening Jacobian seed
# ---------------------------------------------------------------------------

class OffVarietyError(ValueError):
    pass


class FlatteningSeedError(ArithmeticError):
    pass


_XI_DERIV_CACHE: Dict[int, Tuple[SegreFamily, List[Polynomial]]] = {}


def _xi_gradient(fam: SegreFamily, z: Dict, xi0: Dict) -> List[GaussRational]:
    # the family rides along in the cache entry to pin its id (see _engine)
    entry = _XI_DERIV_CACHE.get(id(fam))
    if entry is None or entry[0] is not fam:
        derivs = [fam.rho.derivative(conj_name(v)) for v in fam.zvars]
        _XI_DERIV_CACHE[id(fam)] = (fam, derivs)
    else:
        derivs = entry[1]
    # restrict at xi0 first: recipe points are mostly zero there, which
    # collapses the derivative polynomials before the exact evaluation
    conj_assign = {conj_name(v): GaussRational.coerce(xi0[v]) for v in fam.zvars}
    zpoint = fam.point_pair(z, xi0)
    return [d.partial_evaluate(conj_assign).evaluate(zpoint) for d in derivs]


def transversality_rank(fam: SegreFamily, xi0: Dict, z0: Dict, z1: Dict) -> int:
    """Exact rank of the two conjugate-gradient rows at xi0."""
    if not fam.rho_at(z0, xi0).is_zero() or not fam.rho_at(z1, xi0).is_zero():
        raise OffVarietyError("points are not on the Segre variety of xi0")
    return rank_exact([_xi_gradient(fam, z0, xi0), _xi_gradient(fam, z1, xi0)])


def flattening_jacobian(fam: SegreFamily, xi0: Dict, z0: Dict, z1: Dict):
    """Exact Jacobian determinant of the flattening seed system.

    The system rescales the two incidence equations along fresh parameters
    and pins the remaining coordinates; at the base point its Jacobian in
    the xi variables reduces to a 2x2 minor of the gradient pair bordered
    by identity rows.  Returns (determinant, slot pair)."""
    if not fam.rho_at(z0, xi0).is_zero() or not fam.rho_at(z1, xi0).is_zero():
        raise OffVarietyError("points are not on the Segre variety of xi0")
    r0 = _xi_gradient(fam, z0, xi0)
    r1 = _xi_gradient(fam, z1, xi0)
    if rank_exact([r0, r1]) != 2:
        raise FlatteningSeedError("flattening seed failed: gradients do not "
                                  "intersect transversally")
    n = len(r0)
    for a in range(n):
        for b in range(a + 1, n):
            minor = r0[a] * r1[b] - r0[b] * r1[a]
            if minor.is_zero():
                continue
            rows = [r0, r1]
            for k in range(n):
                if k in (a, b):
                    continue
                e = [GaussRational(0)] * n
                e[k] = GaussRational(-1)
                rows.append(e)
            return det_exact(rows), (a, b)
    raise FlatteningSeedError("flattening seed failed")


def transversality_recipe(fam: SegreFamily, seed: int = 0) -> Tuple[Dict, Dict, Dict]:
    """Per-type (xi0, z0, z1) data realizing transversal Segre pencils."""
    space = fam.space
    kind = space.desc.kind
    rng = rng_from_seed(seed)
    zero = {v: GaussRational(0) for v in space.vars}

    def rnd(exclude=()):
        z = {v: random_small_gauss(rng) for v in space.vars}
        for v, val in exclude:
            z[v] = val
        return z

    if kind in ("typeI", "typeIII"):
        xi0 = dict(zero); xi0["z1_1"] = GaussRational(1)
        z0 = rnd([("z1_1", GaussRational(-1))])
        z1 = dict(z0); z1["z1_2"] = z0["z1_2"] + GaussRational(1, 3)
        return xi0, z0, z1
    if kind == "typeII":
        xi0 = dict(zero); xi0["z1_2"] = GaussRational(1)
        z0 = rnd([("z1_2", GaussRational(-1))])
        z1 = dict(z0); z1["z1_3"] = z0["z1_3"] + GaussRational(1, 3)
        return xi0, z0, z1
    if kind == "typeIV":
        xi0 = dict(zero); xi0["z1"] = GaussRational(1)
        i = GaussRational.i()
        a = random_small_gauss(rng)
        b = a + GaussRational(1, 5)
        z0 = dict(zero); z0["z1"] = a; z0["z2"] = i * (a + 2)
        z1 = dict(zero); z1["z1"] = b; z1["z2"] = -(i * (b + 2))
        return xi0, z0, z1
    if kind == "e16":
        xi0 = dict(zero); xi0["x0"] = GaussRational(1)

        def conic_point(t: Fraction, sign: int):
            # rational points on s^2 = x0^2 + x0 + 1 via lines through (0, 1)
            x0 = GaussRational(Fraction(1 - 2 * t, t * t - 1))
            s = GaussRational(Fraction(-(t * t) + t - 1, t * t - 1))
            z = {v: random_small_gauss(rng) for v in space.vars}
            for k in range(8):
                z[f"x{k}"] = GaussRational(0)
            z["x0"] = x0
            z["x1"] = GaussRational.i() * s * sign
            return z
        z0 = conic_point(Fraction(2), 1)
        z1 = conic_point(Fraction(3), -1)
        return xi0, z0, z1
    if kind == "e27":
        xi0 = dict(zero); xi0["x1"] = GaussRational(1)
        z0 = rnd([("x1", GaussRational(-1))])
        z1 = dict(z0); z1["y0"] = z0["y0"] + GaussRational(1, 3)
        return xi0, z0, z1
    raise ValueError(f"unknown kind {kind}")


# ---------------------------------------------------------------------------
# null directions on hyperplanes
# ---------------------------------------------------------------------------

def solve_null_direction(space_kind: str, mu: Sequence[GaussRational],
                         base: Sequence[GaussRational]) -> List[GaussRational]:
    """Solve for xi with 1 + <base, xi> = 0, sum(xi^2) = 0, xi_j = mu_j xi_last.

    ``space_kind`` 'typeIV' works on the full coordinate vector; 'e16' on
    the 8-component block the hyperplane lives in.  Both defining
    identities are re-verified exactly before returning."""
    if space_kind not in ("typeIV", "e16"):
        raise ValueError("null directions are defined for typeIV and e16")
    mu = [GaussRational.coerce(m) for m in mu]
    base = [GaussRational.coerce(b) for b in base]
    if len(base) != len(mu) + 1:
        raise ValueError("base must have one more component than mu")
    s = GaussRational(0)
    for m in mu:
        s = s + m * m
    if not (s + GaussRational(1)).is_zero():
        raise ValueError("mu must satisfy sum(mu^2) + 1 = 0 exactly")
    den = GaussRational(0)
    for m, b in zip(mu, base[:-1]):
        den = den + m * b
    den = den + base[-1]
    if den.is_zero():
        raise ZeroDivisionError("hyperplane denominator vanishes at base point")
    xin = GaussRational(-1) / den
    xi = [m * xin for m in mu] + [xin]
    total = GaussRational(1)
    square = GaussRational(0)
    for b, x in zip(base, xi):
        total = total + b * x
    for x in xi:
        square = square + x * x
    if not total.is_zero() or not square.is_zero():
        raise ArithmeticError("null direction identities failed; internal error")
    return xi


# ---------------------------------------------------------------------------
# monomial-support facts behind the irreducibility case analysis
# ---------------------------------------------------------------------------

def _z_part_groups(fam: SegreFamily):
    """Group the family polynomial by the exponent pattern of the z block:
    z-exponent tuple -> {xi-exponent tuple: coefficient}."""
    space = fam.space
    nz = len(space.vars)
    groups: Dict[Tuple[int, ...], Dict[Tuple[int, ...], GaussRational]] = {}
    for e, c in fam.rho.terms.items():
        ze, xe = e[:nz], e[nz:]
        groups.setdefault(ze, {})[xe] = c
    return groups


def _pair_index(space: Space) -> Dict[str, Tuple[int, int]]:
    out = {}
    for idx, v in enumerate(space.vars):
        body = v[1:]
        if "_" in body:
            i, j = body.split("_")
            out[v] = (int(i), int(j))
    return out


def _xi_poly(groups, ze, width) -> Dict:
    return groups.get(tuple(ze), {})


def _xi_eq(a: Dict, b: Dict) -> bool:
    return a == b


def _xi_scale(a: Dict, s: Fraction) -> Dict:
    return {e: c * GaussRational(s) for e, c in a.items() if not (c * GaussRational(s)).is_zero()}


def _xi_neg(a: Dict) -> Dict:
    return {e: -c for e, c in a.items()}


def _xi_add(a: Dict, b: Dict) -> Dict:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, GaussRational(0)) + c
        if s.is_zero():
            out.pop(e, None)
        else:
            out[e] = s
    return out


def support_claims(fam: SegreFamily) -> Dict[str, bool]:
    """Verify the monomial-support facts the per-type irreducibility proofs
    rest on, directly on the exact family polynomial (the z-monomial
    coefficients are compared as polynomials in the conjugate variables,
    which is stronger than any sampled specialization)."""
    space = fam.space
    kind = space.desc.kind
    groups = _z_part_groups(fam)
    vindex = {v: i for i, v in enumerate(space.vars)}
    report: Dict[str, bool] = {}

    if kind == "typeI":
        p, q = space.desc.params
        pairs = _pair_index(space)
        ok_sq = ok_row = ok_col = True
        for ze in groups:
            used = [pairs[space.vars[i]] for i, k in enumerate(ze) if k]
            if any(k > 1 for k in ze):
                ok_sq = False
            rows = [ij[0] for ij in used]
            cols = [ij[1] for ij in used]
            if len(rows) != len(set(rows)):
                ok_row = False
            if len(cols) != len(set(cols)):
                ok_col = False
        report["no_squared_entry"] = ok_sq
        report["no_repeated_row"] = ok_row
        report["no_repeated_column"] = ok_col
        return report

    if kind == "typeII":
        pairs = _pair_index(space)
        ok_sq = ok_overlap = True
        for ze in groups:
            used = []
            for i, k in enumerate(ze):
                if k > 1:
                    ok_sq = False
                if k:
                    used.append(set(pairs[space.vars[i]]))
            for a in range(len(used)):
                for b in range(a + 1, len(used)):
                    if used[a] & used[b]:
                        ok_overlap = False
        report["no_squared_entry"] = ok_sq
        report["no_overlapping_index_pairs"] = ok_overlap
        return report

    if kind == "typeIII":
        n = space.desc.params[0]
        report.update(_symplectic_pairing_facts(len(space.vars), n, groups, vindex))
        return report

    if kind == "typeIV":
        n = space.n
        diag = None
        ok_diag = ok_cross = True
        for i in range(1, n + 1):
            ze = [0] * n
            ze[vindex[f"z{i}"]] = 2
            cur = _xi_poly(groups, ze, n)
            if diag is None:
                diag = cur
            elif not _xi_eq(diag, cur):
                ok_diag = False
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                ze = [0] * n
                ze[vindex[f"z{i}"]] = 1
                ze[vindex[f"z{j}"]] = 1
                if _xi_poly(groups, ze, n):
                    ok_cross = False
        report["square_coefficients_equal"] = ok_diag
        report["no_mixed_quadratics"] = ok_cross
        return report

    if kind == "e16":
        nvars = len(space.vars)
        def ze_of(*items):
            ze = [0] * nvars
            for name, k in items:
                ze[vindex[name]] += k
            return tuple(ze)
        okx = oky = True
        for i in range(8):
            for j in range(i + 1, 8):
                if _xi_poly(groups, ze_of((f"x{i}", 1), (f"x{j}", 1)), nvars):
                    okx = False
                if _xi_poly(groups, ze_of((f"y{i}", 1), (f"y{j}", 1)), nvars):
                    oky = False
        report["no_x_cross_terms"] = okx
        report["no_y_cross_terms"] = oky
        bx = [_xi_poly(groups, ze_of((f"x{i}", 2)), nvars) for i in range(8)]
        by = [_xi_poly(groups, ze_of((f"y{i}", 2)), nvars) for i in range(8)]
        report["x_square_coefficients_equal"] = all(_xi_eq(bx[0], b) for b in bx)
        report["y_square_coefficients_equal"] = all(_xi_eq(by[0], b) for b in by)
        ok_pair = True
        for i in range(8):
            for j in range(8):
                if i == j:
                    continue
                a = _xi_poly(groups, ze_of((f"x{i}", 1), (f"y{j}", 1)), nvars)
                b = _xi_poly(groups, ze_of((f"x{j}", 1), (f"y{i}", 1)), nvars)
                if not _xi_eq(a, _xi_neg(b)):
                    ok_pair = False
        report["xy_antisymmetric_pairing"] = ok_pair
        return report

    if kind == "e27":
        nvars = len(space.vars)
        ok_xsq = True
        div_x1x2 = set()
        ok_x3t = ok_x3w = True
        div_x3y0 = set()
        div_t0w0 = set()
        for ze in groups:
            exp = {space.vars[i]: k for i, k in enumerate(ze) if k}
            if any(exp.get(f"x{i}", 0) > 1 for i in (1, 2, 3)):
                ok_xsq = False
            if exp.get("x1") and exp.get("x2"):
                div_x1x2.add(tuple(sorted(exp.items())))
            if exp.get("x3"):
                if any(exp.get(f"t{i}") for i in range(8)):
                    ok_x3t = False
                if any(exp.get(f"w{i}") for i in range(8)):
                    ok_x3w = False
            if exp.get("x3") and exp.get("y0"):
                div_x3y0.add(tuple(sorted(exp.items())))
            if exp.get("t0") and exp.get("w0"):
                div_t0w0.add(tuple(sorted(exp.items())))
        report["no_squared_diagonal"] = ok_xsq
        report["x1x2_multiples"] = div_x1x2 <= {
            (("x1", 1), ("x2", 1)), (("x1", 1), ("x2", 1), ("x3", 1))}
        report["no_x3_t_terms"] = ok_x3t
        report["no_x3_w_terms"] = ok_x3w
        report["x3y0_multiples"] = div_x3y0 <= {
            (("x3", 1), ("y0", 1)), (("x3", 1), ("y0", 2))}
        report["t0w0_multiples"] = div_t0w0 <= {
            (("t0", 1), ("w0", 1)), (("t0", 1), ("w0", 1), ("y0", 1))}
        return report

    raise ValueError(f"unknown kind {kind}")


def symplectic_pairing_facts_poly(poly: Polynomial, n: int) -> Dict[str, bool]:
    """The paired-coefficient laws checked on a single polynomial in the
    symmetric-matrix variables (each minor obeys them individually)."""
    groups = {e: {(): c} for e, c in poly.terms.items()}
    vindex = {v: i for i, v in enumerate(poly.ring.vars)}
    return _symplectic_pairing_facts(len(poly.ring.vars), n, groups, vindex)


def _symplectic_pairing_facts(nvars: int, n: int, groups, vindex) -> Dict[str, bool]:
    """The four paired-coefficient laws of the symmetric-minor expansions,
    checked with xi-coefficients compared as exact polynomials."""

    def vname(i, j):
        return f"z{min(i, j)}_{max(i, j)}"

    def add_var(ze, i, j, k=1):
        ze = list(ze)
        ze[vindex[vname(i, j)]] += k
        return tuple(ze)

    def get(ze):
        return groups.get(tuple(ze), {})

    def halves(d: Dict) -> Dict:
        return {e: c * GaussRational(Fraction(1, 2)) for e, c in d.items()}

    zero = [0] * nvars
    all_z = list(groups.keys())

    ok_a = True
    # law A: P = z_in z_nj Q vs Ptilde = z_ij z_nn Q, ratio -1 (or -1/2 when
    # z_ij divides Q)
    for i in range(1, n):
        for j in range(1, n):
            seen = set()
            for ze in all_z:
                for source in ("P", "T"):
                    if source == "P":
                        if not (ze[vindex[vname(i, n)]] and ze[vindex[vname(j, n)]]):
                            continue
                        if i == j and ze[vindex[vname(i, n)]] < 2:
                            continue
                        q = add_var(add_var(ze, i, n, -1), j, n, -1)
                    else:
                        if not (ze[vindex[vname(i, j)]] and ze[vindex[vname(n, n)]]):
                            continue
                        q = add_var(add_var(ze, i, j, -1), n, n, -1)
                    if q in seen:
                        continue
                    seen.add(q)
                    P = add_var(add_var(q, i, n), j, n)
                    T = add_var(add_var(q, i, j), n, n)
                    cp = get(P)
                    ct = get(T)
                    ratio_half = tuple(q)[vindex[vname(i, j)]] >= 1
                    want = halves(cp) if ratio_half else cp
                    if not _xi_eq(ct, _xi_neg(want)):
                        ok_a = False

    ok_b = True
    # law B: P = z_jn z_(n-1)(n-1) Q vs Ptilde = z_j(n-1) z_(n-1)n Q,
    # ratio -1 (or -2 when z_jn divides Q)
    for j in range(1, n - 1):
        seen = set()
        for ze in all_z:
            for source in ("P", "T"):
                if source == "P":
                    if not (ze[vindex[vname(j, n)]] and ze[vindex[vname(n - 1, n - 1)]]):
                        continue
                    q = add_var(add_var(ze, j, n, -1), n - 1, n - 1, -1)
                else:
                    if not (ze[vindex[vname(j, n - 1)]] and ze[vindex[vname(n - 1, n)]]):
                        continue
                    q = add_var(add_var(ze, j, n - 1, -1), n - 1, n, -1)
                if q in seen:
                    continue
                seen.add(q)
                P = add_var(add_var(q, j, n), n - 1, n - 1)
                T = add_var(add_var(q, j, n - 1), n - 1, n)
                cp = get(P)
                ct = get(T)
                doubled = tuple(q)[vindex[vname(j, n)]] >= 1
                want = {e: c + c for e, c in cp.items()} if doubled else cp
                if not _xi_eq(ct, _xi_neg(want)):
                    ok_b = False

    ok_c = True
    # law C: P = z_i(n-1) z_in Q vs Ptilde = z_ii z_(n-1)n Q, ratio -1
    # (or -1/2 when z_(n-1)n divides Q)
    for i in range(1, n - 1):
        seen = set()
        for ze in all_z:
            for source in ("P", "T"):
                if source == "P":
                    if not (ze[vindex[vname(i, n - 1)]] and ze[vindex[vname(i, n)]]):
                        continue
                    q = add_var(add_var(ze, i, n - 1, -1), i, n, -1)
                else:
                    if not (ze[vindex[vname(i, i)]] and ze[vindex[vname(n - 1, n)]]):
                        continue
                    q = add_var(add_var(ze, i, i, -1), n - 1, n, -1)
                if q in seen:
                    continue
                seen.add(q)
                P = add_var(add_var(q, i, n - 1), i, n)
                T = add_var(add_var(q, i, i), n - 1, n)
                cp = get(P)
                ct = get(T)
                ratio_half = tuple(q)[vindex[vname(n - 1, n)]] >= 1
                want = halves(cp) if ratio_half else cp
                if not _xi_eq(ct, _xi_neg(want)):
                    ok_c = False

    ok_d = True
    # mixed law: a present monomial z_ij z_(n-1)n Q forces the presence of
    # z_i(n-1) z_jn Q or z_in z_j(n-1) Q.  (The literal two-sided coefficient
    # claim -(c1+c2) fails on explicit 3x3 submatrices once n >= 4; the case
    # analyses only ever use this presence implication, which does hold.)
    for i in range(1, n - 1):
        for j in range(1, n - 1):
            if i == j:
                continue
            for ze in all_z:
                if not (ze[vindex[vname(i, j)]] and ze[vindex[vname(n - 1, n)]]):
                    continue
                q = add_var(add_var(ze, i, j, -1), n - 1, n, -1)
                P1 = add_var(add_var(q, i, n - 1), j, n)
                P2 = add_var(add_var(q, i, n), j, n - 1)
                if not get(P1) and not get(P2):
                    ok_d = False

    return {"pairing_law_corner": ok_a, "pairing_law_row": ok_b,
            "pairing_law_diag": ok_c, "pairing_law_mixed": ok_d}


# ---------------------------------------------------------------------------
# finite-field irreducibility oracle
# ---------------------------------------------------------------------------

@dataclass
class OracleResult:
    status: str                       # irreducible_certified | factor_found | inconclusive
    factor: Optional[Dict] = None     # PolyModP terms of a found factor
    detail: str = ""
    required_budget: Optional[int] = None


def specialize_conjugate(fam: SegreFamily, xi: Dict) -> Polynomial:
    """rho(., xi) as an exact polynomial in the cell variables."""
    space = fam.space
    assign = {conj_name(v): GaussRational.coerce(xi[v]) for v in space.vars}
    restricted = fam.rho.partial_evaluate(assign)
    zring = space.ring
    width = len(space.vars)
    terms = {}
    for e, c in restricted.terms.items():
        if any(k for k in e[width:]):
            raise ArithmeticError("conjugate slot survived specialization")
        terms[e[:width]] = c
    return Polynomial(zring, terms)


def _monomials_up_to(nvars: int, d: int):
    out = []
    for w in range(1, d + 1):
        out.extend(sorted(_multiindices(nvars, w)))
    return out


def trial_division_modp(target, d: int, budget: int):
    """Search degree <= d factors with unit constant term by trial division.

    ``target`` is a PolyModP with constant term 1.  Returns (factor, tried)
    where factor is None if no divisor of degree <= d exists; raises
    OverflowError when the candidate space exceeds the budget."""
    from .poly import PolyModP
    p = target.p
    names = target.vars
    nvars = len(names)
    monos = _monomials_up_to(nvars, d)
    count = p ** len(monos)
    if count > budget:
        raise OverflowError(count)
    D = target.degree()
    parts = [target.homogeneous_part(k) for k in range(D + 1)]
    one = PolyModP(names, p, {(0,) * nvars: 1})
    tried = 0
    for coeffs in itertools.product(range(p), repeat=len(monos)):
        if not any(coeffs):
            continue
        tried += 1
        cand = PolyModP(names, p, {m: c for m, c in zip(monos, coeffs) if c})
        cand = cand + one
        # graded quotient: Q_k = R_k - sum_j (P_j * Q_{k-j})
        q_parts = [one]
        ok = True
        for k in range(1, D + 1):
            acc = parts[k]
            for j in range(1, min(k, d) + 1):
                pj = cand.homogeneous_part(j)
                if pj.is_zero():
                    continue
                acc = acc - (pj * q_parts[k - j])
            q_parts.append(acc)
        quotient = q_parts[0]
        for qk in q_parts[1:]:
            quotient = quotient + qk
        prod = cand * quotient
        if prod == target and quotient.degree() >= 1:
            return cand, tried
    return None, tried


def irreducibility_oracle(fam: SegreFamily, xi: Dict, prime: int = 5,
                          budget: int = 10 ** 7) -> OracleResult:
    """Certify irreducibility of rho(., xi) over the rationals by exhaustive
    trial division modulo a prime."""
    return irreducibility_oracle_poly(specialize_conjugate(fam, xi), prime, budget)


def irreducibility_oracle_poly(poly: Polynomial, prime: int = 5,
                               budget: int = 10 ** 7) -> OracleResult:
    """Oracle core on a plain rational polynomial with constant term 1.

    Soundness: a rational factorization of a polynomial with unit constant
    term descends to one with unit constant terms modulo any prime that
    preserves the total degree, so finding no modular factor of degree up
    to deg/2 certifies rational irreducibility.  A found modular factor is
    only a refutation lead (returned for inspection)."""
    deg = poly.degree()
    if deg <= 1:
        return OracleResult("irreducible_certified", detail="degree <= 1")
    if not poly.constant_term() == GaussRational(1):
        raise ValueError("polynomial must have constant term 1")
    reduced = poly.reduce_mod(prime)
    if reduced.degree() != deg:
        return OracleResult("inconclusive",
                            detail=f"degree drops modulo {prime}; pick another prime/xi")
    for d in range(1, deg // 2 + 1):
        try:
            factor, _ = trial_division_modp(reduced, d, budget)
        except OverflowError as exc:
            return OracleResult("inconclusive",
                                detail="candidate space exceeds budget",
                                required_budget=int(exc.args[0]))
        if factor is not None:
            return OracleResult(
                "factor_found",
                factor={"vars": list(factor.vars), "prime": prime,
                        "terms": {str(k): v for k, v in sorted(factor.terms.items())}},
                detail=f"nontrivial factor of degree <= {d} modulo {prime}")
    return OracleResult("irreducible_certified",
                        detail=f"no factor of degree <= {deg // 2} modulo {prime}")


def generic_conjugate_point(fam: SegreFamily, seed: int = 0,
                            prime: int = 5) -> Dict:
    """A small random rational xi that keeps the specialized polynomial at
    full degree and admissible modulo the prime."""
    rng = rng_from_seed(seed)
    space = fam.space
    full = max(p.degree() for p in space.pairing_psi)
    for _ in range(64):
        xi = {v: GaussRational(Fraction(rng.randint(-4, 4))) for v in space.vars}
        poly = specialize_conjugate(fam, xi)
        if poly.degree() != full:
            continue
        try:
            reduced = poly.reduce_mod(prime)
        except ValueError:
            continue
        if reduced.degree() == full:
            return xi
    raise ArithmeticError("no admissible specialization point found")


# ---------------------------------------------------------------------------
# volume equation and isometry pullback checks
# ---------------------------------------------------------------------------

from .sampling import random_complex_ball  # noqa: E402  (shared sampler)
from .segre import einstein_fit  # noqa: E402


def _named(space: Space, pt: Sequence[complex]) -> Dict[str, complex]:
    return {v: complex(pt[i]) for i, v in enumerate(space.vars)}


def _weighted_rho(eng, point: Sequence[complex]) -> float:
    v = eng.psi_eval(np.asarray(point, dtype=complex))
    return 1.0 + float(np.real((eng.w * v) @ v.conj()))


def volume_equation_check(fam: SegreFamily, maps: Sequence[RationalMap],
                          lambdas: Sequence[float], sample_count: int = 25,
                          seed: int = 0, lam: Optional[int] = None,
                          radius: float = 0.2, max_retries: int = 40) -> float:
    """Max relative residual of the volume-preserving equation
    sum_j lambda_j |J_Fj|^2 / rho(F_j, conj F_j)^lam = rho(z, zbar)^-lam."""
    space = fam.space
    if lam is None:
        lam, _, _ = einstein_fit(fam, 24, seed + 7)
    eng = _engine(fam, "invariant")
    rng = rng_from_seed(seed)
    jacs = [F.jacobian_fractions() for F in maps]
    worst = 0.0
    done = 0
    retries = 0
    while done < sample_count:
        pt = random_complex_ball(rng, space.n, radius)
        named = _named(space, pt)
        try:
            lhs = 0.0
            for F, jac, w in zip(maps, jacs, lambdas):
                J = np.array([[f.evaluate_float(named) for f in row] for row in jac])
                det = complex(np.linalg.det(J))
                image = F.evaluate_float(pt)
                rho_f = _weighted_rho(eng, image)
                lhs += w * (abs(det) ** 2) / rho_f ** lam
            rhs = 1.0 / _weighted_rho(eng, pt) ** lam
        except ZeroDivisionError:
            retries += 1
            if retries > max_retries:
                raise
            continue
        worst = max(worst, abs(lhs / rhs - 1.0))
        done += 1
    return worst


def isometry_pullback_check(fam: SegreFamily, F: RationalMap,
                            sample_count: int = 20, seed: int = 0,
                            radius: float = 0.2,
                            points: Optional[Sequence[Sequence[complex]]] = None,
                            max_retries: int = 40) -> float:
    """Max entrywise deviation of the pulled-back metric from the metric."""
    space = fam.space
    eng = _engine(fam, "invariant")
    rng = rng_from_seed(seed)
    jac = F.jacobian_fractions()
    worst = 0.0
    queue = list(points) if points is not None else []
    done = 0
    retries = 0
    while done < sample_count or queue:
        pt = queue.pop(0) if queue else random_complex_ball(rng, space.n, radius)
        named = _named(space, pt)
        try:
            A = np.array([[f.evaluate_float(named) for f in row] for row in jac])
            image = F.evaluate_float(pt)
            g_here, _ = eng.metric(np.asarray(pt, dtype=complex))
            g_image, _ = eng.metric(np.asarray(image, dtype=complex))
        except ZeroDivisionError:
            retries += 1
            if retries > max_retries:
                raise
            continue
        pull = A @ g_image @ A.conj().T
        worst = max(worst, float(np.max(np.abs(pull - g_here))))
        done += 1
    return worst


def volume_equation_complexified(fam: SegreFamily, maps: Sequence[RationalMap],
                                 lambdas: Sequence[float],
                                 sample_count: int = 15, seed: int = 0,
                                 lam: Optional[int] = None,
                                 radius: float = 0.15,
                                 max_retries: int = 40) -> float:
    """Two-variable (polarized) form of the volume equation at independent
    sample pairs; the diagonal xi = conj(z) anchor is the plain check.

    Valid for maps with real rational coefficients (their conjugate maps
    coincide with themselves), which covers the shipped isometry families."""
    space = fam.space
    if lam is None:
        lam, _, _ = einstein_fit(fam, 24, seed + 7)
    eng = _engine(fam, "invariant")
    w = eng.w
    rng = rng_from_seed(seed)
    jacs = [F.jacobian_fractions() for F in maps]

    def rho_pair(a: Sequence[complex], b: Sequence[complex]) -> complex:
        va = eng.psi_eval(np.asarray(a, dtype=complex))
        vb = eng.psi_eval(np.asarray(b, dtype=complex))
        return 1.0 + complex((w * va) @ vb)

    worst = 0.0
    done = 0
    retries = 0
    while done < sample_count:
        z = random_complex_ball(rng, space.n, radius)
        xi = random_complex_ball(rng, space.n, radius)
        nz = _named(space, z)
        nxi = _named(space, xi)
        try:
            lhs = 0j
            for F, jac, weight in zip(maps, jacs, lambdas):
                Jz = np.array([[f.evaluate_float(nz) for f in row] for row in jac])
                Jxi = np.array([[f.evaluate_float(nxi) for f in row] for row in jac])
                fz = F.evaluate_float(z)
                fxi = F.evaluate_float(xi)
                lhs += (weight * complex(np.linalg.det(Jz))
                        * complex(np.linalg.det(Jxi))
                        / rho_pair(fz, fxi) ** lam)
            rhs = 1.0 / rho_pair(z, xi) ** lam
        except ZeroDivisionError:
            retries += 1
            if retries > max_retries:
                raise
            continue
        worst = max(worst, abs(lhs / rhs - 1.0))
        done += 1
    return worst
