"""Segre families, Kahler metrics, Einstein exponents, and projectively
induced automorphisms.

The family polynomial lives in a doubled ring: the cell variables of the
space plus a conjugate copy (prefix ``c``).  Metric work differentiates the
embedding polynomials symbolically once and pushes batches of sample points
through a compiled numpy evaluator; exact identities never touch floats.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .gauss import GaussRational
from .linalg import det_gauss_elimination
from .poly import Polynomial, PolyRing
from .sampling import random_complex_ball, random_gauss_point, rng_from_seed
from .spaces import Space, sym_det


def conj_name(v: str) -> str:
    return "c" + v


@dataclass(frozen=True)
class SegreFamily:
    space: Space
    ring: PolyRing                      # doubled ring: cell vars + conjugates
    rho: Polynomial

    @property
    def zvars(self) -> Tuple[str, ...]:
        return self.space.vars

    @property
    def cvars(self) -> Tuple[str, ...]:
        return tuple(conj_name(v) for v in self.space.vars)

    def point_pair(self, z: Dict, xi: Dict) -> Dict:
        out = {v: GaussRational.coerce(z[v]) for v in self.zvars}
        for v in self.zvars:
            out[conj_name(v)] = GaussRational.coerce(xi[v])
        return out

    def rho_at(self, z: Dict, xi: Dict) -> GaussRational:
        # collapse the conjugate block first; recipe points are sparse there
        conj_assign = {conj_name(v): GaussRational.coerce(xi[v]) for v in self.zvars}
        restricted = self.rho.partial_evaluate(conj_assign)
        return restricted.evaluate(self.point_pair(z, xi))

    def rho_at_float(self, z: Dict, xi: Dict) -> complex:
        pt = {v: complex(z[v]) for v in self.zvars}
        pt.update({conj_name(v): complex(xi[v]) for v in self.zvars})
        return self.rho.evaluate_float(pt)


def build_rho(space: Space) -> SegreFamily:
    """rho(z, xi) = 1 + sum_j psi_j(z) psi_j(xi), over the pairing system."""
    ring = PolyRing(space.vars + tuple(conj_name(v) for v in space.vars))
    zmap = {v: v for v in space.vars}
    cmap = {v: conj_name(v) for v in space.vars}
    rho = ring.one()
    for p in space.pairing_psi:
        rho = rho + p.embed(ring, zmap) * p.embed(ring, cmap)
    return SegreFamily(space, ring, rho)


def rho_swap_symmetric(fam: SegreFamily) -> bool:
    """Exact z <-> xi swap symmetry of the family polynomial."""
    perm = {v: conj_name(v) for v in fam.zvars}
    perm.update({conj_name(v): v for v in fam.zvars})
    return fam.rho.swap_vars(perm) == fam.rho


def segre_membership(fam: SegreFamily, z: Dict, xi: Dict):
    """Exact zero test for rational points, |rho| for float points."""
    exact = all(isinstance(v, GaussRational) for v in z.values()) and \
        all(isinstance(v, GaussRational) for v in xi.values())
    if exact:
        return fam.rho_at(z, xi).is_zero()
    return abs(fam.rho_at_float(z, xi))


# ---------------------------------------------------------------------------
# batched float evaluation of polynomial systems
# ---------------------------------------------------------------------------

class BatchEvaluator:
    """Evaluate a fixed list of polynomials at complex points, vectorized."""

    def __init__(self, polys: Sequence[Polynomial], var_order: Sequence[str]):
        ring = polys[0].ring
        idx = [ring.index(v) for v in var_order]
        coeffs, exps, owner = [], [], []
        for k, p in enumerate(polys):
            for e, c in p.terms.items():
                coeffs.append(complex(c))
                exps.append([e[i] for i in idx])
                owner.append(k)
        self.count = len(polys)
        self.coeffs = np.array(coeffs, dtype=complex)
        self.exps = np.array(exps, dtype=np.int64) if exps else np.zeros((0, len(idx)), dtype=np.int64)
        self.owner = np.array(owner, dtype=np.int64)

    def __call__(self, point: np.ndarray) -> np.ndarray:
        out = np.zeros(self.count, dtype=complex)
        if len(self.coeffs) == 0:
            return out
        powers = np.prod(np.power(point[None, :], self.exps), axis=1)
        np.add.at(out, self.owner, self.coeffs * powers)
        return out


@dataclass
class MetricSample:
    point: List[complex]
    g: np.ndarray
    volume_density: float


def invariant_weights(space: Space) -> np.ndarray:
    """Pairing weights of the isometry-invariant Hermitian form.

    The minor and Pfaffian pairings of the classical types are already
    invariant (weight 1 throughout; the symplectic raw pairing duplicates
    off-diagonal minors, which is exactly its doubling).  The two
    exceptional cells are printed with unit coefficients, so the invariant
    trace form doubles their matrix-off-diagonal blocks; only this weighted
    pairing is Kahler-Einstein (the exponent fits land exactly on the Fano
    indices 12 and 18)."""
    kind = space.desc.kind
    if kind == "e16":
        return np.array([2.0] * 16 + [2.0] * 8 + [1.0] * 2)
    if kind == "e27":
        return np.array([1.0] * 3 + [2.0] * 24 + [1.0] * 3 + [2.0] * 24 + [1.0])
    return np.ones(len(space.pairing_psi))


class _MetricEngine:
    """Caches the symbolic Jacobian of the pairing system per family."""

    def __init__(self, fam: SegreFamily, weights: str):
        space = fam.space
        self.nvars = space.n
        self.order = list(space.vars)
        polys = list(space.pairing_psi)
        derivs = [p.derivative(v) for p in polys for v in self.order]
        self.psi_eval = BatchEvaluator(polys, self.order)
        self.jac_eval = BatchEvaluator(derivs, self.order)
        self.count = len(polys)
        if weights == "invariant":
            self.w = invariant_weights(space)
        else:
            self.w = np.ones(self.count)

    def metric(self, point: Sequence[complex]):
        pt = np.array(point, dtype=complex)
        v = self.psi_eval(pt)
        J = self.jac_eval(pt).reshape(self.count, self.nvars)
        wv = self.w * v
        rho = 1.0 + float(np.real(wv @ v.conj()))
        H = (self.w[:, None] * J).T @ J.conj()
        b = (self.w[:, None] * J).T @ v.conj()
        g = (rho * H - np.outer(b, b.conj())) / rho ** 2
        return g, rho


_ENGINES: Dict[Tuple[int, str], Tuple[SegreFamily, _MetricEngine]] = {}
_ENGINE_LOCK = threading.Lock()


def _engine(fam: SegreFamily, weights: str = "plain") -> _MetricEngine:
    # engines are pure caches; the lock only guards concurrent construction.
    # The family is stored alongside its engine so the id key stays pinned
    # (ids of collected objects are reused, which would alias a fresh family
    # to a stale engine).
    key = (id(fam), weights)
    entry = _ENGINES.get(key)
    if entry is None or entry[0] is not fam:
        with _ENGINE_LOCK:
            entry = _ENGINES.get(key)
            if entry is None or entry[0] is not fam:
                entry = (fam, _MetricEngine(fam, weights))
                _ENGINES[key] = entry
    return entry[1]


def kahler_metric(fam: SegreFamily, point: Sequence[complex],
                  hermitian_tol: float = 1e-10,
                  weights: str = "plain") -> MetricSample:
    """Fubini-Study pullback metric g_{i jbar} = d_i d_jbar log rho(z, zbar).

    The mixed Hessian of log rho at xi = conj(z) is assembled from the exact
    symbolic Jacobian of the embedding system (the two routes agree
    identically because rho is the self-pairing of that system)."""
    g, _ = _engine(fam, weights).metric(point)
    dev = float(np.max(np.abs(g - g.conj().T)))
    if dev > hermitian_tol:
        raise ArithmeticError(f"metric not Hermitian (deviation {dev:g}); "
                              "family polynomial is asymmetric")
    det = np.linalg.det(g)
    return MetricSample(list(point), g, float(det.real))


class EinsteinError(ArithmeticError):
    pass


def einstein_fit(fam: SegreFamily, sample_count: int, seed: int,
                 radius: float = 0.3, weights: str = "invariant"):
    """Fit the integer exponent in volume_density = c * rho(z, zbar)^-lambda.

    Returns (lambda, c, max relative residual over the samples).  The
    exponent is computed from the two most separated samples, rounded, and
    the rounding is then *verified* against all samples; a non-integer fit
    beyond 0.01 raises EinsteinError."""
    rng = rng_from_seed(seed)
    eng = _engine(fam, weights)
    logs = []
    for _ in range(sample_count):
        pt = random_complex_ball(rng, fam.space.n, radius)
        g, rho = eng.metric(np.array(pt, dtype=complex))
        det = np.linalg.det(g).real
        if det <= 0:
            raise EinsteinError("volume density not positive in sample ball")
        logs.append((math.log(rho), math.log(det)))
    lo = min(logs, key=lambda t: t[0])
    hi = max(logs, key=lambda t: t[0])
    if abs(hi[0] - lo[0]) < 1e-9:
        raise EinsteinError("samples do not separate rho; enlarge the ball")
    lam_float = -(hi[1] - lo[1]) / (hi[0] - lo[0])
    lam = round(lam_float)
    if abs(lam_float - lam) > 0.01:
        raise EinsteinError(f"Einstein structure violated: exponent {lam_float!r} "
                            "is not an integer")
    logc = sum(lv + lam * lr for lr, lv in logs) / len(logs)
    c = math.exp(logc)
    residual = max(abs(math.exp(lv + lam * lr - logc) - 1.0) for lr, lv in logs)
    return lam, c, residual


def ricci_residual(fam: SegreFamily, point_count: int, seed: int,
                   lam: Optional[int] = None, h: float = 1e-3,
                   radius: float = 0.25, weights: str = "invariant") -> float:
    """Cross-check the Einstein identity -dd_bar log V = lambda * g entrywise.

    The left side is a finite-difference mixed Hessian of log det g; the
    right side is the symbolically derived metric.  Returns the max relative
    deviation over the sampled points."""
    if lam is None:
        lam, _, _ = einstein_fit(fam, 24, seed, weights=weights)
    rng = rng_from_seed(seed + 1)
    eng = _engine(fam, weights)
    n = fam.space.n

    def logV(pt: np.ndarray) -> float:
        g, _ = eng.metric(pt)
        return math.log(np.linalg.det(g).real)

    worst = 0.0
    for _ in range(point_count):
        z = np.array(random_complex_ball(rng, n, radius), dtype=complex)
        g, _ = eng.metric(z)
        target = lam * g
        hess = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                hess[i, j] = _wirtinger_mixed(logV, z, i, j, h)
        rel = np.max(np.abs(-hess - target)) / max(np.max(np.abs(target)), 1e-12)
        worst = max(worst, float(rel))
    return worst


def _second_diff(f, z, di, dj, h):
    if np.array_equal(di, dj):
        return (f(z + h * di) - 2.0 * f(z) + f(z - h * di)) / h ** 2
    return (f(z + h * di + h * dj) - f(z + h * di - h * dj)
            - f(z - h * di + h * dj) + f(z - h * di - h * dj)) / (4 * h ** 2)


def _wirtinger_mixed(f, z, i, j, h):
    """d^2 f / dz_i dzbar_j by real/imaginary central differences."""
    n = len(z)
    xi = np.zeros(n, dtype=complex); xi[i] = 1.0
    yi = np.zeros(n, dtype=complex); yi[i] = 1.0j
    xj = np.zeros(n, dtype=complex); xj[j] = 1.0
    yj = np.zeros(n, dtype=complex); yj[j] = 1.0j
    fxx = _second_diff(f, z, xi, xj, h)
    fyy = _second_diff(f, z, yi, yj, h)
    fxy = _second_diff(f, z, xi, yj, h)
    fyx = _second_diff(f, z, yi, xj, h)
    return 0.25 * (fxx + fyy) + 0.25j * (fxy - fyx)


# ---------------------------------------------------------------------------
# on-family exact sampling
# ---------------------------------------------------------------------------

def hyperplane_mu(n_minus_1: int):
    """The canonical Gauss-rational solution of sum(mu^2) + 1 = 0."""
    mu = [GaussRational(0)] * n_minus_1
    mu[0] = GaussRational.i()
    return mu


def sample_on_family(fam: SegreFamily, rng) -> Tuple[Dict, Dict]:
    """A random exact rational point (z, xi) with rho(z, xi) = 0.

    Types I/II/III solve the distinguished conjugate slot (rho is linear in
    it); the quadric and the 16-dimensional exceptional space use the null
    direction trick; the 27-dimensional space uses its distinguished-slot
    incidence point."""
    space = fam.space
    kind = space.desc.kind
    for _ in range(64):
        z = random_gauss_point(rng, space.vars, small=True)
        if kind in ("typeI", "typeII", "typeIII"):
            xi = random_gauss_point(rng, space.vars, small=True)
            dist = space.distinguished
            pt = fam.point_pair(z, xi)
            del pt[conj_name(dist)]
            restricted = fam.rho.partial_evaluate(pt)
            # restricted = A * xi_dist + B exactly
            slot = fam.ring.index(conj_name(dist))
            A = B = GaussRational(0)
            for e, c in restricted.terms.items():
                if e[slot] == 1:
                    A = A + c
                elif e[slot] == 0:
                    B = B + c
                else:
                    raise ArithmeticError("distinguished slot not linear")
            if A.is_zero():
                continue
            xi[dist] = -(B / A)
            return z, xi
        if kind == "typeIV":
            n = space.n
            mu = hyperplane_mu(n - 1)
            den = GaussRational(0)
            for k in range(n - 1):
                den = den + mu[k] * z[f"z{k + 1}"]
            den = den + z[f"z{n}"]
            if den.is_zero():
                continue
            xin = GaussRational(-1) / den
            xi = {f"z{k + 1}": mu[k] * xin for k in range(n - 1)}
            xi[f"z{n}"] = xin
            return z, xi
        if kind == "e16":
            mu = hyperplane_mu(7)
            den = GaussRational(0)
            for k in range(7):
                den = den + mu[k] * z[f"y{k}"]
            den = den + z["y7"]
            if den.is_zero():
                continue
            xi7 = GaussRational(-1) / den
            xi = {f"x{k}": GaussRational(0) for k in range(8)}
            for k in range(7):
                xi[f"y{k}"] = mu[k] * xi7
            xi["y7"] = xi7
            return z, xi
        if kind == "e27":
            if z["x3"].is_zero():
                continue
            xi = {v: GaussRational(0) for v in space.vars}
            xi["x3"] = GaussRational(-1) / z["x3"]
            return z, xi
        raise ValueError(f"unknown kind {kind}")
    raise ArithmeticError("could not sample a family point (degenerate draws)")


# ---------------------------------------------------------------------------
# projectively induced maps
# ---------------------------------------------------------------------------

class MapsIntoHyperplaneError(ValueError):
    pass


class NotPreservingError(ValueError):
    pass


def _hom_vector_exact(space: Space, z: Dict) -> List[GaussRational]:
    vec = [GaussRational(1)]
    vec += [p.evaluate(z) for p in space.psi]
    return vec


def apply_projective_map(space: Space, M, z, check_tol: float = 1e-9):
    """Push a cell point through a projective matrix acting on [1, psi].

    Exact mode: ``z`` a dict of GaussRational and ``M`` nested lists of
    GaussRational.  Float mode: ``z`` a complex sequence and ``M`` a numpy
    array.  Returns the image cell point (same shape as the input) and
    verifies the image stays on the embedded variety."""
    if isinstance(z, dict):
        vec = _hom_vector_exact(space, z)
        img = [sum((vec[k] * M[k][j] for k in range(len(vec))), GaussRational(0))
               for j in range(len(vec))]
        if img[0].is_zero():
            raise MapsIntoHyperplaneError("point maps into hyperplane at infinity")
        out = {v: img[j + 1] / img[0] for j, v in enumerate(space.vars)}
        tail = [p.evaluate(out) for p in space.psi[space.n:]]
        for j, t in enumerate(tail):
            want = img[space.n + 1 + j] / img[0]
            if not (t - want).is_zero():
                raise NotPreservingError("matrix does not preserve the space")
        return out
    pt = np.asarray(z, dtype=complex)
    point = {v: pt[i] for i, v in enumerate(space.vars)}
    vec = np.concatenate(([1.0 + 0j], [p.evaluate_float(point) for p in space.psi]))
    img = vec @ np.asarray(M, dtype=complex)
    if abs(img[0]) < 1e-14:
        raise MapsIntoHyperplaneError("point maps into hyperplane at infinity")
    out = img[1:space.n + 1] / img[0]
    outpoint = {v: out[i] for i, v in enumerate(space.vars)}
    scale = max(1.0, float(np.max(np.abs(img / img[0]))))
    for j, p in enumerate(space.psi[space.n:]):
        want = img[space.n + 1 + j] / img[0]
        if abs(p.evaluate_float(outpoint) - want) > check_tol * scale:
            raise NotPreservingError("matrix does not preserve the space")
    return list(out)


def segre_invariance_check(fam: SegreFamily, M, Mbar, sample_count: int, seed: int):
    """For on-family samples, map (z, xi) by (M, Mbar) and measure rho there.

    Returns (max |rho| over samples, whether every value was exactly zero);
    exact inputs keep the whole computation in Gaussian rationals."""
    rng = rng_from_seed(seed)
    space = fam.space
    exact = not isinstance(M, np.ndarray)
    worst = 0.0
    all_zero = True
    for _ in range(sample_count):
        z, xi = sample_on_family(fam, rng)
        if exact:
            z2 = apply_projective_map(space, M, z)
            xi2 = apply_projective_map(space, Mbar, xi)
            val = fam.rho_at(z2, xi2)
            all_zero = all_zero and val.is_zero()
            worst = max(worst, abs(complex(val)))
        else:
            zf = [complex(z[v]) for v in space.vars]
            xif = [complex(xi[v]) for v in space.vars]
            z2 = apply_projective_map(space, M, zf)
            xi2 = apply_projective_map(space, Mbar, xif)
            val = fam.rho_at_float({v: z2[i] for i, v in enumerate(space.vars)},
                                   {v: xi2[i] for i, v in enumerate(space.vars)})
            all_zero = False
            worst = max(worst, abs(val))
    return worst, all_zero


# ---------------------------------------------------------------------------
# Grassmannian compound (induced Pluecker) action
# ---------------------------------------------------------------------------

def _type1_subsets(p: int, q: int):
    """psi-slot order -> column subset of the widened p x (p+q) frame."""
    subsets = [tuple(range(1, p + 1))]                       # constant slot
    from .spaces import minor_index_sets
    for k, rows, cols in minor_index_sets(p, q):
        keep = tuple(sorted(set(range(1, p + 1)) - set(rows)))
        subsets.append(keep + tuple(p + j for j in cols))
    return subsets


def _type1_signs(space: Space) -> List[int]:
    """epsilon with det of frame columns == epsilon * psi, computed symbolically."""
    p, q = space.desc.params
    ring = space.ring
    frame = [[ring.const(1 if i == j else 0) for j in range(1, p + 1)]
             + [ring.var(f"z{i}_{j}") for j in range(1, q + 1)]
             for i in range(1, p + 1)]
    signs = []
    psis = [ring.one()] + list(space.psi)
    for slot, S in enumerate(_type1_subsets(p, q)):
        sub = [[frame[i][s - 1] for s in S] for i in range(p)]
        d = sym_det(sub)
        if d == psis[slot]:
            signs.append(1)
        elif d == -psis[slot]:
            signs.append(-1)
        else:
            raise ArithmeticError("minor does not match embedding slot")
    return signs


def type1_compound_matrix(space: Space, g) -> list:
    """The (N+1)x(N+1) matrix acting on [1, psi] induced by g in GL(p+q).

    Entry (a, b) = eps_a * det g[S_a, S_b] * eps_b (Cauchy-Binet transported
    to the signed minor basis).  ``g`` may be exact (nested GaussRational)
    or complex; the output matches."""
    p, q = space.desc.params
    subsets = _type1_subsets(p, q)
    signs = _type1_signs(space)
    exact = not isinstance(g, np.ndarray)
    size = len(subsets)
    out = []
    for a in range(size):
        row = []
        Sa = subsets[a]
        for b in range(size):
            Sb = subsets[b]
            if exact:
                sub = [[g[i - 1][j - 1] for j in Sb] for i in Sa]
                d = det_gauss_elimination(sub)
                row.append(d * GaussRational(signs[a] * signs[b]))
            else:
                sub = np.asarray(g, dtype=complex)[np.ix_([i - 1 for i in Sa],
                                                          [j - 1 for j in Sb])]
                row.append(signs[a] * signs[b] * complex(np.linalg.det(sub)))
        out.append(row)
    if exact:
        return out
    return np.array(out, dtype=complex)


def type1_moebius(space: Space, g, z: Dict) -> Dict:
    """The fractional-linear action Z -> (g11 + Z g21)^{-1} (g12 + Z g22)."""
    p, q = space.desc.params
    Z = [[GaussRational.coerce(z[f"z{i}_{j}"]) for j in range(1, q + 1)]
         for i in range(1, p + 1)]
    A = [[g[i][j] for j in range(p)] for i in range(p)]
    B = [[g[i][p + j] for j in range(q)] for i in range(p)]
    C = [[g[p + i][j] for j in range(p)] for i in range(q)]
    D = [[g[p + i][p + j] for j in range(q)] for i in range(q)]
    left = [[A[i][j] + sum((Z[i][k] * C[k][j] for k in range(q)), GaussRational(0))
             for j in range(p)] for i in range(p)]
    right = [[B[i][j] + sum((Z[i][k] * D[k][j] for k in range(q)), GaussRational(0))
              for j in range(q)] for i in range(p)]
    inv = _invert_exact(left)
    out = {}
    for i in range(p):
        for j in range(q):
            s = GaussRational(0)
            for k in range(p):
                s = s + inv[i][k] * right[k][j]
            out[f"z{i + 1}_{j + 1}"] = s
    return out


def _invert_exact(m):
    n = len(m)
    aug = [[m[i][j] for j in range(n)] + [GaussRational(1 if i == j else 0) for j in range(n)]
           for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if not aug[i][k].is_zero()), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[k], aug[piv] = aug[piv], aug[k]
        inv = GaussRational(1) / aug[k][k]
        aug[k] = [x * inv for x in aug[k]]
        for i in range(n):
            if i != k and not aug[i][k].is_zero():
                f = aug[i][k]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[k])]
    return [row[n:] for row in aug]


def quadric_permutation_matrix(space: Space, perm: Sequence[int]):
    """Projective matrix permuting the quadric cell coordinates z_1..z_n."""
    n = space.n
    size = space.N + 1
    M = [[GaussRational(1 if a == b else 0) for b in range(size)] for a in range(size)]
    for i in range(n):
        for j in range(n):
            M[1 + i][1 + j] = GaussRational(1 if perm[i] == j else 0)
    return M
