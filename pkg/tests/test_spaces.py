"""Space builders: dimensions, embedding invariants, Pfaffians, the
symplectic two-layer system."""

import math

import numpy as np
import pytest
from fractions import Fraction

from hermsym.gauss import GaussRational as G
from hermsym.linalg import det_gauss_elimination, rank_exact
from hermsym.poly import PolyRing
from hermsym.sampling import random_gauss_point, random_small_gauss, rng_from_seed
from hermsym.spaces import (SpaceDescriptor, build_space, build_type1,
                            build_type2, build_type3, build_type4,
                            cell_matrix_point, pfaffian, parse_space_spec,
                            space_to_json, symplectic_tail_eval)

DESK = ["typeI:2,2", "typeI:2,3", "typeII:4", "typeIII:2", "typeIII:3",
        "typeIV:3", "e16", "e27"]


def test_descriptor_validation():
    with pytest.raises(ValueError):
        SpaceDescriptor("typeI", (3, 2))
    with pytest.raises(ValueError):
        SpaceDescriptor("typeIV", (2,))
    with pytest.raises(ValueError):
        SpaceDescriptor("e16", (2,))
    with pytest.raises(ValueError):
        parse_space_spec("typeV:3")
    assert parse_space_spec("typeI:2,3").params == (2, 3)


def test_type1_counts_and_minor():
    s = build_type1(1, 1)
    assert (s.n, s.N) == (1, 1)
    s = build_type1(2, 2)
    assert s.N == 5
    r = s.ring
    det = r.var("z1_1") * r.var("z2_2") - r.var("z1_2") * r.var("z2_1")
    assert s.psi[4] == det
    s = build_type1(2, 3)
    assert s.N == 9
    for p, q in [(1, 2), (2, 2), (2, 3), (3, 3)]:
        s = build_type1(p, q)
        want = sum(math.comb(p, k) * math.comb(q, k) for k in range(1, p + 1))
        assert s.N == want == len(s.psi)


def test_embedding_conventions_all_types():
    for spec in DESK:
        s = build_space(spec)
        for j in range(s.n):
            assert s.psi[j] == s.ring.var(s.vars[j])
        for p in s.psi[s.n:]:
            assert all(sum(e) >= 2 for e in p.terms)
        assert all(p.constant_term().is_zero() for p in s.psi)
        assert s.distinguished in s.vars


def test_pfaffian_basics():
    ring = PolyRing(["a"])
    a = ring.var("a")
    M = [[ring.zero(), a], [-a, ring.zero()]]
    assert pfaffian(M) == a
    M3 = [[ring.zero()] * 3 for _ in range(3)]
    assert pfaffian(M3).is_zero()
    with pytest.raises(ValueError, match="antisymmetric"):
        pfaffian([[a, a], [a, a]])


def test_type2_embedding():
    s = build_type2(4)
    assert (s.n, s.N) == (6, 7)
    r = s.ring
    want = (r.var("z1_2") * r.var("z3_4") - r.var("z1_3") * r.var("z2_4")
            + r.var("z1_4") * r.var("z2_3"))
    assert s.psi[-1] == want
    assert build_type2(5).N == 15
    assert build_type2(3).degenerate_note is not None


def test_pfaffian_partition_vs_recursive_and_square():
    rng = rng_from_seed(9)
    ring = PolyRing(["t"])
    for order in (2, 4, 6, 8):
        M = [[ring.zero()] * order for _ in range(order)]
        for i in range(order):
            for j in range(i + 1, order):
                v = ring.const(random_small_gauss(rng))
                M[i][j] = v
                M[j][i] = -v
        p1 = pfaffian(M, "partition")
        p2 = pfaffian(M, "recursive")
        assert p1 == p2
        if order <= 6:
            pf = p1.constant_term()
            det = det_gauss_elimination(
                [[M[i][j].constant_term() for j in range(order)]
                 for i in range(order)])
            assert (pf * pf - det).is_zero()


def test_type3_two_layers():
    s = build_type3(2)
    assert (s.n, s.N) == (3, 4)
    assert len(s.pairing_psi) == 5
    assert [str(p) for p in s.psi[:3]] == ["1*z1_1", "1*z1_2", "1*z2_2"]
    s = build_type3(3)
    assert (s.n, s.N) == (6, 13)
    assert len(s.pairing_psi) == 19
    # exact independence of the selected basis
    monomials = sorted({e for p in s.psi for e in p.terms})
    rows = [[p.coeff(e) for e in monomials] for p in s.psi]
    assert rank_exact(rows) == s.N


def test_type3_numeric_tail():
    rng = rng_from_seed(4)
    for n in (2, 3):
        s = build_type3(n)
        # sqrt(2) pattern on the degree-1 block
        idx, combo = s.symplectic_tail.blocks[0]
        diag = np.abs(np.diag(combo @ combo.T.conj()))
        pattern = []
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                pattern.append(1.0 if i == j else 2.0)
        assert np.allclose(sorted(diag), sorted(pattern))
        # pairing identity: 1 + sum tail(z) tail(xi) = det(I + Z Xi^t)
        for _ in range(20):
            z = random_gauss_point(rng, s.vars, small=True)
            xi = random_gauss_point(rng, s.vars, small=True)
            t1 = symplectic_tail_eval(s, {v: complex(z[v]) for v in s.vars})
            t2 = symplectic_tail_eval(s, {v: complex(xi[v]) for v in s.vars})
            Z = cell_matrix_point(s, z)
            X = cell_matrix_point(s, xi)
            M = [[(G(1 if i == j else 0)
                   + sum((Z[i][k] * X[j][k] for k in range(n)), G(0)))
                  for j in range(n)] for i in range(n)]
            det = complex(det_gauss_elimination(M))
            assert abs(1.0 + t1 @ t2 - det) < 1e-9
        # float full row rank of the tail system at tolerance 1e-9
        pts = []
        rng_np = np.random.default_rng(5)
        for _ in range(3 * s.N):
            vals = rng_np.uniform(-0.5, 0.5, len(s.vars)) \
                + 1j * rng_np.uniform(-0.5, 0.5, len(s.vars))
            pts.append(symplectic_tail_eval(
                s, {v: vals[i] for i, v in enumerate(s.vars)}))
        sv = np.linalg.svd(np.array(pts), compute_uv=False)
        assert sv[s.N - 1] > 1e-9


def test_type4_and_defining_equation():
    s = build_type4(3)
    r = s.ring
    q = (r.var("z1") ** 2 + r.var("z2") ** 2 + r.var("z3") ** 2).scale(Fraction(1, 2))
    assert s.psi[3] == q
    # homogeneous defining equation: sum psi_i^2 - 2 * 1 * psi_{n+1} = 0
    total = r.zero()
    for i in range(3):
        total = total + s.psi[i] * s.psi[i]
    assert (total - s.psi[3].scale(2)).is_zero()


def test_exceptional_dimensions():
    e = build_space("e16")
    assert (e.n, e.N) == (16, 26)
    r = e.ring
    want = r.zero()
    for i in range(8):
        want = want + r.var(f"y{i}") * r.var(f"x{i}")
    assert e.psi[16] == want
    e = build_space("e27")
    assert (e.n, e.N) == (27, 55)


def test_space_json():
    s = build_space("typeI:2,2")
    obj = space_to_json(s)
    assert obj["kind"] == "typeI" and obj["n"] == 4 and obj["N"] == 5
    assert len(obj["psi"]) == 5
    assert obj["psi_numeric_tail"] is False
    assert space_to_json(build_space("typeIII:2"))["psi_numeric_tail"] is True
