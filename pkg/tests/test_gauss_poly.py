"""Exact scalar and polynomial layer: ring laws, calculus, serialization."""

from fractions import Fraction

import pytest

from hermsym.gauss import GaussRational as G
from hermsym.poly import PolyRing, PolyFraction, poly_from_json
from hermsym.sampling import random_small_gauss, rng_from_seed


def rnd_poly(ring, rng, max_terms=5, max_deg=3):
    terms = {}
    nv = len(ring.vars)
    for _ in range(rng.randint(1, max_terms)):
        exp = tuple(rng.randint(0, max_deg) for _ in range(nv))
        terms[exp] = random_small_gauss(rng)
    out = ring.zero()
    for e, c in terms.items():
        out = out + ring.monomial(e, c)
    return out


def test_gauss_field_ops():
    a, b = G(1, 2), G(Fraction(3, 4), Fraction(-1, 5))
    assert (a / b) * b == a
    assert a * b == b * a
    assert (a + b).conj() == a.conj() + b.conj()
    assert G.i() * G.i() == G(-1)
    with pytest.raises(ZeroDivisionError):
        a / G(0)


def test_basic_products():
    r = PolyRing(["z"])
    z = r.var("z")
    assert (r.one() + z) * (r.one() - z) == r.one() - z * z
    p = rnd_poly(r, rng_from_seed(1))
    assert p + r.zero() == p


def test_two_factor_expansion():
    r = PolyRing(["z1", "z2", "xi1", "xi2"])
    z1, z2, x1, x2 = (r.var(v) for v in r.vars)
    lhs = (r.one() + z1 * x1) * (r.one() + z2 * x2)
    rhs = r.one() + z1 * x1 + z2 * x2 + z1 * z2 * x1 * x2
    assert lhs == rhs


def test_ring_mismatch_raises():
    p = PolyRing(["a"]).var("a")
    q = PolyRing(["b"]).var("b")
    with pytest.raises(ValueError, match="variable sets differ"):
        p + q


def test_ring_axioms_random_triples():
    r = PolyRing(["x", "y"])
    rng = rng_from_seed(7)
    for _ in range(12):
        p, q, s = (rnd_poly(r, rng) for _ in range(3))
        assert (p + q) + s == p + (q + s)
        assert p * q == q * p
        assert p * (q + s) == p * q + p * s
        assert (p * q) * s == p * (q * s)


def test_derivatives_commute_and_examples():
    r = PolyRing(["z", "xi"])
    z, xi = r.var("z"), r.var("xi")
    assert (z * z * xi).derivative("z") == z.scale(2) * xi
    assert r.const(5).derivative("xi").is_zero()
    rng = rng_from_seed(3)
    for _ in range(10):
        p = rnd_poly(r, rng)
        assert p.derivative("z").derivative("xi") == p.derivative("xi").derivative("z")
    with pytest.raises(KeyError):
        z.derivative("w")


def test_quadric_family_derivative():
    n = 3
    names = [f"z{i}" for i in range(1, n + 1)] + [f"xi{i}" for i in range(1, n + 1)]
    r = PolyRing(names)
    rho = r.one()
    sz = r.zero()
    sx = r.zero()
    for i in range(1, n + 1):
        rho = rho + r.var(f"z{i}") * r.var(f"xi{i}")
        sz = sz + r.var(f"z{i}") * r.var(f"z{i}")
        sx = sx + r.var(f"xi{i}") * r.var(f"xi{i}")
    rho = rho + (sz * sx).scale(Fraction(1, 4))
    want = r.var("xi1") + (r.var("z1") * sx).scale(Fraction(1, 2))
    assert rho.derivative("z1") == want


def test_evaluate_exact_and_float():
    r = PolyRing(["z", "xi"])
    p = r.one() + r.var("z") * r.var("xi")
    assert p.evaluate({"z": G(2), "xi": G(3)}) == G(7)
    with pytest.raises(KeyError):
        p.evaluate({"z": G(2)})
    rng = rng_from_seed(11)
    for _ in range(10):
        q = rnd_poly(r, rng)
        pt = {"z": random_small_gauss(rng), "xi": random_small_gauss(rng)}
        exact = complex(q.evaluate(pt))
        approx = q.evaluate_float({k: complex(v) for k, v in pt.items()})
        assert abs(exact - approx) <= 1e-12 * max(1.0, abs(exact))


def test_evaluate_is_multiplicative():
    r = PolyRing(["x", "y"])
    rng = rng_from_seed(5)
    for _ in range(10):
        p, q = rnd_poly(r, rng), rnd_poly(r, rng)
        pt = {"x": random_small_gauss(rng), "y": random_small_gauss(rng)}
        assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)


def test_substitute_fraction():
    r = PolyRing(["z", "t"])
    z, t = r.var("z"), r.var("t")
    frac = (z * z).substitute("z", PolyFraction(r.one() + t, t))
    want_num = (r.one() + t) * (r.one() + t)
    assert (frac.num * (t * t) - want_num * frac.den).is_zero()


def test_substitute_hyperplane_restriction():
    """Restricting the quadric family polynomial to a null hyperplane in the
    last variable removes that variable entirely."""
    n = 3
    names = [f"z{i}" for i in range(1, n + 1)] + [f"xi{i}" for i in range(1, n + 1)]
    r = PolyRing(names)
    rho = r.one()
    sz, sx = r.zero(), r.zero()
    for i in range(1, n + 1):
        rho = rho + r.var(f"z{i}") * r.var(f"xi{i}")
        sz = sz + r.var(f"z{i}") * r.var(f"z{i}")
        sx = sx + r.var(f"xi{i}") * r.var(f"xi{i}")
    rho = rho + (sz * sx).scale(Fraction(1, 4))
    mu1 = G.i()
    image = -(r.one() + r.var("z1").scale(mu1))
    out = rho.substitute("z3", PolyFraction(image, r.one()))
    iz = r.index("z3")
    assert all(e[iz] == 0 for e in out.num.terms)
    assert out.den.is_constant()


def test_scaled_point_substitution_builds_pencil_equation():
    """Substituting a scaled base point turns the family polynomial into the
    first equation of the flattening system."""
    names = ["z1", "z2", "xi1", "xi2", "s"]
    r = PolyRing(names)
    rho = r.one() + r.var("z1") * r.var("xi1") + r.var("z2") * r.var("xi2")
    z0 = {"z1": G(2), "z2": G(Fraction(1, 3))}
    scaled = rho
    for v, val in z0.items():
        scaled = scaled.substitute(v, PolyFraction(r.var("s").scale(val), r.one())).num
    want = (r.one() + r.var("s") * r.var("xi1").scale(G(2))
            + r.var("s") * r.var("xi2").scale(G(Fraction(1, 3))))
    assert scaled == want


def test_support_and_degree():
    r = PolyRing(["z"])
    p = r.one() + r.var("z") * r.var("z")
    assert p.support() == {(0,), (2,)}
    assert p.degree() == 2
    assert r.zero().degree() == -1


def test_reduce_mod_p():
    r = PolyRing(["z"])
    p = r.var("z").scale(3) + r.one()
    m = p.reduce_mod(5)
    assert m.terms == {(1,): 3, (0,): 1}
    bad = r.var("z").scale(Fraction(1, 2))
    with pytest.raises(ValueError, match="denominator"):
        bad.reduce_mod(2)
    imag = r.var("z").scale(G.i())
    with pytest.raises(ValueError, match="non-real"):
        imag.reduce_mod(5)


def test_json_round_trip():
    r = PolyRing(["z", "w"])
    p = r.var("z").scale(G(Fraction(2, 3), Fraction(-1, 7))) + r.one()
    obj = p.to_json()
    assert obj["vars"] == ["z", "w"]
    assert all(isinstance(t["re"], str) for t in obj["terms"])
    assert poly_from_json(obj) == p


def test_fraction_normalize_keeps_value():
    r = PolyRing(["z"])
    z = r.var("z")
    f = PolyFraction(z * z * (r.one() + z).scale(6), z.scale(3))
    g = f.normalize()
    assert f.equals(g)
    assert g.den.degree() <= f.den.degree()


def test_substitution_evaluation_commute():
    """Substituting a fraction then evaluating equals evaluating the
    fraction first and plugging the value in."""
    r = PolyRing(["z", "w"])
    rng = rng_from_seed(21)
    frac = PolyFraction(r.one() + r.var("w"), r.const(2) + r.var("w"))
    for _ in range(10):
        p = rnd_poly(r, rng)
        pt = {"z": random_small_gauss(rng), "w": random_small_gauss(rng)}
        image = dict(pt)
        image["z"] = frac.evaluate(pt)
        direct = p.evaluate(image)
        via_subst = p.substitute("z", frac).evaluate(pt)
        assert (direct - via_subst).is_zero()


def test_compose_fractions_simultaneous_swap():
    """Composition substitutes simultaneously: the coordinate swap must not
    collapse to a repeated variable."""
    r = PolyRing(["z", "w"])
    z, w = r.var("z"), r.var("w")
    p = z * z + w
    swapped = p.compose_fractions({"z": PolyFraction.from_poly(w),
                                   "w": PolyFraction.from_poly(z)})
    assert swapped.den.is_constant()
    want = w * w + z
    assert (swapped.num - want * swapped.den.constant_term()).is_zero()


def test_compose_fractions_identity():
    r = PolyRing(["z", "w"])
    rng = rng_from_seed(5)
    p = rnd_poly(r, rng)
    out = p.compose_fractions({})
    assert out.equals(PolyFraction.from_poly(p))
