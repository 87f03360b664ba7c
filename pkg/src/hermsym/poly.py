"""Sparse multivariate polynomials over Gaussian rationals.

A polynomial belongs to a ring with a fixed, ordered tuple of variable names.
Terms are stored as ``{exponent_tuple: GaussRational}`` with no zero
coefficients.  Rings for different spaces are distinct values, never shared
globally; mixing rings raises.  All values are immutable after construction,
so they are safe for concurrent read-only use.

Two auxiliary value types live here as well:

* ``PolyFraction`` -- an exact quotient of two polynomials with lazy, gcd-free
  normalization (``normalize()`` only strips scalar and monomial content;
  multivariate gcd is deliberately out of scope).
* ``PolyModP`` -- a polynomial with coefficients reduced modulo a small prime,
  used by the finite-field irreducibility oracle.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Tuple

from .gauss import GaussRational, ZERO, ONE

Exponent = Tuple[int, ...]


class PolyRing:
    """An ordered set of variable names; the ambient ring of a polynomial."""

    __slots__ = ("vars", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")
        object.__setattr__(self, "vars", names)
        object.__setattr__(self, "_index", {v: k for k, v in enumerate(names)})

    def __setattr__(self, name, value):
        raise AttributeError("PolyRing is immutable")

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.vars == other.vars

    def __hash__(self):
        return hash(self.vars)

    def __len__(self):
        return len(self.vars)

    def __repr__(self):
        return f"PolyRing{self.vars}"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    # -- constructors --------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(ONE)

    def const(self, c) -> "Polynomial":
        c = GaussRational.coerce(c)
        if c.is_zero():
            return self.zero()
        return Polynomial(self, {(0,) * len(self.vars): c})

    def var(self, name: str) -> "Polynomial":
        exp = [0] * len(self.vars)
        exp[self.index(name)] = 1
        return Polynomial(self, {tuple(exp): ONE})

    def monomial(self, exp: Exponent, coeff=ONE) -> "Polynomial":
        coeff = GaussRational.coerce(coeff)
        if coeff.is_zero():
            return self.zero()
        if len(exp) != len(self.vars):
            raise ValueError("exponent length does not match ring")
        return Polynomial(self, {tuple(exp): coeff})

    def from_json(self, obj) -> "Polynomial":
        if tuple(obj["vars"]) != self.vars:
            raise ValueError("variable sets differ")
        return poly_from_json(obj)


class Polynomial:
    """Exact sparse polynomial; immutable once built."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Dict[Exponent, GaussRational]):
        clean = {e: c for e, c in terms.items() if not c.is_zero()}
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- predicates / structure ----------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self) -> GaussRational:
        return self.terms.get((0,) * len(self.ring.vars), ZERO)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def support(self) -> set:
        return set(self.terms)

    def coeff(self, exp: Exponent) -> GaussRational:
        return self.terms.get(tuple(exp), ZERO)

    def degree_in(self, names) -> int:
        """Max total degree over the given variable subset; -1 if zero."""
        if not self.terms:
            return -1
        idx = [self.ring.index(n) for n in names]
        return max(sum(e[i] for i in idx) for e in self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- ring arithmetic -------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise ValueError("variable sets differ")

    def _coerce(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            return self.ring.const(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, ZERO) + c
            if s.is_zero():
                terms.pop(e, None)
            else:
                terms[e] = s
        return Polynomial(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        self._check(other)
        out: Dict[Exponent, GaussRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, ZERO) + c1 * c2
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = GaussRational.coerce(c)
        if c.is_zero():
            return self.ring.zero()
        return Polynomial(self.ring, {e: cc * c for e, cc in self.terms.items()})

    # -- calculus ----------------------------------------------------------

    def derivative(self, name: str) -> "Polynomial":
        i = self.ring.index(name)
        out: Dict[Exponent, GaussRational] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k == 0:
                continue
            ne = list(e)
            ne[i] = k - 1
            ne = tuple(ne)
            s = out.get(ne, ZERO) + c * k
            if s.is_zero():
                out.pop(ne, None)
            else:
                out[ne] = s
        return Polynomial(self.ring, out)

    def derivative_multi(self, orders: Dict[str, int]) -> "Polynomial":
        p = self
        for name, k in orders.items():
            for _ in range(k):
                if p.is_zero():
                    return p
                p = p.derivative(name)
        return p

    def directional_derivative(self, direction: Dict[str, GaussRational]) -> "Polynomial":
        """Apply the constant-coefficient field sum(c_v * d/dv)."""
        out = self.ring.zero()
        for name, c in direction.items():
            c = GaussRational.coerce(c)
            if c.is_zero():
                continue
            out = out + self.derivative(name).scale(c)
        return out

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, point: Dict[str, GaussRational]) -> GaussRational:
        vals = []
        for v in self.ring.vars:
            if v not in point:
                raise KeyError(f"missing assignment for {v!r}")
            vals.append(GaussRational.coerce(point[v]))
        total = ZERO
        for e, c in self.terms.items():
            t = c
            for x, k in zip(vals, e):
                for _ in range(k):
                    t = t * x
            total = total + t
        return total

    def evaluate_float(self, point: Dict[str, complex]) -> complex:
        """Float path; non-authoritative (use ``evaluate`` for proofs)."""
        vals = []
        for v in self.ring.vars:
            if v not in point:
                raise KeyError(f"missing assignment for {v!r}")
            vals.append(complex(point[v]))
        total = 0j
        for e, c in self.terms.items():
            t = complex(c)
            for x, k in zip(vals, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def partial_evaluate(self, point: Dict[str, GaussRational]) -> "Polynomial":
        """Substitute exact values for a subset of the variables."""
        idx = {self.ring.index(v): GaussRational.coerce(c) for v, c in point.items()}
        out: Dict[Exponent, GaussRational] = {}
        for e, c in self.terms.items():
            coeff = c
            ne = list(e)
            for i, val in idx.items():
                k = e[i]
                if k:
                    for _ in range(k):
                        coeff = coeff * val
                ne[i] = 0
            if coeff.is_zero():
                continue
            ne = tuple(ne)
            s = out.get(ne, ZERO) + coeff
            if s.is_zero():
                out.pop(ne, None)
            else:
                out[ne] = s
        return Polynomial(self.ring, out)

    def substitute(self, name: str, frac: "PolyFraction") -> "PolyFraction":
        """Replace one variable by a polynomial fraction; exact result."""
        if frac.den.is_zero():
            raise ZeroDivisionError("substitution denominator is identically zero")
        i = self.ring.index(name)
        max_k = max((e[i] for e in self.terms), default=0)
        # powers of num and den up to max_k
        num_p = [frac.num.ring.one()]
        den_p = [frac.den.ring.one()]
        for _ in range(max_k):
            num_p.append(num_p[-1] * frac.num)
            den_p.append(den_p[-1] * frac.den)
        out_num = self.ring.zero()
        for e, c in self.terms.items():
            k = e[i]
            ne = list(e)
            ne[i] = 0
            rest = Polynomial(self.ring, {tuple(ne): c})
            out_num = out_num + rest * num_p[k] * den_p[max_k - k]
        return PolyFraction(out_num, den_p[max_k])

    def compose_fractions(self, images: Dict[str, "PolyFraction"]) -> "PolyFraction":
        """Simultaneous substitution of variables by fractions (same ring)."""
        ring = self.ring
        nums, dens, maxk = [], [], []
        for i, v in enumerate(ring.vars):
            img = images.get(v)
            if img is None:
                img = PolyFraction(ring.var(v), ring.one())
            nums.append(img.num)
            dens.append(img.den)
            maxk.append(max((e[i] for e in self.terms), default=0))
        # power tables per variable
        pow_n = [[ring.one()] for _ in ring.vars]
        pow_d = [[ring.one()] for _ in ring.vars]
        for i in range(len(ring.vars)):
            for _ in range(maxk[i]):
                pow_n[i].append(pow_n[i][-1] * nums[i])
                pow_d[i].append(pow_d[i][-1] * dens[i])
        total = ring.zero()
        for e, c in self.terms.items():
            t = ring.const(c)
            for i, k in enumerate(e):
                if maxk[i] == 0:
                    continue
                t = t * pow_n[i][k] * pow_d[i][maxk[i] - k]
            total = total + t
        # common denominator prod(d_i^maxk_i)
        den = ring.one()
        for i in range(len(ring.vars)):
            if maxk[i]:
                den = den * pow_d[i][maxk[i]]
        return PolyFraction(total, den)

    # -- transport between rings --------------------------------------------

    def embed(self, ring: PolyRing, var_map: Dict[str, str]) -> "Polynomial":
        """Rename variables into a (possibly larger) target ring."""
        slots = [ring.index(var_map[v]) for v in self.ring.vars]
        width = len(ring.vars)
        out: Dict[Exponent, GaussRational] = {}
        for e, c in self.terms.items():
            ne = [0] * width
            for k, s in zip(e, slots):
                ne[s] += k
            out[tuple(ne)] = c
        return Polynomial(ring, out)

    def swap_vars(self, permutation: Dict[str, str]) -> "Polynomial":
        """Permute variables inside the same ring."""
        full = {v: permutation.get(v, v) for v in self.ring.vars}
        return self.embed(self.ring, full)

    # -- finite-field reduction ----------------------------------------------

    def reduce_mod(self, p: int) -> "PolyModP":
        terms: Dict[Exponent, int] = {}
        for e, c in self.terms.items():
            if not c.is_real():
                raise ValueError(f"non-real coefficient {c!r} cannot be reduced mod {p}")
            den = c.re.denominator
            if den % p == 0:
                raise ValueError(
                    f"prime {p} divides the denominator of coefficient {c.re}"
                )
            v = (c.re.numerator * pow(den, -1, p)) % p
            if v:
                terms[e] = v
        return PolyModP(self.ring.vars, p, terms)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        terms = []
        for e in sorted(self.terms):
            c = self.terms[e]
            terms.append({"exp": list(e), "re": str(c.re), "im": str(c.im)})
        return {"vars": list(self.ring.vars), "terms": terms}

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t)):
            c = self.terms[e]
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v
                for v, k in zip(self.ring.vars, e)
                if k
            )
            bits.append(f"{c!r}*{mono}" if mono else f"{c!r}")
        return " + ".join(bits)


def poly_from_json(obj) -> Polynomial:
    ring = PolyRing(obj["vars"])
    terms: Dict[Exponent, GaussRational] = {}
    for t in obj["terms"]:
        exp = tuple(int(k) for k in t["exp"])
        c = GaussRational(Fraction(t["re"]), Fraction(t.get("im", "0")))
        if not c.is_zero():
            terms[exp] = c
    return Polynomial(ring, terms)


class PolyFraction:
    """Exact quotient of two polynomials in the same ring.

    No automatic gcd cancellation; ``normalize`` strips scalar content and a
    common monomial factor only.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial):
        if num.ring != den.ring:
            raise ValueError("variable sets differ")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator polynomial")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("PolyFraction is immutable")

    @staticmethod
    def from_poly(p: Polynomial) -> "PolyFraction":
        return PolyFraction(p, p.ring.one())

    @property
    def ring(self) -> PolyRing:
        return self.num.ring

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        other = self._coerce(other)
        return PolyFraction(self.num * other.den + other.num * self.den,
                            self.den * other.den)

    def __sub__(self, other):
        other = self._coerce(other)
        return PolyFraction(self.num * other.den - other.num * self.den,
                            self.den * other.den)

    def __neg__(self):
        return PolyFraction(-self.num, self.den)

    def __mul__(self, other):
        other = self._coerce(other)
        return PolyFraction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return PolyFraction(self.num * other.den, self.den * other.num)

    def _coerce(self, other) -> "PolyFraction":
        if isinstance(other, PolyFraction):
            return other
        if isinstance(other, Polynomial):
            return PolyFraction.from_poly(other)
        return PolyFraction.from_poly(self.ring.const(other))

    def derivative(self, name: str) -> "PolyFraction":
        return PolyFraction(
            self.num.derivative(name) * self.den - self.num * self.den.derivative(name),
            self.den * self.den,
        )

    def evaluate(self, point) -> GaussRational:
        d = self.den.evaluate(point)
        if d.is_zero():
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        return self.num.evaluate(point) / d

    def evaluate_float(self, point) -> complex:
        d = self.den.evaluate_float(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        return self.num.evaluate_float(point) / d

    def normalize(self) -> "PolyFraction":
        """Cheap canonicalization: strip a common monomial and scalar content.

        Full multivariate gcd is a non-goal; equality testing should use
        ``sub(...).is_zero_fraction()`` which cross-multiplies.
        """
        if self.num.is_zero():
            return PolyFraction(self.ring.zero(), self.ring.one())
        nvars = len(self.ring.vars)
        common = [min(min(e[i] for e in p.terms) for p in (self.num, self.den))
                  for i in range(nvars)]

        def strip(p: Polynomial) -> Polynomial:
            return Polynomial(p.ring, {
                tuple(k - m for k, m in zip(e, common)): c for e, c in p.terms.items()
            })

        num, den = strip(self.num), strip(self.den)
        # scalar content: divide both by the leading coefficient of den
        lead = den.terms[max(den.terms)]
        num = num.scale(ONE / lead)
        den = den.scale(ONE / lead)
        return PolyFraction(num, den)

    def equals(self, other: "PolyFraction") -> bool:
        other = self._coerce(other)
        return (self.num * other.den - other.num * self.den).is_zero()

    def __repr__(self):
        return f"({self.num!r}) / ({self.den!r})"


class PolyModP:
    """Sparse multivariate polynomial with coefficients in F_p."""

    __slots__ = ("vars", "p", "terms")

    def __init__(self, names: Tuple[str, ...], p: int, terms: Dict[Exponent, int]):
        object.__setattr__(self, "vars", tuple(names))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "terms", {e: c % p for e, c in terms.items() if c % p})

    def __setattr__(self, name, value):
        raise AttributeError("PolyModP is immutable")

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def __eq__(self, other):
        return (isinstance(other, PolyModP) and self.p == other.p
                and self.vars == other.vars and self.terms == other.terms)

    def __hash__(self):
        return hash((self.vars, self.p, frozenset(self.terms.items())))

    def __add__(self, other):
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = (terms.get(e, 0) + c) % self.p
        return PolyModP(self.vars, self.p, terms)

    def __sub__(self, other):
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = (terms.get(e, 0) - c) % self.p
        return PolyModP(self.vars, self.p, terms)

    def __mul__(self, other):
        out: Dict[Exponent, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % self.p
        return PolyModP(self.vars, self.p, out)

    def homogeneous_part(self, d: int) -> "PolyModP":
        return PolyModP(self.vars, self.p,
                        {e: c for e, c in self.terms.items() if sum(e) == d})

    def constant(self) -> int:
        return self.terms.get((0,) * len(self.vars), 0)
