"""Prime-field scalars, grevlex monomials and homogeneous polynomials.

Polynomials are stored sparsely as ``{exponent tuple: residue}`` maps.  For
the degree-truncated linear algebra used everywhere else, a :class:`Ring`
also hands out dense coefficient vectors over the grevlex-sorted monomial
basis of each degree, together with cached product index tables.
"""

from __future__ import annotations

import re
from functools import lru_cache
from math import comb

import numpy as np

DEFAULT_PRIME = 31991

# exponent vectors are packed base-64 into one int64; degrees stay below 64
_RADIX = 64


def scalar_inverse(a: int, p: int) -> int:
    """Inverse of ``a`` modulo the prime ``p`` (extended Euclid)."""
    a %= p
    if a == 0:
        raise ZeroDivisionError("non-invertible")
    r0, r1, s0, s1 = p, a, 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    return s0 % p


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def grevlex_key(m: tuple) -> tuple:
    """Sort key: ``a < b`` in grevlex iff ``grevlex_key(a) < grevlex_key(b)``."""
    return (sum(m), tuple(-e for e in reversed(m)))


@lru_cache(maxsize=None)
def monomials_of_degree(n_vars: int, d: int) -> tuple:
    """All monomials of degree ``d`` in ``n_vars`` variables, grevlex-descending.

    The leading (largest) monomial comes first, so pivot columns of an
    echelon form are leading terms.
    """
    if d < 0:
        return ()
    if n_vars == 1:
        return ((d,),)
    out = []

    def rec(prefix, remaining, k):
        if k == n_vars - 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + (e,), remaining - e, k + 1)

    rec((), d, 0)
    out.sort(key=grevlex_key, reverse=True)
    return tuple(out)


def encode(exps) -> np.ndarray:
    """Pack exponent rows into int64 codes (additive: code(a+b) = code(a)+code(b))."""
    e = np.asarray(exps, dtype=np.int64)
    weights = _RADIX ** np.arange(e.shape[-1], dtype=np.int64)
    return e @ weights


class Ring:
    """Graded polynomial ring F_p[x0..x{n-1}] with cached degree-wise bases."""

    def __init__(self, n_vars: int, p: int = DEFAULT_PRIME):
        if n_vars < 1:
            raise ValueError("need at least one variable")
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.n = n_vars
        self.p = p
        self._index = {}
        self._codes = {}
        self._mul = {}

    def __repr__(self):
        return f"Ring(n_vars={self.n}, p={self.p})"

    def __eq__(self, other):
        return isinstance(other, Ring) and (self.n, self.p) == (other.n, other.p)

    def __hash__(self):
        return hash((self.n, self.p))

    # -- bases -----------------------------------------------------------
    def basis(self, d: int) -> tuple:
        return monomials_of_degree(self.n, d)

    def dim(self, d: int) -> int:
        return comb(d + self.n - 1, self.n - 1) if d >= 0 else 0

    def index(self, d: int) -> dict:
        """Map monomial -> position in :meth:`basis`."""
        idx = self._index.get(d)
        if idx is None:
            idx = {m: i for i, m in enumerate(self.basis(d))}
            self._index[d] = idx
        return idx

    def _sorted_codes(self, d):
        got = self._codes.get(d)
        if got is None:
            b = self.basis(d)
            codes = encode(b) if b else np.zeros(0, dtype=np.int64)
            order = np.argsort(codes)
            got = (codes[order], order)
            self._codes[d] = got
        return got

    def lookup_codes(self, codes: np.ndarray, d: int) -> np.ndarray:
        """Positions in the degree-``d`` basis of packed monomial codes."""
        sc, order = self._sorted_codes(d)
        pos = np.searchsorted(sc, codes)
        return order[pos]

    def exponents(self, d: int) -> np.ndarray:
        b = self.basis(d)
        if not b:
            return np.zeros((0, self.n), dtype=np.int64)
        return np.asarray(b, dtype=np.int64)

    def mul_table(self, d1: int, d2: int) -> np.ndarray:
        """``T[i, j]`` = index of basis(d1)[i] * basis(d2)[j] in basis(d1+d2)."""
        key = (d1, d2)
        t = self._mul.get(key)
        if t is None:
            c1 = encode(self.exponents(d1)) if d1 >= 0 else np.zeros(0, np.int64)
            c2 = encode(self.exponents(d2)) if d2 >= 0 else np.zeros(0, np.int64)
            prod = c1[:, None] + c2[None, :]
            t = self.lookup_codes(prod.ravel(), d1 + d2).reshape(prod.shape)
            self._mul[key] = t
        return t

    # -- constructors ----------------------------------------------------
    def var(self, i: int) -> "HomogPoly":
        e = [0] * self.n
        e[i] = 1
        return HomogPoly(self, {tuple(e): 1})

    def gens(self) -> list:
        return [self.var(i) for i in range(self.n)]

    def one(self) -> "HomogPoly":
        return HomogPoly(self, {(0,) * self.n: 1})

    def zero(self) -> "HomogPoly":
        return HomogPoly(self, {})

    def monomial(self, exps, coeff: int = 1) -> "HomogPoly":
        return HomogPoly(self, {tuple(exps): coeff})

    def random_form(self, d: int, rng: np.random.Generator) -> "HomogPoly":
        coeffs = rng.integers(0, self.p, size=self.dim(d))
        return self.from_vector(coeffs, d)

    def from_vector(self, v, d: int) -> "HomogPoly":
        v = np.asarray(v, dtype=np.int64) % self.p
        b = self.basis(d)
        nz = np.nonzero(v)[0]
        return HomogPoly(self, {b[i]: int(v[i]) for i in nz}, _trusted=True)

    def dense_mul(self, a: np.ndarray, d1: int, b: np.ndarray, d2: int) -> np.ndarray:
        """Product of dense coefficient vectors of degrees d1 and d2."""
        t = self.mul_table(d1, d2)
        ia = np.nonzero(a)[0]
        ib = np.nonzero(b)[0]
        out = np.zeros(self.dim(d1 + d2), dtype=np.float64)
        if len(ia) and len(ib):
            w = np.outer(a[ia].astype(np.float64), b[ib].astype(np.float64)) % self.p
            np.add.at(out, t[np.ix_(ia, ib)].ravel(), w.ravel())
        return (np.fmod(out, self.p)).astype(np.int64)

    # -- text format -----------------------------------------------------
    def header(self) -> str:
        return f"ring p={self.p} vars={self.n}"

    def parse(self, text: str) -> "HomogPoly":
        return parse_poly(self, text)


class HomogPoly:
    """Homogeneous polynomial with coefficients in F_p.

    Zero coefficients are never stored; the zero polynomial has empty
    ``terms`` and ``degree`` None.
    """

    __slots__ = ("ring", "terms", "degree")

    def __init__(self, ring: Ring, terms: dict, _trusted: bool = False):
        self.ring = ring
        if not _trusted:
            p = ring.p
            clean = {}
            for m, c in terms.items():
                c %= p
                if c:
                    m = tuple(int(e) for e in m)
                    if len(m) != ring.n or min(m) < 0:
                        raise ValueError(f"bad exponent vector {m}")
                    clean[m] = c
            terms = clean
        self.terms = terms
        degs = {sum(m) for m in terms}
        if len(degs) > 1:
            raise ValueError("polynomial is not homogeneous")
        self.degree = degs.pop() if degs else None

    # -- basic protocol --------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.one() * other if other else self.ring.zero()
        return isinstance(other, HomogPoly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"HomogPoly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)

    def _check(self, other):
        if self.ring != other.ring:
            raise ValueError("modulus mismatch" if self.ring.p != other.ring.p else "ring mismatch")

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.degree != other.degree:
            raise ValueError("adding forms of different degrees")
        p = self.ring.p
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return HomogPoly(self.ring, out, _trusted=True)

    def __neg__(self):
        p = self.ring.p
        return HomogPoly(self.ring, {m: p - c for m, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "HomogPoly":
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return HomogPoly(self.ring, {m: v * c % p for m, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        self._check(other)
        if not self.terms or not other.terms:
            return self.ring.zero()
        p = self.ring.p
        if len(self.terms) * len(other.terms) > 4000:
            d1, d2 = self.degree, other.degree
            return self.ring.from_vector(
                self.ring.dense_mul(self.to_vector(), d1, other.to_vector(), d2), d1 + d2
            )
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return HomogPoly(self.ring, {m: c for m, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def mul_monomial(self, mono: tuple, c: int = 1) -> "HomogPoly":
        p = self.ring.p
        return HomogPoly(
            self.ring,
            {tuple(a + b for a, b in zip(m, mono)): v * c % p for m, v in self.terms.items()},
            _trusted=True,
        )

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    # -- leading data (grevlex) -------------------------------------------
    def leading_monomial(self) -> tuple:
        return max(self.terms, key=grevlex_key)

    def leading_coefficient(self) -> int:
        return self.terms[self.leading_monomial()]

    def monic(self) -> "HomogPoly":
        return self.scale(scalar_inverse(self.leading_coefficient(), self.ring.p))

    # -- evaluation and dense form ------------------------------------------
    def evaluate(self, point) -> int:
        if len(point) != self.ring.n:
            raise ValueError("point has wrong length")
        p = self.ring.p
        total = 0
        for m, c in self.terms.items():
            t = c
            for x, e in zip(point, m):
                if e:
                    t = t * pow(int(x), e, p) % p
            total += t
        return total % p

    def to_vector(self, d: int = None) -> np.ndarray:
        if d is None:
            d = self.degree
        if self.terms and d != self.degree:
            raise ValueError("degree mismatch")
        v = np.zeros(self.ring.dim(d), dtype=np.int64)
        idx = self.ring.index(d)
        for m, c in self.terms.items():
            v[idx[m]] = c
        return v

    def substitute(self, images: list) -> "HomogPoly":
        """Compose with a map sending x_i to the form ``images[i]``."""
        if len(images) != self.ring.n:
            raise ValueError("need one image per variable")
        target = images[0].ring
        acc = None
        cache = {}
        for m, c in self.terms.items():
            t = None
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = images[i] ** e
                    t = cache[key] if t is None else t * cache[key]
            if t is None:
                t = target.one()
            t = t.scale(c)
            acc = t if acc is None else acc + t
        return acc if acc is not None else target.zero()


# -- text format -------------------------------------------------------------

_TERM = re.compile(r"([+-]?)\s*([^+-]+)")


def format_poly(f: HomogPoly) -> str:
    if not f.terms:
        return "0"
    parts = []
    for m in sorted(f.terms, key=grevlex_key, reverse=True):
        c = f.terms[m]
        factors = [f"x{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(m) if e]
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append("*".join(factors))
        else:
            parts.append(f"{c}*" + "*".join(factors))
    return " + ".join(parts)


def parse_poly(ring: Ring, text: str) -> HomogPoly:
    text = text.strip()
    if text in ("", "0"):
        return ring.zero()
    terms = {}
    p = ring.p
    for sign, body in _TERM.findall(text.replace(" ", "")):
        coeff = 1
        exps = [0] * ring.n
        for factor in body.split("*"):
            if not factor:
                continue
            if factor[0] == "x":
                name, _, power = factor.partition("^")
                i = int(name[1:])
                if i >= ring.n:
                    raise ValueError(f"variable {name} outside ring with {ring.n} vars")
                exps[i] += int(power) if power else 1
            else:
                coeff *= int(factor)
        if sign == "-":
            coeff = -coeff
        key = tuple(exps)
        terms[key] = (terms.get(key, 0) + coeff) % p
    return HomogPoly(ring, terms)


def write_polys(ring: Ring, polys, comments=()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(ring.header())
    lines.extend(format_poly(f) for f in polys)
    return "\n".join(lines) + "\n"


def read_polys(text: str):
    """Parse the shared text format; returns ``(ring, [polys])``."""
    ring = None
    polys = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("ring"):
            fields = dict(tok.split("=") for tok in line.split()[1:])
            ring = Ring(int(fields["vars"]), int(fields["p"]))
            continue
        if ring is None:
            raise ValueError("missing 'ring p=<prime> vars=<n>' header")
        polys.append(parse_poly(ring, line))
    if ring is None:
        raise ValueError("missing 'ring p=<prime> vars=<n>' header")
    return ring, polys
