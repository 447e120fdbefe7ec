"""Gröbner bases, normal forms and Hilbert series of homogeneous ideals.

The engine works one degree at a time.  Because every ideal here is
homogeneous, the degree-``d`` part ``I_d`` is the row space of the matrix of
all products (monomial × generator); its reduced echelon form, with columns
in grevlex-descending order, already contains the reduced Gröbner basis
elements of degree ``d`` as the rows whose pivot is a *minimal* new leading
monomial.  Degrees are processed in increasing order and the loop stops
once every critical pair surviving the product and chain criteria has been
covered by a degree that was fully reduced.

A plain pairwise Buchberger (:func:`buchberger_classic`) is kept as an
independent cross-check.

Normal forms of whole degrees are tabulated by :class:`Quotient`: the
normal form of every monomial of degree ``d`` as a coordinate vector over
the standard monomials of that degree.  Multiplication maps, membership
tests and Hilbert functions in ``R/I`` all come from these tables.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .fieldpoly import HomogPoly, Ring, encode, grevlex_key

__all__ = [
    "Ideal",
    "HilbertData",
    "Quotient",
    "buchberger",
    "buchberger_classic",
    "normal_form",
    "hilbert_series",
    "hilbert_numerator_monomial",
    "saturate_irrelevant",
    "ideal_quotient",
    "hilbert_function_direct",
]


# ---------------------------------------------------------------------------
# small monomial helpers


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: tuple, b: tuple) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def minimize_monomials(mons) -> list:
    """Minimal generators of the monomial ideal spanned by ``mons``."""
    mons = sorted(set(mons), key=lambda m: (sum(m), m))
    out: list = []
    for m in mons:
        if not any(_divides(g, m) for g in out):
            out.append(m)
    return out


# ---------------------------------------------------------------------------
# ideals


class Ideal:
    """Homogeneous ideal given by generators, with a lazily cached Gröbner basis."""

    def __init__(self, ring: Ring, gens: Sequence[HomogPoly] = ()):
        self.ring = ring
        gens = [g for g in gens if not g.is_zero()]
        for g in gens:
            if g.ring != ring:
                raise ValueError("generator lives in a different ring")
        self.gens = gens
        self._gb = None
        self._quotient = None

    def __repr__(self):
        return f"Ideal({self.ring!r}, {len(self.gens)} generators)"

    @property
    def gb(self) -> list:
        if self._gb is None:
            self._gb = buchberger(self)
        return self._gb

    def quotient(self) -> "Quotient":
        if self._quotient is None:
            self._quotient = Quotient(self.ring, self.gb)
        return self._quotient

    def is_unit(self) -> bool:
        return any(g.degree == 0 for g in self.gb)

    def contains(self, f: HomogPoly) -> bool:
        return normal_form(f, self.gb).is_zero()

    def degree_part(self, d: int) -> np.ndarray:
        """Basis (rows, dense coefficient vectors) of ``I_d``."""
        return self.quotient().ideal_basis(d)

    def dim(self, d: int) -> int:
        return self.ring.dim(d) - self.quotient().hilbert(d)

    def generators_in_degree(self, d: int) -> list:
        return [g for g in self.gens if g.degree == d]

    def minimal_generators(self, max_degree: Optional[int] = None) -> list:
        """A minimal homogeneous generating set (degree by degree)."""
        ring, p = self.ring, self.ring.p
        if self.is_unit():
            return [ring.one()]
        degs = sorted({g.degree for g in self.gens})
        out = []
        for d in degs:
            if max_degree is not None and d > max_degree:
                break
            lower = _products_of_lower(ring, out, d)
            mine = np.array([g.to_vector() for g in self.gens if g.degree == d])
            new = linalg.span_complement(lower, mine, p)
            out.extend(ring.from_vector(v, d) for v in new)
        return out


def _products_of_lower(ring: Ring, polys, d: int) -> np.ndarray:
    """Dense rows spanning ``(polys)_d`` for forms of degree < d (or = d)."""
    rows = []
    for g in polys:
        e = d - g.degree
        if e < 0:
            continue
        rows.append(_monomial_multiples(ring, g, e))
    if not rows:
        return np.zeros((0, ring.dim(d)), dtype=np.int64)
    return np.concatenate(rows)


def _monomial_multiples(ring: Ring, g: HomogPoly, e: int) -> np.ndarray:
    """Matrix whose rows are ``m * g`` for all monomials m of degree e."""
    d = g.degree + e
    vec = g.to_vector()
    nz = np.nonzero(vec)[0]
    T = ring.mul_table(e, g.degree)[:, nz]
    M = np.zeros((ring.dim(e), ring.dim(d)), dtype=np.int64)
    rows = np.repeat(np.arange(ring.dim(e)), len(nz))
    M[rows, T.ravel()] = np.tile(vec[nz], ring.dim(e))
    return M


# ---------------------------------------------------------------------------
# Gröbner bases


def _critical_pairs(lms: list) -> list:
    """Pairs (i, j) surviving the product and chain criteria, with lcm degree."""
    out = []
    for i, j in itertools.combinations(range(len(lms)), 2):
        a, b = lms[i], lms[j]
        if _coprime(a, b):
            continue
        L = _lcm(a, b)
        chain = False
        for k, c in enumerate(lms):
            if k in (i, j) or not _divides(c, L):
                continue
            if _lcm(a, c) != L and _lcm(b, c) != L:
                chain = True
                break
        if not chain:
            out.append((i, j, sum(L)))
    return out


def buchberger(I: Ideal, max_degree: Optional[int] = None) -> list:
    """Reduced Gröbner basis (monic, grevlex) of a homogeneous ideal.

    Returned leading-monomial-descending within each degree, degrees
    increasing.  ``max_degree`` truncates the computation (the result is
    then a Gröbner basis only up to that degree).
    """
    ring, p = I.ring, I.ring.p
    gens = I.gens
    if not gens:
        return []
    if any(g.degree == 0 for g in gens):
        return [ring.one()]
    by_deg: dict = {}
    for g in gens:
        by_deg.setdefault(g.degree, []).append(g)
    top_gen = max(by_deg)
    d = min(by_deg)
    G: list = []  # reduced basis so far
    lms: list = []
    prev = np.zeros((0, ring.dim(d - 1)), dtype=np.int64)  # basis of I_{d-1}
    while True:
        blocks = []
        if prev.shape[0]:
            T = ring.mul_table(1, d - 1)  # (n, dim_{d-1}) -> index in degree d
            for k in range(ring.n):
                B = np.zeros((prev.shape[0], ring.dim(d)), dtype=np.int64)
                B[:, T[k]] = prev
                blocks.append(B)
        if d in by_deg:
            blocks.append(np.array([g.to_vector() for g in by_deg[d]]))
        if blocks:
            M = np.concatenate(blocks)
            r, R, piv = linalg.row_reduce(M, p)
            prev = R[:r]
        else:
            prev = np.zeros((0, ring.dim(d)), dtype=np.int64)
        basis_d = ring.basis(d)
        new = []
        for row, c in zip(prev, _pivots_of(prev)):
            lm = basis_d[c]
            if not any(_divides(m, lm) for m in lms):
                new.append(ring.from_vector(row, d))
        G.extend(new)
        lms.extend(g.leading_monomial() for g in new)
        if max_degree is not None and d >= max_degree:
            break
        if d >= top_gen:
            pending = [deg for _, _, deg in _critical_pairs(lms) if deg > d]
            if not pending:
                break
        d += 1
    return G


def _pivots_of(R: np.ndarray) -> list:
    """Pivot column of each row of an echelon matrix without zero rows."""
    if R.shape[0] == 0:
        return []
    return list(np.argmax(R != 0, axis=1))


def _reduce_sparse(f: HomogPoly, G: list, lms: list) -> HomogPoly:
    """Full reduction of ``f`` by monic ``G`` (sparse, term by term)."""
    p = f.ring.p
    terms = dict(f.terms)
    done = {}
    while terms:
        m = max(terms, key=grevlex_key)
        c = terms.pop(m)
        for g, lm in zip(G, lms):
            if _divides(lm, m):
                q = tuple(a - b for a, b in zip(m, lm))
                for t, ct in g.terms.items():
                    if t == lm:
                        continue
                    mt = tuple(a + b for a, b in zip(t, q))
                    v = (terms.get(mt, 0) - c * ct) % p
                    if v:
                        terms[mt] = v
                    else:
                        terms.pop(mt, None)
                break
        else:
            done[m] = c
    return HomogPoly(f.ring, done, _trusted=True)


def buchberger_classic(I: Ideal) -> list:
    """Textbook Buchberger (sparse polynomials, both criteria, auto-reduced).

    Slow but independent of the linear-algebra engine; used as an oracle.
    """
    ring = I.ring
    G = [g.monic() for g in I.gens if not g.is_zero()]
    if not G:
        return []
    if any(g.degree == 0 for g in G):
        return [ring.one()]
    lms = [g.leading_monomial() for g in G]
    pairs = [(i, j) for i, j in itertools.combinations(range(len(G)), 2)]
    while pairs:
        pairs.sort(key=lambda ij: sum(_lcm(lms[ij[0]], lms[ij[1]])))
        i, j = pairs.pop(0)
        a, b = lms[i], lms[j]
        if _coprime(a, b):
            continue
        L = _lcm(a, b)
        if any(
            k not in (i, j)
            and _divides(lms[k], L)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(G))
        ):
            continue
        s = G[i].mul_monomial(tuple(x - y for x, y in zip(L, a))) - G[j].mul_monomial(
            tuple(x - y for x, y in zip(L, b))
        )
        h = _reduce_sparse(s, G, lms)
        if h.is_zero():
            continue
        h = h.monic()
        if h.degree == 0:
            return [ring.one()]
        G.append(h)
        lms.append(h.leading_monomial())
        n = len(G) - 1
        pairs.extend((k, n) for k in range(n))
    return _autoreduce(G)


def _autoreduce(G: list) -> list:
    G = [g.monic() for g in G]
    keep = []
    lms = [g.leading_monomial() for g in G]
    for i, g in enumerate(G):
        lm = lms[i]
        if any(
            j != i and _divides(lms[j], lm) and (lms[j] != lm or j < i) for j in range(len(G))
        ):
            continue
        keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1 :]
        olms = [h.leading_monomial() for h in others]
        lm = g.leading_monomial()
        tail = HomogPoly(g.ring, {m: c for m, c in g.terms.items() if m != lm}, _trusted=True)
        tail = _reduce_sparse(tail, others, olms)
        out.append(tail + g.ring.monomial(lm) if tail.terms else g.ring.monomial(lm))
    out.sort(key=lambda g: grevlex_key(g.leading_monomial()))
    out.sort(key=lambda g: g.degree)
    return out


def normal_form(f: HomogPoly, G: list) -> HomogPoly:
    """Fully reduced remainder of ``f`` modulo the Gröbner basis ``G``."""
    if f.is_zero() or not G:
        return f
    G = [g if g.leading_coefficient() == 1 else g.monic() for g in G]
    lms = [g.leading_monomial() for g in G]
    return _reduce_sparse(f, G, lms)


# ---------------------------------------------------------------------------
# tabulated normal forms


class Quotient:
    """Degree-wise normal-form tables of ``R/I`` from a reduced Gröbner basis.

    ``nf(d)`` is an integer matrix with one row per monomial of degree d
    (in :meth:`Ring.basis` order) giving its normal form in the basis
    ``standard(d)`` of standard monomials.
    """

    def __init__(self, ring: Ring, gb: list):
        self.ring = ring
        self.gb = [g.monic() for g in gb]
        self.unit = any(g.degree == 0 for g in self.gb)
        self.lms = [g.leading_monomial() for g in self.gb]
        self._lm_arr = (
            np.array(self.lms, dtype=np.int64) if self.lms else np.zeros((0, ring.n), np.int64)
        )
        self._tails = []
        for g, lm in zip(self.gb, self.lms):
            tail = [(m, c) for m, c in g.terms.items() if m != lm]
            te = np.array([m for m, _ in tail], dtype=np.int64).reshape(-1, ring.n)
            tc = np.array([c for _, c in tail], dtype=np.int64)
            self._tails.append((te, tc))
        self._nf: dict = {}
        self._std: dict = {}

    def standard(self, d: int) -> np.ndarray:
        """Indices (into ``ring.basis(d)``) of standard monomials of degree d."""
        if d not in self._std:
            self._build(d)
        return self._std[d]

    def hilbert(self, d: int) -> int:
        if d < 0:
            return 0
        return len(self.standard(d))

    def nf(self, d: int) -> np.ndarray:
        if d not in self._nf:
            self._build(d)
        return self._nf[d]

    def _build(self, d: int):
        ring, p = self.ring, self.ring.p
        N = ring.dim(d)
        if d < 0:
            self._std[d] = np.zeros(0, dtype=np.int64)
            self._nf[d] = np.zeros((0, 0), dtype=np.int64)
            return
        if self.unit:
            self._std[d] = np.zeros(0, dtype=np.int64)
            self._nf[d] = np.zeros((N, 0), dtype=np.int64)
            return
        if not self.gb:
            self._std[d] = np.arange(N)
            self._nf[d] = None  # identity; never materialised
            return
        E = ring.exponents(d)
        if len(self.lms):
            div = np.all(E[:, None, :] >= self._lm_arr[None, :, :], axis=2)  # N x |G|
            reducible = div.any(axis=1)
            which = np.argmax(div, axis=1)
        else:
            reducible = np.zeros(N, dtype=bool)
            which = np.zeros(N, dtype=np.int64)
        std = np.nonzero(~reducible)[0]
        NF = np.zeros((N, len(std)), dtype=np.int64)
        NF[std, np.arange(len(std))] = 1
        # smallest monomials first: all tail products are smaller
        for i in range(N - 1, -1, -1):
            if not reducible[i]:
                continue
            k = which[i]
            te, tc = self._tails[k]
            if len(tc) == 0:
                continue
            w = E[i] - self._lm_arr[k]
            idx = ring.lookup_codes(encode(te + w), d)
            NF[i] = ((p - tc) @ NF[idx]) % p
        self._std[d] = std
        self._nf[d] = NF

    @property
    def free(self) -> bool:
        """True for the polynomial ring itself (no relations)."""
        return not self.gb

    # -- derived maps ------------------------------------------------------
    def reduce_vectors(self, V: np.ndarray, d: int) -> np.ndarray:
        """Normal forms (standard coordinates) of dense degree-d vectors (rows)."""
        V = np.asarray(V, dtype=np.int64).reshape(-1, self.ring.dim(d)) % self.ring.p
        if self.free:
            return V
        return linalg.matmul(V, self.nf(d), self.ring.p)

    def reduce_poly(self, f: HomogPoly, d: Optional[int] = None) -> np.ndarray:
        d = f.degree if d is None else d
        return self.reduce_vectors(f.to_vector(d)[None, :], d)[0]

    def lift(self, coords, d: int) -> HomogPoly:
        """The form with the given standard-monomial coordinates."""
        v = np.zeros(self.ring.dim(d), dtype=np.int64)
        v[self.standard(d)] = coords
        return self.ring.from_vector(v, d)

    def ideal_basis(self, d: int) -> np.ndarray:
        """Rows spanning ``I_d`` (echelonised)."""
        N = self.ring.dim(d)
        if self.free or N == 0:
            return np.zeros((0, N), dtype=np.int64)
        return linalg.kernel_basis(self.nf(d).T, self.ring.p)

    def multiplication_matrix(self, g: HomogPoly, d: int, e: Optional[int] = None) -> np.ndarray:
        """Matrix of ``x -> g*x`` from ``(R/I)_d`` to ``(R/I)_{d+e}``, ``e = deg g``.

        Rows index the standard basis of the source, columns the target.
        """
        e = g.degree if e is None else e
        src = self.standard(d)
        if g.is_zero() or d < 0:
            return np.zeros((len(src), self.hilbert(d + e)), dtype=np.int64)
        full = _monomial_multiples(self.ring, g, d)
        if not self.free:
            full = full[src]
        return self.reduce_vectors(full, d + e)

    def variable_matrix(self, k: int, d: int) -> np.ndarray:
        """Multiplication by x_k from ``(R/I)_d`` to ``(R/I)_{d+1}``."""
        T = self.ring.mul_table(1, d)[k][self.standard(d)]
        if self.free:
            M = np.zeros((len(T), self.ring.dim(d + 1)), dtype=np.int64)
            M[np.arange(len(T)), T] = 1
            return M
        return self.nf(d + 1)[T]


# ---------------------------------------------------------------------------
# Hilbert series


@dataclass
class HilbertData:
    values: list
    numerator: list
    n_vars: int = 0

    def to_json(self) -> str:
        return json.dumps({"values": list(map(int, self.values)), "numerator": list(map(int, self.numerator))})

    @classmethod
    def from_json(cls, text: str, n_vars: int = 0) -> "HilbertData":
        d = json.loads(text)
        return cls(d["values"], d["numerator"], n_vars)

    def numerator_str(self) -> str:
        return poly_str(self.numerator)


def poly_str(coeffs, var: str = "t") -> str:
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}{mono}"
        parts.append(("-" if c < 0 else "+") + " " + body)
    if not parts:
        return "0"
    s = " ".join(parts)
    return s[2:] if s.startswith("+") else "-" + s[2:]


def _pmul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def hilbert_numerator_monomial(gens, n: int) -> list:
    """Numerator ``K(t)`` with ``H_{R/J}(t) = K(t)/(1-t)^n`` for a monomial ideal J.

    Recursive pivot splitting: ``K(J) = K(J + (p)) + t^{deg p} K(J : p)``
    for a pivot power ``p`` of a variable.
    """
    return _trim(_hn(tuple(minimize_monomials(gens)), n))


def _hn(gens: tuple, n: int) -> list:
    if not gens:
        return [1]
    if any(sum(g) == 0 for g in gens):
        return [0]
    # base case: pairwise coprime generators
    support = [tuple(i for i, e in enumerate(g) if e) for g in gens]
    seen = set()
    coprime = True
    for s in support:
        if seen.intersection(s):
            coprime = False
            break
        seen.update(s)
    if coprime:
        out = [1]
        for g in gens:
            f = [0] * (sum(g) + 1)
            f[0], f[-1] = 1, -1
            out = _pmul(out, f)
        return out
    # pivot on the variable occurring in most non-pure generators
    counts = [0] * n
    for g, s in zip(gens, support):
        if len(s) > 1:
            for i in s:
                counts[i] += 1
    i = int(np.argmax(counts))
    # exponent taken from a mixed generator, so x_i^e is not already in J
    exps = sorted(g[i] for g, s in zip(gens, support) if g[i] > 0 and len(s) > 1)
    e = exps[len(exps) // 2]
    pv = tuple(e if k == i else 0 for k in range(n))
    plus = minimize_monomials(list(gens) + [pv])
    colon = minimize_monomials(
        [tuple(max(0, x - y) for x, y in zip(g, pv)) for g in gens]
    )
    a = _hn(tuple(plus), n)
    b = [0] * e + _hn(tuple(colon), n)
    return _padd(a, b)


def series_from_numerator(num, n: int, D: int) -> list:
    """Coefficients h(0..D) of ``num(t)/(1-t)^n``."""
    h = [0] * (D + 1)
    for k, c in enumerate(num):
        if c == 0 or k > D:
            continue
        for d in range(k, D + 1):
            # coefficient of t^{d-k} in 1/(1-t)^n
            m = d - k
            h[d] += c * _binom(m + n - 1, n - 1)
    return h


def _binom(a, b):
    from math import comb

    return comb(a, b) if a >= 0 and 0 <= b <= a else (1 if b == 0 and a == -1 else 0)


def hilbert_series(I: Ideal, D: int = 10) -> HilbertData:
    """Hilbert function h(0..D) of R/I and the numerator of its series."""
    n = I.ring.n
    if I.is_unit():
        return HilbertData([0] * (D + 1), [0], n)
    lms = [g.leading_monomial() for g in I.gb]
    num = hilbert_numerator_monomial(lms, n)
    return HilbertData(series_from_numerator(num, n, D), num, n)


def hilbert_function_direct(I: Ideal, D: int) -> list:
    """h(0..D) by ranks of the span of monomial multiples (no Gröbner basis)."""
    ring, p = I.ring, I.ring.p
    out = []
    for d in range(D + 1):
        M = _products_of_lower(ring, I.gens, d)
        out.append(ring.dim(d) - (linalg.rank(M, p) if M.shape[0] else 0))
    return out


# ---------------------------------------------------------------------------
# saturation


def ideal_quotient(I: Ideal, J_gens: Sequence[HomogPoly], D: int) -> Ideal:
    """Generators of ``(I : J)`` in degrees ``<= D`` (degree-truncated)."""
    ring, p = I.ring, I.ring.p
    Q = I.quotient()
    gens: list = []
    for d in range(D + 1):
        blocks = [Q.multiplication_matrix(h, d) for h in J_gens]
        # (I:J)_d consists of standard-coordinate vectors killed by all h
        src = Q.standard(d)
        if len(src) == 0:
            continue
        M = np.concatenate(blocks, axis=1) if blocks else np.zeros((len(src), 0), np.int64)
        K = linalg.kernel_basis(M.T, p) if M.shape[1] else np.eye(len(src), dtype=np.int64)
        for row in K:
            gens.append(Q.lift(row, d))
    return Ideal(ring, list(I.gens) + gens)


def saturate_irrelevant(I: Ideal, D: Optional[int] = None) -> Ideal:
    """``I : m^∞`` for the irrelevant ideal m, by iterated quotients ``(I : m)``.

    Quotients are computed up to degree ``D`` (default: top Gröbner degree
    + 2).  Returns the saturated ideal with minimal generators.
    """
    ring = I.ring
    if I.is_unit() or not I.gens:
        return I
    current = I
    while True:
        top = max(g.degree for g in current.gb)
        bound = D if D is not None else top + 2
        nxt = ideal_quotient(current, ring.gens(), bound)
        if nxt.is_unit():
            return Ideal(ring, [ring.one()])
        same = all(current.contains(g) for g in nxt.gens)
        if same:
            return Ideal(ring, current.minimal_generators())
        current = Ideal(ring, nxt.minimal_generators())
