"""Explicit surfaces: linear systems with assigned base points, their images
in projective space, and the module-theoretic construction of the Enriques
family.

Linear systems live in affine torus coordinates ``(s, u)``.  A section is a
2-d coefficient array ``c[j, k]`` standing for ``Σ c[j,k] s^j u^k``:

* on P², the degree-``b0`` system uses ``j + k <= b0`` (homogenise with x0);
* on the Hirzebruch surface F_e, the class ``a·C0 + b·f`` uses ``k <= a`` and
  ``j <= b - k·e`` (Cox-ring monomials restricted to the torus).

An ``m``-fold base point at ``(s0, u0)`` imposes the vanishing of all Hasse
derivatives of order ``< m``.  Images are implicitised degree by degree as
kernels of the pull-back matrix: products of sections are 2-d
convolutions.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

import numpy as np
from scipy.signal import convolve2d

from . import linalg
from .fieldpoly import DEFAULT_PRIME, HomogPoly, Ring, read_polys, write_polys
from .groebner import HilbertData, Ideal, hilbert_series, saturate_irrelevant
from .resolve import (
    BettiTable,
    FreeResolution,
    GradedMatrix,
    GradedModulePresentation,
    ModuleSpaces,
    dual_complex,
    dualize_complex,
    graded_syzygies,
    minimal_resolution,
)

__all__ = [
    "GenericityError",
    "PointConfig",
    "LinearSystemSpec",
    "RationalMap",
    "SurfaceModel",
    "FAMILIES",
    "REJECTED",
    "random_points",
    "plane_system_basis",
    "hirzebruch_system_basis",
    "implicitize",
    "h0_twist",
    "construct_family",
    "hr_module",
    "enriques_pipeline",
    "adjoint_image",
    "blowup_invariants",
    "surface_invariants",
]


class GenericityError(RuntimeError):
    """The random choices were not general enough; retry with another seed."""


# ---------------------------------------------------------------------------
# data types


@dataclass
class PointConfig:
    ambient: str  # "P2" or "F<e>"
    points: list
    seed: int


@dataclass(frozen=True)
class LinearSystemSpec:
    """``(b0; b1, ..., bl)`` on P² (``e is None``) or ``(a, b; m_i)`` on F_e."""

    mults: tuple
    b0: int = 0
    e: Optional[int] = None
    a: int = 0
    b: int = 0

    @property
    def on_plane(self) -> bool:
        return self.e is None

    @property
    def n_points(self) -> int:
        return len(self.mults)

    def monomials(self) -> list:
        """Exponent pairs ``(j, k)`` of the torus monomials spanning the system."""
        if self.on_plane:
            return [(j, k) for j in range(self.b0 + 1) for k in range(self.b0 + 1 - j)]
        return [
            (j, k) for k in range(self.a + 1) for j in range(self.b - k * self.e + 1)
        ]

    def shape(self) -> tuple:
        if self.on_plane:
            return (self.b0 + 1, self.b0 + 1)
        return (self.b + 1, self.a + 1)

    def n_conditions(self) -> int:
        return sum(m * (m + 1) // 2 for m in self.mults)

    def expected_dim(self) -> int:
        return len(self.monomials()) - self.n_conditions()

    @property
    def label(self) -> str:
        runs = []
        for m in sorted(set(self.mults), reverse=True):
            c = self.mults.count(m)
            runs.append(f"{m}^{c}" if c > 1 else f"{m}")
        body = ",".join(runs)
        if self.on_plane:
            return f"({self.b0};{body})" if body else f"({self.b0})"
        return f"F{self.e}({self.a},{self.b};{body})"

    @classmethod
    def parse(cls, text: str) -> "LinearSystemSpec":
        """Inverse of :attr:`label`, e.g. ``(7;3,2^6,1^6)`` or ``F0(4,3;1^14)``."""
        t = text.replace(" ", "")
        m = re.fullmatch(r"(?:F(\d+))?\(([^;)]*)(?:;([^)]*))?\)", t)
        if not m:
            raise ValueError(f"cannot parse linear system {text!r}")
        e, head, tail = m.groups()
        mults = []
        for part in (tail or "").split(","):
            if not part:
                continue
            base, _, cnt = part.partition("^")
            mults.extend([int(base)] * (int(cnt) if cnt else 1))
        mults = tuple(sorted(mults, reverse=True))
        if e is None:
            return cls(mults=mults, b0=int(head))
        a, b = (int(x) for x in head.split(","))
        return cls(mults=mults, e=int(e), a=a, b=b)


@dataclass
class RationalMap:
    """Torus sections of one linear system, defining a map to P^{N-1}."""

    sections: list  # 2-d integer arrays, all of the same shape
    spec: Optional[LinearSystemSpec]
    p: int
    points: Optional[PointConfig] = None

    @property
    def target_dim(self) -> int:
        return len(self.sections) - 1

    def evaluate(self, s: int, u: int) -> tuple:
        """Image of the torus point (s, u)."""
        p = self.p
        J, K = self.sections[0].shape
        sp = np.array([pow(int(s), j, p) for j in range(J)], dtype=object)
        up = np.array([pow(int(u), k, p) for k in range(K)], dtype=object)
        return tuple(int((sp @ sec.astype(object) @ up) % p) for sec in self.sections)


@dataclass
class SurfaceModel:
    ideal: Ideal
    family: str
    spec: Optional[LinearSystemSpec]
    invariants: dict
    seed: int
    prime: int
    extra: dict = field(default_factory=dict)

    def save(self, directory: str):
        os.makedirs(directory, exist_ok=True)
        gens = self.ideal.gens
        with open(os.path.join(directory, "ideal.txt"), "w") as fh:
            fh.write(write_polys(self.ideal.ring, gens, [f"family {self.family}", f"seed {self.seed}"]))
        meta = {
            "family": self.family,
            "spec": self.spec.label if self.spec else None,
            "seed": int(self.seed),
            "prime": int(self.prime),
            "invariants": self.invariants,
        }
        meta.update({k: v for k, v in self.extra.items() if _jsonable(v)})
        with open(os.path.join(directory, "meta.json"), "w") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)

    @classmethod
    def load(cls, directory: str) -> "SurfaceModel":
        with open(os.path.join(directory, "ideal.txt")) as fh:
            ring, polys = read_polys(fh.read())
        meta = {}
        mp = os.path.join(directory, "meta.json")
        if os.path.exists(mp):
            with open(mp) as fh:
                meta = json.load(fh)
        spec = LinearSystemSpec.parse(meta["spec"]) if meta.get("spec") else None
        return cls(
            Ideal(ring, polys),
            meta.get("family", "?"),
            spec,
            meta.get("invariants", {}),
            meta.get("seed", 0),
            ring.p,
        )


def _jsonable(v) -> bool:
    try:
        json.dumps(v)
        return True
    except TypeError:
        return False


# ---------------------------------------------------------------------------
# the families

FAMILIES = {
    "k2=-6": "(5;1^15)",
    "k2=-5": "(6;2^4,1^10)",
    "k2=-4": "(7;3,2^6,1^6)",
    "k2=-3": "(7;2^9,1^3)",
    "k2=-2": "(9;3^6,2^4,1)",
    "k2=-1": "(10;3^10)",
    "k2=0": "enriques",
}

# candidate linear systems that give degree-10 genus-6 surfaces lying on a quadric
REJECTED = (
    "F0(4,3;1^14)",
    "(9;3^7,2,1^4)",
    "F0(4,6;2^9,1^2)",
    "F1(4,8;2^9,1^2)",
    "(8;3^2,2^9)",
)


def blowup_invariants(spec: LinearSystemSpec) -> tuple:
    """``(d, π, K²)`` of the surface embedded by the system (Picard-lattice arithmetic)."""
    ms = spec.mults
    if spec.on_plane:
        b0 = spec.b0
        d = b0 * b0 - sum(m * m for m in ms)
        HK = -3 * b0 + sum(ms)
        K2 = 9 - len(ms)
    else:
        e, a, b = spec.e, spec.a, spec.b
        d = -e * a * a + 2 * a * b - sum(m * m for m in ms)
        HK = a * e - 2 * a - 2 * b + sum(ms)
        K2 = 8 - len(ms)
    genus = (d + HK) // 2 + 1
    return d, genus, K2


# ---------------------------------------------------------------------------
# points and linear systems


def random_points(ambient: str, count: int, seed: int, p: int = DEFAULT_PRIME) -> PointConfig:
    """``count`` distinct random points of the torus ``(F_p^*)^2``."""
    if count < 0:
        raise ValueError("count must be non-negative")
    rng = np.random.default_rng(seed)
    pts: list = []
    seen = set()
    while len(pts) < count:
        s, u = (int(x) for x in rng.integers(1, p, size=2))
        if (s, u) not in seen:
            seen.add((s, u))
            pts.append((s, u))
    return PointConfig(ambient, pts, seed)


def condition_matrix(spec: LinearSystemSpec, points: Sequence, p: int) -> np.ndarray:
    """Rows: Hasse-derivative conditions; columns: the system's monomials."""
    mons = spec.monomials()
    rows = []
    for (s, u), m in zip(points, spec.mults):
        for a in range(m):
            for b in range(m - a):
                row = np.zeros(len(mons), dtype=np.int64)
                for idx, (j, k) in enumerate(mons):
                    if j >= a and k >= b:
                        row[idx] = (
                            comb(j, a) * comb(k, b) % p * pow(s, j - a, p) % p * pow(u, k - b, p) % p
                        )
                rows.append(row)
    if not rows:
        return np.zeros((0, len(mons)), dtype=np.int64)
    return np.array(rows)


def _system_arrays(spec: LinearSystemSpec, points, p: int, expected: Optional[int]) -> list:
    mons = spec.monomials()
    C = condition_matrix(spec, points, p)
    K = linalg.kernel_basis(C, p) if C.shape[0] else np.eye(len(mons), dtype=np.int64)
    want = spec.expected_dim() if expected is None else expected
    if want < 3:
        raise ValueError(f"system {spec.label} has expected dimension {want}; too small to map a surface")
    if K.shape[0] != want:
        raise GenericityError(
            f"points not general, retry seed (system {spec.label} has dimension "
            f"{K.shape[0]}, expected {want})"
        )
    out = []
    shape = spec.shape()
    for v in K:
        A = np.zeros(shape, dtype=np.int64)
        for c, (j, k) in zip(v, mons):
            A[j, k] = c
        out.append(A)
    return out


def plane_system_basis(spec: LinearSystemSpec, points, p: int = DEFAULT_PRIME,
                       expected: Optional[int] = None) -> list:
    """Basis of ``|b0 L - Σ b_i E_i|`` as forms in x0, x1, x2 (s = x1/x0, u = x2/x0)."""
    if not spec.on_plane:
        raise ValueError("not a plane linear system")
    pts = points.points if isinstance(points, PointConfig) else points
    ring = Ring(3, p)
    forms = []
    for A in _system_arrays(spec, pts, p, expected):
        terms = {}
        for j, k in zip(*np.nonzero(A)):
            terms[(spec.b0 - j - k, int(j), int(k))] = int(A[j, k])
        forms.append(HomogPoly(ring, terms))
    return forms


def hirzebruch_system_basis(e: int, a: int, b: int, points, mults=None, p: int = DEFAULT_PRIME,
                            expected: Optional[int] = None) -> list:
    """Torus coefficient arrays of sections of ``aC0 + bf`` through the points."""
    pts = points.points if isinstance(points, PointConfig) else list(points)
    if mults is None:
        mults = (1,) * len(pts)
    spec = LinearSystemSpec(mults=tuple(mults), e=e, a=a, b=b)
    return _system_arrays(spec, pts, p, expected)


def hirzebruch_section_count(e: int, a: int, b: int) -> int:
    return sum(max(0, b - k * e + 1) for k in range(a + 1))


def system_map(spec: LinearSystemSpec, seed: int, p: int = DEFAULT_PRIME) -> RationalMap:
    pts = random_points("P2" if spec.on_plane else f"F{spec.e}", spec.n_points, seed, p)
    secs = _system_arrays(spec, pts.points, p, None)
    return RationalMap(secs, spec, p, pts)


# ---------------------------------------------------------------------------
# implicitization


def _conv(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return convolve2d(a, b) % p


def pullback_matrix(sections: Sequence[np.ndarray], d: int, p: int) -> np.ndarray:
    """Columns: pull-backs of the degree-d monomials (ring basis order) in the sections."""
    ring = Ring(len(sections), p)
    cache = {}

    def prod(m):
        if m in cache:
            return cache[m]
        k = next(i for i, e in enumerate(m) if e)
        rest = list(m)
        rest[k] -= 1
        rest = tuple(rest)
        if sum(rest) == 0:
            out = sections[k] % p
        else:
            out = _conv(prod(rest), sections[k], p)
        cache[m] = out
        return out

    cols = [prod(m).ravel() for m in ring.basis(d)]
    return np.array(cols).T


def implicitize(rmap: RationalMap, d: int, saturate: bool = True) -> Ideal:
    """Ideal of the image, generated by the forms of degree <= d vanishing on it."""
    p = rmap.p
    ring = Ring(len(rmap.sections), p)
    gens = []
    for e in range(1, d + 1):
        P = pullback_matrix(rmap.sections, e, p)
        K = linalg.kernel_basis(P, p)
        gens.extend(ring.from_vector(v, e) for v in K)
    I = Ideal(ring, gens)
    I = Ideal(ring, I.minimal_generators()) if gens else I
    if saturate and gens:
        I = saturate_irrelevant(I)
    return I


def image_hilbert_function(rmap: RationalMap, d: int) -> int:
    """``dim`` of the degree-d part of the image's coordinate ring (pull-back rank)."""
    return linalg.rank(pullback_matrix(rmap.sections, d, rmap.p), rmap.p)


def h0_twist(I: Ideal, m: int) -> int:
    """``h^0(I_X(m))`` = dimension of the degree-m part of the (saturated) ideal."""
    return I.dim(m)


# ---------------------------------------------------------------------------
# Hilbert-polynomial invariants


def surface_invariants(h: HilbertData, n_vars: int) -> dict:
    """Dimension, degree, sectional genus and χ read off a Hilbert numerator."""
    num = list(h.numerator)
    k = 0
    while len(num) > 1 and sum(num) == 0:
        # divide by (1 - t)
        q = []
        acc = 0
        for c in num[:-1]:
            acc += c
            q.append(acc)
        num = q
        k += 1
    dim = n_vars - k - 1
    deg = sum(num)
    out = {"dim": dim, "degree": deg}
    if dim == 2:
        big = len(h.numerator) + n_vars + 2
        vals = [_hilbert_value(h.numerator, n_vars, big + i) for i in range(3)]
        # fit a m^2 + b m + c
        a2 = Fraction(vals[2] - 2 * vals[1] + vals[0], 2)
        b1 = vals[1] - vals[0] - a2 * (2 * big + 1)
        c0 = vals[0] - a2 * big * big - b1 * big
        out["sectional_genus"] = int(deg / Fraction(2) + 1 - b1)
        out["chi"] = int(c0)
    return out


def _hilbert_value(num, n, m) -> int:
    return sum(c * comb(m - k + n - 1, n - 1) for k, c in enumerate(num) if m - k >= 0)


def hilbert_polynomial_value(h: HilbertData, n_vars: int, m: int) -> int:
    """Value at m of the Hilbert polynomial (the binomials continued as polynomials)."""
    from math import prod

    total = Fraction(0)
    for k, c in enumerate(h.numerator):
        x = m - k + n_vars - 1
        total += c * Fraction(prod(x - i for i in range(n_vars - 1)), prod(range(1, n_vars)))
    return int(total)


# ---------------------------------------------------------------------------
# rational families


def _spec_for(family: str) -> LinearSystemSpec:
    if family in FAMILIES:
        label = FAMILIES[family]
        if label == "enriques":
            raise ValueError("the Enriques family is built by enriques_pipeline")
        return LinearSystemSpec.parse(label)
    if family in REJECTED or family.replace(" ", "") in REJECTED:
        return LinearSystemSpec.parse(family)
    try:
        return LinearSystemSpec.parse(family)
    except ValueError:
        raise ValueError(f"unknown family {family!r}") from None


def construct_family(family: str, seed: int = 0, p: int = DEFAULT_PRIME, max_retries: int = 10,
                     degree: int = 3) -> SurfaceModel:
    """Build the image surface of a Table-1 (or rejected) linear system.

    ``family`` is ``k2=-6`` ... ``k2=-1``, a rejected label from
    :data:`REJECTED`, ``k2=0`` (delegates to :func:`enriques_pipeline`), or
    any parsable linear-system label.
    """
    if family == "k2=0":
        return enriques_pipeline(seed, p)
    spec = _spec_for(family)
    d, genus, K2 = blowup_invariants(spec)
    last = None
    for attempt in range(max_retries):
        s = int(seed) + 7919 * attempt
        try:
            rmap = system_map(spec, s, p)
        except GenericityError as exc:
            last = exc
            continue
        I = None
        for deg in range(degree, degree + 4):
            I = implicitize(rmap, deg)
            got = surface_invariants(hilbert_series(I, 2 * deg + 4), I.ring.n)
            if got.get("degree") == d and got.get("sectional_genus") == genus:
                break
        else:
            raise GenericityError(f"image of {spec.label} not cut out in degree <= {deg}")
        inv = {"degree": d, "sectional_genus": genus, "K2": K2, "chi": 1,
               "chi_top": 3 + spec.n_points if spec.on_plane else 4 + spec.n_points}
        model = SurfaceModel(I, family, spec, inv, s, p, {"attempts": attempt + 1})
        model.extra["map"] = rmap
        return model
    raise GenericityError(f"genericity retries exhausted for {family}: {last}")


# ---------------------------------------------------------------------------
# Hartshorne–Rao module and the Enriques surface

HR_RQ_TWISTS = [[0], [2] * 12, [3] * 25, [4] * 15 + [5] * 6, [6] * 10, [7] * 3]


@dataclass
class HRModule:
    presentation: GradedModulePresentation
    resolution: FreeResolution  # minimal resolution of M
    quadrics: list
    seed: int

    def hilbert_values(self, lo: int = 0, hi: int = 6) -> list:
        S = ModuleSpaces(self.presentation.presentation)
        return [S.hilbert(d) for d in range(lo, hi + 1)]

    def hilbert_numerator(self) -> list:
        return self.resolution.betti().numerator()


def is_natural(B: BettiTable) -> bool:
    """At most one nonzero β in each internal degree."""
    degs = [j for (_, j) in B.entries]
    return len(degs) == len(set(degs))


def hr_module(seed: int = 0, p: int = DEFAULT_PRIME, max_retries: int = 20) -> HRModule:
    """Finite-length module M over k[x0..x4] dual to ``R/(12 random quadrics)``.

    ``R/Q`` has Hilbert function 1, 5, 3; ``M = Ext^5(R/Q, R)(-9)`` then
    lives in degrees 2..4 and its minimal resolution is the dual complex.
    """
    ring = Ring(5, p)
    expected = BettiTable.from_twists(HR_RQ_TWISTS)
    for attempt in range(max_retries):
        s = int(seed) + 104729 * attempt
        rng = np.random.default_rng(s)
        Q = [ring.random_form(2, rng) for _ in range(12)]
        I = Ideal(ring, Q)
        F = minimal_resolution(I, degree_bound=9, regularity=2)
        if F.betti() != expected:
            continue
        Mres = dual_complex(F, -9)
        if not is_natural(Mres.betti()):
            continue
        return HRModule(dualize_complex(F, -9), Mres, Q, s)
    raise GenericityError("no module with a natural resolution found; retries exhausted")


def _det(rows: list, ring: Ring) -> HomogPoly:
    """Determinant of a square matrix of forms (Laplace expansion, memoised)."""
    n = len(rows)
    memo = {}

    def rec(r, cols):
        if r == n:
            return ring.one()
        key = (r, cols)
        if key in memo:
            return memo[key]
        acc = ring.zero()
        sign = 1
        for idx, c in enumerate(cols):
            f = rows[r][c]
            if f.terms:
                minor = rec(r + 1, cols[:idx] + cols[idx + 1 :])
                if minor.terms:
                    t = f * minor
                    acc = acc + (t if sign > 0 else -t)
            sign = -sign
        memo[key] = acc
        return acc

    return rec(0, tuple(range(n)))


def adjoint_forms(L: GradedMatrix, rng: np.random.Generator) -> list:
    """Forms ``a_j`` with ``L(x) a(x) = 0`` along the locus where L has corank 1.

    ``L`` is an ``m × r`` matrix of linear forms; ``r - 1`` random
    combinations of its rows are taken and ``a`` is the vector of signed
    maximal minors.
    """
    ring, p = L.ring, L.ring.p
    m, r = L.shape
    C = rng.integers(0, p, size=(r - 1, m))
    Dp = []
    for i in range(r - 1):
        row = []
        for c in range(r):
            acc = ring.zero()
            for k in range(m):
                f = L.entries[k][c]
                if f.terms and C[i, k]:
                    acc = acc + f.scale(int(C[i, k]))
            row.append(acc)
        Dp.append(row)
    out = []
    for j in range(r):
        sub = [[row[c] for c in range(r) if c != j] for row in Dp]
        dj = _det(sub, ring)
        out.append(dj if j % 2 == 0 else -dj)
    return out


def image_ideal(forms: list, source: Ideal, d: int) -> list:
    """Degree-d forms F on the target with ``F(forms) ∈ source``."""
    ring = source.ring
    p = ring.p
    e = forms[0].degree
    target = Ring(len(forms), p)
    Q = source.quotient()
    vec = [f.to_vector(e) for f in forms]
    cache = {}

    def prod(m):
        if m in cache:
            return cache[m]
        k = next(i for i, x in enumerate(m) if x)
        rest = list(m)
        rest[k] -= 1
        rest = tuple(rest)
        if sum(rest) == 0:
            out = vec[k]
        else:
            out = ring.dense_mul(prod(rest), e * sum(rest), vec[k], e)
        cache[m] = out
        return out

    A = np.array([prod(m) for m in target.basis(d)])
    img = Q.reduce_vectors(A, e * d)
    K = linalg.kernel_basis(img.T, p)
    return [target.from_vector(v, d) for v in K]


def xprime_from_module(hr: HRModule, degree_bound: int = 10) -> tuple:
    """Ideal of the degree-9 surface X' (15 quintics) and the 10×6 linear block D."""
    Mres = hr.resolution
    d3 = Mres.differentials[2]  # F3 -> F2
    rows5 = [r for r, a in enumerate(d3.row_degs) if a == 5]
    A = d3.submatrix(rows5, range(d3.shape[1]))  # 15 x 25, linear
    At = A.transpose(-10)  # source: 15 summands in degree 5 after twist
    S = graded_syzygies(At, degree_bound)
    if S.shape[1] != 1:
        raise GenericityError(f"expected one quintic relation vector, found {S.shape[1]}")
    quintics = [S.entries[r][0] for r in range(S.shape[0])]
    ring = quintics[0].ring
    d2 = Mres.differentials[1]  # F2 -> F1
    cols4 = [c for c, b in enumerate(d2.col_degs) if b == 4]
    D = d2.submatrix(range(d2.shape[0]), cols4)  # 10 x 6 linear
    return Ideal(ring, quintics), D


def enriques_pipeline(seed: int = 0, p: int = DEFAULT_PRIME, max_retries: int = 20) -> SurfaceModel:
    """Fano model of an Enriques surface in P⁵, via X' ⊂ P⁴ and adjunction."""
    last = None
    for attempt in range(max_retries):
        s = int(seed) + 15485863 * attempt
        try:
            hr = hr_module(s, p, max_retries=1)
            Ixp, D = xprime_from_module(hr)
            hx = hilbert_series(Ixp, 10)
            inv_xp = surface_invariants(hx, 5)
            if inv_xp.get("degree") != 9 or inv_xp.get("sectional_genus") != 6:
                raise GenericityError(f"X' invariants {inv_xp}")
            rng = np.random.default_rng(s + 1)
            a = adjoint_forms(D, rng)
            if any(Ixp.contains(f) for f in a):
                raise GenericityError("degenerate adjoint forms")
            quad = image_ideal(a, Ixp, 2)
            cubics = image_ideal(a, Ixp, 3)
            if quad or len(cubics) != 10:
                raise GenericityError(f"image has {len(quad)} quadrics, {len(cubics)} cubics")
        except GenericityError as exc:
            last = exc
            continue
        ring6 = cubics[0].ring
        X = Ideal(ring6, cubics)
        h1 = [hilbert_polynomial_value(hx, 5, m) - hx.values[m] for m in range(0, 7)]
        inv = {"degree": 10, "sectional_genus": 6, "K2": 0, "chi": 1, "chi_top": 12}
        extra = {
            "attempts": attempt + 1,
            "xprime_invariants": inv_xp,
            "xprime_generators": [g.degree for g in Ixp.gens],
            "xprime_h1": h1,
            "hr_seed": hr.seed,
        }
        model = SurfaceModel(X, "k2=0", None, inv, s, p, extra)
        model.extra["xprime"] = Ixp
        model.extra["hr"] = hr
        model.extra["adjoint_relations"] = D
        model.extra["adjoint_forms"] = a
        return model
    raise GenericityError(f"Enriques construction failed after {max_retries} attempts: {last}")


def adjoint_image(model: SurfaceModel, chi: int = 1, genus: Optional[int] = None,
                  seed: int = 0, degree: int = 3) -> SurfaceModel:
    """Image of the adjunction map ``Φ_{|H+K|}``.

    The canonical module is presented by the transpose of a matrix ``L`` of
    linear relations (for an ACM surface the last differential of its
    resolution, for X' the linear block carried in ``extra``); the map
    sends x to the kernel line of ``L(x)``.  The number of adjoint forms
    must equal ``χ + π - 1``.
    """
    I = model.ideal
    ring = I.ring
    if genus is None:
        genus = model.invariants.get("sectional_genus")
    expected = chi + genus - 1
    L = model.extra.get("adjoint_relations")
    if L is None:
        F = minimal_resolution(I, degree_bound=8)
        codim = ring.n - 3
        if F.length != codim:
            raise ValueError("adjoint_image needs an ACM surface or explicit relations")
        L = F.differentials[-1]
    n_forms = L.shape[1]
    if n_forms < expected:
        raise ValueError(f"fewer adjoint sections ({n_forms}) than χ+π-1 = {expected}")
    rng = np.random.default_rng(seed)
    a = adjoint_forms(L, rng)
    target = Ring(len(a), ring.p)
    gens = [g for e in range(1, degree + 1) for g in image_ideal(a, I, e)]
    J = Ideal(target, gens)
    if gens:
        J = Ideal(target, J.minimal_generators())
    inv = {"adjoint_forms": len(a)}
    return SurfaceModel(J, model.family + ":adjoint", None, inv, seed, ring.p,
                        {"adjoint_forms": a})
