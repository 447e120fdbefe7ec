"""Resolutions over a cubic hypersurface ring and matrix factorizations.

For a surface X contained in a cubic fourfold Y = V(f) ⊂ P⁵ the minimal
resolution of ``R_X`` over ``R_Y = R/(f)`` becomes 2-periodic; two
consecutive differentials of the periodic part, lifted to R, give a
matrix factorization ``ψ·φ = φ·ψ = f·Id``.

Twist convention (fixed here once): ``φ: R(-3)^15 -> R(-1)^6 ⊕ R(-2)^9`` and
``ψ: R(-1)^6 ⊕ R(-2)^9 -> R^15``.  The F-type sheaf is ``F = coker(φ)(-1)``,
generated in degrees 2 (six times) and 3 (nine times); with this choice
the sequence ``0 -> O_Y(-2)^6 -> F -> I_{X/Y} -> 0`` balances degree by degree.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg
from .fieldpoly import HomogPoly
from .groebner import Ideal, Quotient, _monomial_multiples
from .resolve import (
    BettiTable,
    FreeResolution,
    GradedMatrix,
    betti_via_koszul,
    graded_syzygies,
    minimal_resolution,
    regularity,
)

__all__ = [
    "MatrixFactorization",
    "QuotientResolution",
    "FTypeReport",
    "random_cubic_in",
    "quotient_syzygies",
    "resolve_over_cubic",
    "extract_mf",
    "shamash_start",
    "shamash_cancellations",
    "f_type_check",
    "normal_sections",
]


@dataclass
class MatrixFactorization:
    f: HomogPoly
    phi: GradedMatrix
    psi: GradedMatrix

    @property
    def size(self) -> int:
        return self.phi.shape[0]

    def shape(self) -> BettiTable:
        """Betti numbers of ``R^15 <-ψ- R(-1)^6 ⊕ R(-2)^9``: rows ``15 6 / · 9``."""
        ent: dict = {}
        for a in self.psi.row_degs:
            ent[(0, a)] = ent.get((0, a), 0) + 1
        for b in self.psi.col_degs:
            ent[(1, b)] = ent.get((1, b), 0) + 1
        return BettiTable(ent)

    def verify(self) -> bool:
        """``φψ = ψφ = f·Id`` entry by entry, over R."""
        n = self.size
        e = self.f.degree
        psi_up = GradedMatrix(self.psi.ring, [a + e for a in self.psi.row_degs],
                              [b + e for b in self.psi.col_degs], self.psi.entries, check=False)
        for P in (self.psi @ self.phi, self.phi @ psi_up):
            for r in range(n):
                for c in range(n):
                    want = self.f if r == c else self.f.ring.zero()
                    if not (P.entries[r][c] - want).is_zero():
                        return False
        return True

    def rank_coker_phi(self) -> int:
        """Rank of coker φ on Y from the twists: ``deg det φ / deg f``."""
        d = sum(self.phi.col_degs) - sum(self.phi.row_degs)
        if d % self.f.degree:
            raise ValueError("twists are not compatible with f")
        return d // self.f.degree

    def save(self, directory: str, seed: Optional[int] = None):
        os.makedirs(directory, exist_ok=True)
        for name, M in (("phi", self.phi), ("psi", self.psi)):
            with open(os.path.join(directory, f"{name}.txt"), "w") as fh:
                fh.write(M.to_text())
        meta = {
            "f": str(self.f),
            "phi_twists": {"source": self.phi.col_degs, "target": self.phi.row_degs},
            "psi_twists": {"source": self.psi.col_degs, "target": self.psi.row_degs},
            "shape": self.shape().text(),
            "seed": seed,
        }
        with open(os.path.join(directory, "meta.json"), "w") as fh:
            json.dump(meta, fh, indent=2)


@dataclass
class QuotientResolution:
    f: HomogPoly
    resolution: FreeResolution
    period_start: Optional[int] = None

    @property
    def differentials(self) -> list:
        return self.resolution.differentials

    def betti(self) -> BettiTable:
        return self.resolution.betti()


@dataclass
class FTypeReport:
    rank: int
    twist: int  # the L = O_Y(twist)^6 that makes the sequence exact
    degrees_checked: list
    failing_degree: Optional[int]
    dims: dict = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.failing_degree is None


# ---------------------------------------------------------------------------


def random_cubic_in(I: Ideal, rng: np.random.Generator) -> HomogPoly:
    """A random F_p-combination of the cubic generators of I."""
    cubics = [g for g in I.gens if g.degree == 3]
    if not cubics:
        raise ValueError("ideal has no cubic generators")
    ring = I.ring
    f = ring.zero()
    while f.is_zero():
        for g in cubics:
            f = f + g.scale(int(rng.integers(1, ring.p)))
    return f


def _cubic_quotient(f: HomogPoly) -> Quotient:
    return Ideal(f.ring, [f]).quotient()


def quotient_syzygies(M: GradedMatrix, f: HomogPoly, degree_bound: int) -> GradedMatrix:
    """Minimal generators of ``ker(M)`` over ``R/(f)`` up to ``degree_bound``."""
    return graded_syzygies(M, degree_bound, _cubic_quotient(f))


def _detect_period(twists: list, shift: int) -> Optional[int]:
    """First i with d_j (F_j -> F_{j-1}) repeating as d_{j+2} shifted, for all j >= i."""
    n = len(twists)
    srt = [sorted(t) for t in twists]
    for i in range(1, n - 2):
        ok = all(
            srt[j + 2] == [a + shift for a in srt[j]] and srt[j + 1] == [a + shift for a in srt[j - 1]]
            for j in range(i, n - 2)
        )
        if ok:
            return i
    return None


def resolve_over_cubic(I: Ideal, f: HomogPoly, steps: int = 6, degree_bound: int = 9) -> QuotientResolution:
    """Minimal resolution of ``R_X = R/I`` over ``R_Y = R/(f)``."""
    ring = I.ring
    if f.degree != 3:
        raise ValueError("f must be a cubic")
    if not I.contains(f):
        raise ValueError("f is not in the ideal of X")
    Q = _cubic_quotient(f)
    # minimal generators of I/(f): drop what becomes dependent modulo f
    gens = I.minimal_generators()
    chosen: list = []
    by_deg: dict = {}
    for g in gens:
        by_deg.setdefault(g.degree, []).append(g)
    for d in sorted(by_deg):
        # span, modulo f, of what lower-degree generators already produce
        rows = [Q.reduce_vectors(_monomial_multiples(ring, h, d - h.degree), d) for h in chosen]
        B = np.concatenate(rows) if rows else np.zeros((0, Q.hilbert(d)), dtype=np.int64)
        rB = _rank_mod(B, ring.p)
        for g in by_deg[d]:
            trial = np.concatenate([B, Q.reduce_poly(g, d)[None, :]])
            r = _rank_mod(trial, ring.p)
            if r > rB:
                B, rB = trial, r
                chosen.append(g)
    if not chosen:
        return QuotientResolution(f, FreeResolution(ring, [], base=Q), None)
    P = GradedMatrix(ring, [0], [g.degree for g in chosen], [chosen])
    # the minimal resolution is a summand of the Shamash resolution, whose
    # i-th module lives in degrees <= i + reg(R/I) + (deg f - 2)*floor(i/2)
    reg = regularity(betti_via_koszul(I))
    bounds = [i + reg + (f.degree - 2) * (i // 2) for i in range(steps + 1)]
    F = minimal_resolution(P, length_bound=steps, degree_bound=degree_bound, base=Q, check=False,
                           step_bounds=bounds)
    return QuotientResolution(f, F, _detect_period(F.twists(), f.degree))


def extract_mf(QR: QuotientResolution) -> MatrixFactorization:
    """Matrix factorization from the first two periodic differentials."""
    s = QR.period_start
    diffs = QR.differentials
    if s is None or len(diffs) < s + 1:
        raise ValueError("period not reached within the step bound; increase steps")
    d_psi = diffs[s - 1]  # F_s -> F_{s-1}
    d_phi = diffs[s]  # F_{s+1} -> F_s
    ring, f, p = d_phi.ring, QR.f, d_phi.ring.p
    shift = min(d_psi.row_degs)
    psi = GradedMatrix(ring, [a - shift for a in d_psi.row_degs], [b - shift for b in d_psi.col_degs], d_psi.entries)
    phi = GradedMatrix(ring, [a - shift for a in d_phi.row_degs], [b - shift for b in d_phi.col_degs], d_phi.entries)
    # over R, ψφ = f·C with C a constant matrix; normalise ψ by C^{-1}
    prod = psi @ phi
    n = prod.shape[0]
    lm = f.leading_monomial()
    lc = f.leading_coefficient()
    inv = pow(lc, p - 2, p)
    C = np.zeros((n, n), dtype=np.int64)
    for r in range(n):
        for c in range(n):
            e = prod.entries[r][c]
            if e.is_zero():
                continue
            coef = e.terms.get(lm, 0) * inv % p
            if not (e - f.scale(coef)).is_zero():
                raise ValueError("ψφ is not a multiple of f")
            C[r, c] = coef
    if linalg.rank(C, p) < n:
        raise ValueError("ψφ = f·C with C singular: resolution not periodic here")
    from .linalg import _inv_small

    Cinv = _inv_small(C, p)
    new = []
    for r in range(n):
        row = []
        for c in range(psi.shape[1]):
            acc = ring.zero()
            for k in range(n):
                if Cinv[r, k] and psi.entries[k][c].terms:
                    acc = acc + psi.entries[k][c].scale(int(Cinv[r, k]))
            row.append(acc)
        new.append(row)
    psi = GradedMatrix(ring, psi.row_degs, psi.col_degs, new)
    return MatrixFactorization(f, phi, psi)


def shamash_start(F: FreeResolution, f_degree: int = 3, steps: int = 3) -> BettiTable:
    """Betti numbers of the (non-minimal) Shamash resolution ``G_i = ⊕_j F_{i-2j}(-j·deg f)``."""
    tw = F.twists()
    ent: dict = {}
    for i in range(steps + 1):
        for j in range(i // 2 + 1):
            k = i - 2 * j
            if k < len(tw):
                for a in tw[k]:
                    key = (i, a + j * f_degree)
                    ent[key] = ent.get(key, 0) + 1
    return BettiTable(ent)


def shamash_cancellations(shamash: BettiTable, minimal: BettiTable, steps: int) -> list:
    """Pairs ``(i, j)`` where a summand of step i cancels one of step i+1 in degree j.

    Raises if the differences cannot be paired off that way.
    """
    diff = {}
    for i in range(steps + 1):
        for (ii, j), v in shamash.entries.items():
            if ii == i:
                d = v - minimal[(i, j)]
                if d < 0:
                    raise ValueError("minimal table exceeds the Shamash table")
                if d:
                    diff[(i, j)] = d
    pairs = []
    for (i, j) in sorted(diff):
        while diff.get((i, j), 0) > 0:
            if diff.get((i + 1, j), 0) > 0:
                diff[(i, j)] -= 1
                diff[(i + 1, j)] -= 1
                pairs.append((i, j))
            elif i + 1 > steps:
                # partner lies beyond the window
                diff[(i, j)] -= 1
                pairs.append((i, j))
            else:
                raise ValueError(f"unpaired difference at step {i}, degree {j}")
    return pairs


def _rank_mod(A: np.ndarray, p: int) -> int:
    return linalg.rank(A, p) if A.size else 0


def f_type_check(mf: MatrixFactorization, I: Ideal, degree_bound: int = 9) -> FTypeReport:
    """Check ``0 -> R_Y(-2)^6 -> coker(φ)(-1) -> I_{X/Y} -> 0`` degree by degree.

    The map to I_{X/Y} is found as the (generic) degree-0 homomorphism
    killing the six degree-2 generators; injectivity, surjectivity and the
    dimension balance are checked for every internal degree up to the bound.
    """
    ring, p, f = I.ring, I.ring.p, mf.f
    Q = _cubic_quotient(f)
    phi = GradedMatrix(ring, [a + 1 for a in mf.phi.row_degs], [b + 1 for b in mf.phi.col_degs], mf.phi.entries)
    gdeg = phi.row_degs
    low = min(gdeg)
    six = [k for k, a in enumerate(gdeg) if a == low]
    # degree-0 homomorphisms coker(φ) -> R_Y vanishing on the low generators
    phiT = phi.transpose(0)
    A = phiT.degree_matrix(0, Q)
    K = linalg.kernel_basis(A.T, p)
    sizes = [Q.hilbert(-b) for b in phiT.col_degs]
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    low_cols = np.concatenate([np.arange(offs[k], offs[k + 1]) for k in six]) if six else np.zeros(0, int)
    if K.shape[0] and len(low_cols):
        W = linalg.kernel_basis(K[:, low_cols].T, p)
        maps = linalg.matmul(W, K, p) if W.shape[0] else np.zeros((0, K.shape[1]), dtype=np.int64)
    else:
        maps = K
    rng = np.random.default_rng(0)
    if maps.shape[0] == 0:
        return FTypeReport(mf.rank_coker_phi(), -low, [], low, {"error": "no map to I_{X/Y}"})
    v = rng.integers(0, p, size=maps.shape[0]) @ maps % p
    g_entries = []
    for k, b in enumerate(phiT.col_degs):
        part = v[offs[k] : offs[k + 1]]
        g_entries.append(Q.lift(part, -b) if part.any() else ring.zero())
    g = GradedMatrix(ring, [0], gdeg, [g_entries])
    # the images must lie in I_X
    for h in g_entries:
        if h.terms and not I.contains(h):
            return FTypeReport(mf.rank_coker_phi(), -low, [], low, {"error": "image not in I_X"})
    dims = {}
    failing = None
    checked = []
    for d in range(low, degree_bound + 1):
        Fsrc = phi.degree_matrix(d, Q)  # relations, rows = relation basis
        free_dim = sum(Q.hilbert(d - a) for a in gdeg)
        rk_rel = _rank_mod(Fsrc, p)
        dimF = free_dim - rk_rel
        # image of the six generators
        n6 = sum(Q.hilbert(d - gdeg[k]) for k in six)
        iota = np.zeros((n6, free_dim), dtype=np.int64)
        o = 0
        so = 0
        for k, a in enumerate(gdeg):
            h = Q.hilbert(d - a)
            if k in six:
                iota[so : so + h, o : o + h] = np.eye(h, dtype=np.int64)
                so += h
            o += h
        stacked = np.concatenate([Fsrc, iota]) if Fsrc.size else iota
        inj = _rank_mod(stacked, p) - rk_rel
        # surjectivity onto (I/(f))_d
        G = g.degree_matrix(d, Q)
        surj = _rank_mod(G, p)
        dimI = I.dim(d) - (ring.dim(d - 3) if d >= 3 else 0)
        ok = inj == n6 and surj == dimI and dimF == n6 + dimI
        dims[d] = {"F": dimF, "L": n6, "I": dimI, "image": surj, "injective_rank": inj}
        checked.append(d)
        if not ok and failing is None:
            failing = d
    return FTypeReport(mf.rank_coker_phi(), -low, checked, failing, dims)


def normal_sections(I: Ideal, f: HomogPoly, QR: Optional[QuotientResolution] = None) -> int:
    """``dim Hom_{R_Y}(I_{X/Y}, R_X)_0``: global sections of the normal bundle of X in Y."""
    if QR is None:
        QR = resolve_over_cubic(I, f, steps=2, degree_bound=6)
    d2 = QR.differentials[1]
    IQ = I.quotient()
    # φ ∈ Hom: row vector h with h_j ∈ (R_X)_{deg g_j}, h·d2 = 0 in R_X
    D = GradedMatrix(I.ring, d2.row_degs, d2.col_degs, d2.entries, check=False)
    DT = D.transpose(0)
    A = DT.degree_matrix(0, IQ)
    if A.shape[0] == 0:
        return 0
    return A.shape[0] - _rank_mod(A, I.ring.p)
