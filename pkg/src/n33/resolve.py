"""Graded free resolutions, Betti tables and related predicates.

Two independent routes to graded Betti numbers are provided:

* :func:`betti_via_koszul` — ranks of the Koszul complex ``M ⊗ Λ^• k^n``
  strand by strand, where ``M`` is ``R/I`` or a finitely presented module;
* :func:`minimal_resolution` — explicit matrices, built one homological
  step at a time by :func:`graded_syzygies` (degree-wise kernels of
  multiplication matrices, keeping only generators not already produced
  by lower-degree kernel elements).

Conventions: a :class:`GradedMatrix` represents a map
``⊕_c R(-col_degs[c]) -> ⊕_r R(-row_degs[r])``; the entry ``(r, c)`` is a
form of degree ``col_degs[c] - row_degs[r]``.  Betti tables are keyed by
``(i, j)`` with ``j`` the *internal* degree; text output uses the row
index ``j - i``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import linalg
from .fieldpoly import Ring, format_poly, parse_poly, scalar_inverse
from .groebner import Ideal, Quotient, buchberger, hilbert_series

__all__ = [
    "BettiTable",
    "GradedMatrix",
    "FreeResolution",
    "GradedModulePresentation",
    "ModuleSpaces",
    "betti_via_koszul",
    "minimal_resolution",
    "graded_syzygies",
    "check_property_N",
    "is_acm",
    "regularity",
    "regularity_via_gin",
    "dualize_complex",
    "minimize_complex",
    "minimize_presentation",
    "BoundsError",
]


class BoundsError(RuntimeError):
    """Raised when a degree or length bound is too small for a computation."""


# ---------------------------------------------------------------------------
# Betti tables


class BettiTable:
    """Graded Betti numbers ``β_{i,j}`` (j = internal degree); zeros implicit."""

    def __init__(self, entries: Optional[dict] = None):
        self.entries = {k: int(v) for k, v in (entries or {}).items() if v}
        for v in self.entries.values():
            if v < 0:
                raise ValueError("negative Betti number")

    @classmethod
    def from_twists(cls, twists: Sequence[Sequence[int]]) -> "BettiTable":
        """Table of a complex whose i-th free module has generators in ``twists[i]``."""
        e: dict = {}
        for i, tw in enumerate(twists):
            for j in tw:
                e[(i, int(j))] = e.get((i, int(j)), 0) + 1
        return cls(e)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def __repr__(self):
        return f"BettiTable({dict(sorted(self.entries.items()))})"

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def total(self, i: int) -> int:
        return sum(v for (a, _), v in self.entries.items() if a == i)

    def totals(self) -> list:
        if not self.entries:
            return []
        return [self.total(i) for i in range(self.length + 1)]

    @property
    def length(self) -> int:
        """Projective dimension: largest i with a nonzero entry."""
        return max((i for i, _ in self.entries), default=0)

    def row(self, r: int) -> list:
        return [self[(i, i + r)] for i in range(self.length + 1)]

    def numerator(self) -> list:
        """``Σ (-1)^i β_{i,j} t^j`` as a coefficient list."""
        if not self.entries:
            return [0]
        top = max(j for _, j in self.entries)
        lo = min(j for _, j in self.entries)
        if lo < 0:
            raise ValueError("negative internal degrees; shift before taking numerator")
        out = [0] * (top + 1)
        for (i, j), v in self.entries.items():
            out[j] += (-1) ** i * v
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    def shifted(self, s: int) -> "BettiTable":
        return BettiTable({(i, j + s): v for (i, j), v in self.entries.items()})

    def restricted(self, i_max: int) -> "BettiTable":
        return BettiTable({k: v for k, v in self.entries.items() if k[0] <= i_max})

    def to_json(self) -> str:
        return json.dumps({"entries": [[i, j, v] for (i, j), v in sorted(self.entries.items())]})

    def to_dict(self) -> dict:
        return {"entries": [[i, j, v] for (i, j), v in sorted(self.entries.items())]}

    @classmethod
    def from_json(cls, text: Union[str, dict]) -> "BettiTable":
        d = json.loads(text) if isinstance(text, str) else text
        return cls({(int(i), int(j)): int(v) for i, j, v in d["entries"]})

    def text(self) -> str:
        """Aligned table in the usual row convention (row = j - i)."""
        if not self.entries:
            return "(zero)"
        rows = sorted({j - i for i, j in self.entries})
        cols = range(self.length + 1)
        w = max(len(str(v)) for v in self.entries.values()) + 1
        w = max(w, 3)
        lines = ["      " + "".join(f"{i:>{w}}" for i in cols)]
        lines.append("total:" + "".join(f"{self.total(i):>{w}}" for i in cols))
        for r in range(rows[0], rows[-1] + 1):
            cells = "".join(f"{(self[(i, i + r)] or '.'):>{w}}" for i in cols)
            lines.append(f"{r:>5}:" + cells)
        return "\n".join(lines)

    __str__ = text


def check_property_N(B: BettiTable, d: int, p: int) -> bool:
    """Property N_{d,p}: no β in rows ``>= d`` for homological steps 1..p."""
    return not any(1 <= i <= p and j - i >= d for (i, j) in B.entries)


def is_acm(B: BettiTable, codim: int) -> bool:
    """Projective dimension equals the codimension."""
    return B.length == codim


def regularity(B: BettiTable) -> int:
    """Castelnuovo-Mumford regularity: the largest row index ``j - i``."""
    return max((j - i for i, j in B.entries), default=0)


def regularity_via_gin(I: Ideal, seed: int = 0) -> int:
    """Regularity of ``R/I`` from a generic initial ideal.

    After a random linear change of coordinates the grevlex initial ideal is
    Borel-fixed (p large), and its regularity, the top degree of a reduced
    Gröbner basis element, equals ``reg(I)``.  Independent of any syzygy
    computation, so it can bound one.
    """
    ring = I.ring
    if not I.gens:
        return 0
    rng = np.random.default_rng(seed)
    images = [ring.random_form(1, rng) for _ in range(ring.n)]
    G = buchberger(Ideal(ring, [g.substitute(images) for g in I.gens]))
    return max(g.degree for g in G) - 1


# ---------------------------------------------------------------------------
# graded matrices


class GradedMatrix:
    """Homogeneous matrix ``⊕ R(-col_degs) -> ⊕ R(-row_degs)``."""

    def __init__(self, ring: Ring, row_degs, col_degs, entries=None, check: bool = True):
        self.ring = ring
        self.row_degs = [int(a) for a in row_degs]
        self.col_degs = [int(b) for b in col_degs]
        if entries is None:
            entries = [[ring.zero() for _ in self.col_degs] for _ in self.row_degs]
        self.entries = [list(r) for r in entries]
        if check:
            self.check()

    def check(self):
        if len(self.entries) != len(self.row_degs):
            raise ValueError("row count mismatch")
        for r, row in enumerate(self.entries):
            if len(row) != len(self.col_degs):
                raise ValueError("column count mismatch")
            for c, f in enumerate(row):
                if not f.is_zero() and f.degree != self.col_degs[c] - self.row_degs[r]:
                    raise ValueError(
                        f"entry ({r},{c}) has degree {f.degree}, expected "
                        f"{self.col_degs[c] - self.row_degs[r]}"
                    )

    @property
    def shape(self):
        return (len(self.row_degs), len(self.col_degs))

    def __repr__(self):
        return f"GradedMatrix({self.shape[0]}x{self.shape[1]}, rows={self.row_degs}, cols={self.col_degs})"

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r][c]

    def entry_degree(self, r: int, c: int) -> int:
        return self.col_degs[c] - self.row_degs[r]

    def is_zero(self) -> bool:
        return all(f.is_zero() for row in self.entries for f in row)

    def constant_entries(self) -> list:
        return [
            (r, c)
            for r, row in enumerate(self.entries)
            for c, f in enumerate(row)
            if not f.is_zero() and f.degree == 0
        ]

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        if self.col_degs != other.row_degs:
            raise ValueError("twists do not compose")
        ring = self.ring
        out = []
        for r in range(self.shape[0]):
            row = []
            for c in range(other.shape[1]):
                acc = ring.zero()
                for k in range(self.shape[1]):
                    a, b = self.entries[r][k], other.entries[k][c]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return GradedMatrix(ring, self.row_degs, other.col_degs, out)

    def transpose(self, twist: int = 0) -> "GradedMatrix":
        """Dual map ``Hom(-, R(twist))``: generator degrees become ``-deg - twist``."""
        return GradedMatrix(
            self.ring,
            [-b - twist for b in self.col_degs],
            [-a - twist for a in self.row_degs],
            [list(col) for col in zip(*self.entries)] if self.entries and self.col_degs else
            [[] for _ in self.col_degs],
        )

    def submatrix(self, rows, cols) -> "GradedMatrix":
        rows, cols = list(rows), list(cols)
        return GradedMatrix(
            self.ring,
            [self.row_degs[r] for r in rows],
            [self.col_degs[c] for c in cols],
            [[self.entries[r][c] for c in cols] for r in rows],
            check=False,
        )

    def hstack(self, other: "GradedMatrix") -> "GradedMatrix":
        if self.row_degs != other.row_degs:
            raise ValueError("row twists differ")
        return GradedMatrix(
            self.ring,
            self.row_degs,
            self.col_degs + other.col_degs,
            [a + b for a, b in zip(self.entries, other.entries)],
            check=False,
        )

    def reduce_mod(self, Q: Quotient) -> "GradedMatrix":
        """Replace every entry by its normal form modulo the ideal of ``Q``."""
        ents = [
            [Q.lift(Q.reduce_poly(f), f.degree) if f.terms else f for f in row]
            for row in self.entries
        ]
        return GradedMatrix(self.ring, self.row_degs, self.col_degs, ents, check=False)

    def to_text(self) -> str:
        lines = [self.ring.header(), f"rows {' '.join(map(str, self.row_degs))}",
                 f"cols {' '.join(map(str, self.col_degs))}"]
        for row in self.entries:
            lines.append(" ; ".join(format_poly(f) for f in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "GradedMatrix":
        ring = None
        rows = cols = None
        ents = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("ring"):
                fields = dict(tok.split("=") for tok in line.split()[1:])
                ring = Ring(int(fields["vars"]), int(fields["p"]))
            elif line.startswith("rows"):
                rows = [int(x) for x in line.split()[1:]]
            elif line.startswith("cols"):
                cols = [int(x) for x in line.split()[1:]]
            else:
                ents.append([parse_poly(ring, t) for t in line.split(";")])
        if ring is None or rows is None or cols is None:
            raise ValueError("incomplete matrix file")
        if not cols:
            ents = [[] for _ in rows]
        return cls(ring, rows, cols, ents)

    def degree_matrix(self, d: int, base: Quotient) -> np.ndarray:
        """Dense matrix of the map in internal degree ``d`` over ``base``.

        Rows: basis of the source in degree d (summand by summand, standard
        monomials of degree ``d - col_degs[c]``); columns: same for the target.
        """
        src = [base.hilbert(d - b) for b in self.col_degs]
        tgt = [base.hilbert(d - a) for a in self.row_degs]
        out = np.zeros((sum(src), sum(tgt)), dtype=np.int64)
        so = np.concatenate([[0], np.cumsum(src)]).astype(int)
        to = np.concatenate([[0], np.cumsum(tgt)]).astype(int)
        for c, b in enumerate(self.col_degs):
            if src[c] == 0:
                continue
            for r, a in enumerate(self.row_degs):
                f = self.entries[r][c]
                if f.is_zero() or tgt[r] == 0:
                    continue
                out[so[c] : so[c + 1], to[r] : to[r + 1]] = base.multiplication_matrix(
                    f, d - b, b - a
                )
        return out


def _var_shift_matrix(base: Quotient, degs, d: int, k: int) -> np.ndarray:
    """Block-diagonal multiplication by x_k on ``⊕ base(-degs)`` from degree d to d+1."""
    blocks = [base.variable_matrix(k, d - b) if d - b >= 0 else
              np.zeros((0, base.hilbert(d + 1 - b)), dtype=np.int64) for b in degs]
    rows = sum(B.shape[0] for B in blocks)
    cols = sum(B.shape[1] for B in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r0 = c0 = 0
    for B in blocks:
        out[r0 : r0 + B.shape[0], c0 : c0 + B.shape[1]] = B
        r0 += B.shape[0]
        c0 += B.shape[1]
    return out


def _vectors_to_columns(base: Quotient, degs, d: int, V: np.ndarray) -> list:
    """Split source-coordinate vectors of degree d into per-summand forms."""
    sizes = [base.hilbert(d - b) for b in degs]
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    cols = []
    for v in V:
        col = []
        for c, b in enumerate(degs):
            part = v[offs[c] : offs[c + 1]]
            col.append(base.lift(part, d - b) if d - b >= 0 and part.any() else base.ring.zero())
        cols.append(col)
    return cols


def graded_syzygies(
    M: GradedMatrix, degree_bound: int, base: Optional[Quotient] = None
) -> GradedMatrix:
    """Minimal generators (degree ``<= degree_bound``) of the kernel of ``M``.

    ``base`` selects the coefficient ring: the polynomial ring by default,
    or a quotient ``R/J`` given by its normal-form tables.
    """
    ring, p = M.ring, M.ring.p
    if base is None:
        base = Quotient(ring, [])
    degs = M.col_degs
    cols: list = []
    col_degs: list = []
    if not degs:
        return GradedMatrix(ring, [], [])
    prevK = None
    for d in range(min(degs), degree_bound + 1):
        n_src = sum(base.hilbert(d - b) for b in degs)
        if n_src == 0:
            prevK = np.zeros((0, 0), dtype=np.int64)
            continue
        A = M.degree_matrix(d, base)
        if A.shape[1]:
            K, free = linalg.kernel_basis(A.T, p, return_free=True)
        else:
            K, free = np.eye(n_src, dtype=np.int64), list(range(n_src))
        if K.shape[0] == 0:
            prevK = K
            continue
        if prevK is not None and prevK.shape[0]:
            # multiples of lower-degree syzygies, in coordinates of the basis K
            S = np.concatenate(
                [linalg.matmul(prevK, _var_shift_matrix(base, degs, d - 1, k)[:, free], p)
                 for k in range(ring.n)]
            )
            red = linalg.row_reduce(S, p, full=False)
            taken = set(red.pivot_cols)
            new = K[[j for j in range(K.shape[0]) if j not in taken]]
        else:
            new = K
        if new.shape[0]:
            cols.extend(_vectors_to_columns(base, degs, d, new))
            col_degs.extend([d] * new.shape[0])
        prevK = K
    entries = [[cols[j][r] for j in range(len(cols))] for r in range(len(degs))]
    return GradedMatrix(ring, degs, col_degs, entries)


# ---------------------------------------------------------------------------
# resolutions


@dataclass
class GradedModulePresentation:
    """Cokernel of ``presentation``: generators = rows, relations = columns."""

    presentation: GradedMatrix

    @property
    def ring(self):
        return self.presentation.ring

    @property
    def generator_degrees(self):
        return self.presentation.row_degs


@dataclass
class FreeResolution:
    """``F_0 <- F_1 <- ...``; ``differentials[i-1]`` maps F_i to F_{i-1}."""

    ring: Ring
    differentials: list
    minimal: bool = True
    base: Optional[Quotient] = field(default=None, repr=False)

    @property
    def length(self) -> int:
        return len(self.differentials)

    def twists(self) -> list:
        if not self.differentials:
            return [[0]]
        out = [self.differentials[0].row_degs]
        out.extend(d.col_degs for d in self.differentials)
        return out

    def betti(self) -> BettiTable:
        return BettiTable.from_twists(self.twists())

    def is_complex(self) -> bool:
        """Consecutive compositions vanish (modulo the base ideal, if any)."""
        for a, b in zip(self.differentials, self.differentials[1:]):
            prod = a @ b
            if self.base is not None and not self.base.free:
                prod = prod.reduce_mod(self.base)
            if not prod.is_zero():
                return False
        return True

    def has_unit_entries(self) -> bool:
        return any(d.constant_entries() for d in self.differentials)


def minimize_presentation(P: GradedMatrix) -> GradedMatrix:
    """Drop redundant generators/relations by pivoting out constant entries."""
    ring, p = P.ring, P.ring.p
    rows, cols = list(P.row_degs), list(P.col_degs)
    E = [list(r) for r in P.entries]
    while True:
        hit = None
        for r, row in enumerate(E):
            for c, f in enumerate(row):
                if f.terms and f.degree == 0:
                    hit = (r, c)
                    break
            if hit:
                break
        if hit is None:
            break
        r, c = hit
        u_inv = scalar_inverse(E[r][c].leading_coefficient(), p)
        newE = []
        for r2, row in enumerate(E):
            if r2 == r:
                continue
            a = row[c]
            new_row = []
            for c2, f in enumerate(row):
                if c2 == c:
                    continue
                b = E[r][c2]
                if a.terms and b.terms:
                    f = f - (a * b).scale(u_inv)
                new_row.append(f)
            newE.append(new_row)
        E = newE
        rows.pop(r)
        cols.pop(c)
    # remove zero relations
    keep = [c for c in range(len(cols)) if any(E[r][c].terms for r in range(len(rows)))]
    E = [[row[c] for c in keep] for row in E]
    cols = [cols[c] for c in keep]
    return GradedMatrix(ring, rows, cols, E)


def minimize_complex(diffs: list, base: Optional[Quotient] = None) -> list:
    """Cancel unit entries in a complex of free modules, repeated to fixpoint.

    A unit at ``(r, c)`` of ``d_i`` splits off ``R(-a) -> R(-a)``: row r
    and column c of ``d_i`` go (with the rank-one correction), column r
    of ``d_{i-1}`` and row c of ``d_{i+1}`` are deleted.
    """
    diffs = [GradedMatrix(d.ring, d.row_degs, d.col_degs, d.entries, check=False) for d in diffs]
    cancellations = []
    changed = True
    while changed:
        changed = False
        for i, D in enumerate(diffs):
            units = D.constant_entries()
            if not units:
                continue
            r, c = units[0]
            p = D.ring.p
            u_inv = scalar_inverse(D.entries[r][c].leading_coefficient(), p)
            E = D.entries
            newE = []
            for r2 in range(len(D.row_degs)):
                if r2 == r:
                    continue
                a = E[r2][c]
                row = []
                for c2 in range(len(D.col_degs)):
                    if c2 == c:
                        continue
                    f = E[r2][c2]
                    b = E[r][c2]
                    if a.terms and b.terms:
                        f = f - (a * b).scale(u_inv)
                        if base is not None and not base.free and f.terms:
                            f = base.lift(base.reduce_poly(f), f.degree)
                    row.append(f)
                newE.append(row)
            deg = D.row_degs[r]
            diffs[i] = GradedMatrix(
                D.ring,
                [a for k, a in enumerate(D.row_degs) if k != r],
                [b for k, b in enumerate(D.col_degs) if k != c],
                newE,
                check=False,
            )
            if i > 0:
                prev = diffs[i - 1]
                diffs[i - 1] = prev.submatrix(range(prev.shape[0]), [k for k in range(prev.shape[1]) if k != r])
            if i + 1 < len(diffs):
                nxt = diffs[i + 1]
                diffs[i + 1] = nxt.submatrix([k for k in range(nxt.shape[0]) if k != c], range(nxt.shape[1]))
            cancellations.append((i + 1, deg))
            changed = True
            break
    minimize_complex.last_cancellations = cancellations
    return diffs


def _first_matrix(obj, base: Quotient) -> GradedMatrix:
    if isinstance(obj, Ideal):
        ring = obj.ring
        if obj.is_unit():
            return GradedMatrix(ring, [0], [0], [[ring.one()]])
        gens = obj.minimal_generators()
        if base is not None and not base.free:
            # generators already in the base ideal are zero in the quotient
            gens = [g for g in gens if base.reduce_poly(g).any()]
        return GradedMatrix(ring, [0], [g.degree for g in gens], [gens])
    if isinstance(obj, GradedModulePresentation):
        return minimize_presentation(obj.presentation)
    if isinstance(obj, GradedMatrix):
        return minimize_presentation(obj)
    raise TypeError(f"cannot resolve {type(obj).__name__}")


def minimal_resolution(
    P,
    length_bound: Optional[int] = None,
    degree_bound: Optional[int] = None,
    base: Optional[Quotient] = None,
    check: bool = True,
    regularity: Optional[int] = None,
    step_bounds: Optional[Sequence[int]] = None,
) -> FreeResolution:
    """Minimal graded free resolution of ``R/I`` or of a presented module.

    Each step takes minimal generators of the kernel of the previous
    differential, degree by degree up to ``degree_bound`` (default 10,
    or unbounded when a regularity is given).  For ideals the
    result is checked against the Hilbert numerator; a mismatch means the
    bounds were too small and raises :class:`BoundsError`.  A known
    ``regularity`` r caps the search for generators of F_i at degree i + r;
    ``step_bounds[i]`` caps it explicitly.
    """
    ring = P.ring if not isinstance(P, GradedModulePresentation) else P.presentation.ring
    if base is None:
        base = Quotient(ring, [])
    if length_bound is None:
        length_bound = ring.n + 1 if base.free else ring.n + 4
    D = _first_matrix(P, base)
    diffs = []
    if D.shape[1] > 0:
        diffs.append(D)
    while diffs and len(diffs) < length_bound:
        step = len(diffs) + 1
        if degree_bound is not None:
            bound = degree_bound
        else:
            bound = 10 if regularity is None else step + regularity
        if regularity is not None:
            bound = min(bound, step + regularity)
        if step_bounds is not None and step < len(step_bounds):
            bound = min(bound, step_bounds[step])
        S = graded_syzygies(diffs[-1], bound, base)
        if S.shape[1] == 0:
            break
        diffs.append(S)
    F = FreeResolution(ring, diffs, minimal=True, base=base)
    if check and base.free and isinstance(P, Ideal):
        num = hilbert_series(P, 1).numerator
        if _trim(F.betti().numerator()) != _trim(num):
            raise BoundsError("increase bounds: Betti numbers do not reproduce the Hilbert numerator")
    return F


def _trim(a):
    a = [int(x) for x in a]
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def dualize_complex(F: FreeResolution, twist: int) -> GradedModulePresentation:
    """Cokernel of the transposed last differential, as ``Hom(F_c, R(twist))``.

    For a resolution of length c = codim this presents ``Ext^c(M, R(twist))``.
    """
    if not F.differentials:
        raise ValueError("empty resolution")
    last = F.differentials[-1]
    return GradedModulePresentation(last.transpose(twist))


def dual_complex(F: FreeResolution, twist: int) -> FreeResolution:
    """All differentials transposed and reversed: ``Hom(F, R(twist))``."""
    diffs = [d.transpose(twist) for d in reversed(F.differentials)]
    return FreeResolution(F.ring, diffs, minimal=F.minimal)


# ---------------------------------------------------------------------------
# modules as degree-wise vector spaces


class ModuleSpaces:
    """Degree-wise model of ``coker(P)`` for a graded presentation over R.

    ``M_d = F_d / P(G_d)``; coordinates are the non-pivot columns of the
    echelonised relation image.  Offers the same ``hilbert`` /
    ``variable_matrix`` interface as :class:`Quotient`.
    """

    def __init__(self, P: GradedMatrix):
        self.P = P
        self.ring = P.ring
        self._free = Quotient(P.ring, [])
        self._cache: dict = {}

    def _space(self, d):
        got = self._cache.get(d)
        if got is None:
            ring, p = self.ring, self.ring.p
            F = sum(ring.dim(d - a) for a in self.P.row_degs)
            if self.P.shape[1]:
                A = self.P.degree_matrix(d, self._free)
            else:
                A = np.zeros((0, F), dtype=np.int64)
            if A.shape[0] and F:
                r, R, piv = linalg.row_reduce(A, p)
            else:
                r, R, piv = 0, np.zeros((0, F), dtype=np.int64), ()
            piv = list(piv)
            std = np.array([c for c in range(F) if c not in set(piv)], dtype=np.int64)
            NF = np.zeros((F, len(std)), dtype=np.int64)
            NF[std, np.arange(len(std))] = 1
            if r:
                NF[piv] = (-R[:r][:, std]) % p
            got = (std, NF)
            self._cache[d] = got
        return got

    def hilbert(self, d: int) -> int:
        return len(self._space(d)[0])

    def variable_matrix(self, k: int, d: int) -> np.ndarray:
        std, _ = self._space(d)
        _, NF1 = self._space(d + 1)
        X = _var_shift_matrix(self._free, self.P.row_degs, d, k)
        return X[std] @ NF1 % self.ring.p if len(std) else np.zeros((0, NF1.shape[1]), np.int64)

    def hilbert_numerator(self, D: int) -> list:
        """``(1-t)^n Σ_{d<=D} dim M_d t^d`` truncated at degree D."""
        h = [self.hilbert(d) for d in range(0, D + 1)]
        n = self.ring.n
        num = h[:]
        for _ in range(n):
            num = [num[k] - (num[k - 1] if k else 0) for k in range(len(num))]
        return num


def _koszul_strand_matrix(spaces, n: int, i: int, d: int) -> np.ndarray:
    """Matrix of ``∂: M_{d-i} ⊗ Λ^i -> M_{d-i+1} ⊗ Λ^{i-1}`` (rows = source)."""
    src_sets = list(itertools.combinations(range(n), i))
    tgt_sets = list(itertools.combinations(range(n), i - 1))
    hs, ht = spaces.hilbert(d - i), spaces.hilbert(d - i + 1)
    out = np.zeros((len(src_sets) * hs, len(tgt_sets) * ht), dtype=np.int64)
    if hs == 0 or ht == 0:
        return out
    tindex = {S: k for k, S in enumerate(tgt_sets)}
    mats = {k: spaces.variable_matrix(k, d - i) for k in range(n)}
    p = spaces.ring.p
    for a, S in enumerate(src_sets):
        for pos, s in enumerate(S):
            T = S[:pos] + S[pos + 1 :]
            b = tindex[T]
            block = mats[s] if pos % 2 == 0 else (-mats[s]) % p
            out[a * hs : (a + 1) * hs, b * ht : (b + 1) * ht] = block
    return out


def betti_via_koszul(
    obj, i_max: Optional[int] = None, j_max: Optional[int] = None, check: bool = True
) -> BettiTable:
    """Graded Betti numbers as Koszul homology, ``β_{i,d} = dim H_i(M ⊗ K)_d``.

    ``obj`` is an :class:`Ideal` (for ``R/I``), a :class:`GradedModulePresentation`
    or a :class:`GradedMatrix` presentation.  Internal degrees up to ``j_max``
    are computed; if the Hilbert numerator has terms beyond ``j_max`` (so
    the alternating sums cannot match) a :class:`BoundsError` is raised.
    """
    if isinstance(obj, Ideal):
        ring = obj.ring
        spaces = obj.quotient()
        if obj.is_unit():
            return BettiTable()
        num = hilbert_series(obj, 1).numerator
        lo = 0
    else:
        P = obj.presentation if isinstance(obj, GradedModulePresentation) else obj
        ring = P.ring
        spaces = ModuleSpaces(P)
        lo = min(P.row_degs) if P.row_degs else 0
        num = None
    n = ring.n
    if i_max is None:
        i_max = n
    if j_max is None:
        j_max = (len(num) - 1 if num is not None else lo + 2 * n) + 1
    ranks: dict = {}

    def rk(i, d):
        if i < 1 or i > n:
            return 0
        key = (i, d)
        if key not in ranks:
            A = _koszul_strand_matrix(spaces, n, i, d)
            ranks[key] = linalg.rank(A, ring.p) if A.size else 0
        return ranks[key]

    entries = {}
    from math import comb

    for d in range(lo, j_max + 1):
        for i in range(0, min(i_max, n) + 1):
            if d - i < lo:
                continue
            dimK = comb(n, i) * spaces.hilbert(d - i)
            if dimK == 0:
                continue
            b = dimK - rk(i, d) - rk(i + 1, d)
            if b:
                entries[(i, d)] = b
    B = BettiTable(entries)
    if check and num is not None and i_max >= n:
        if len(_trim(num)) - 1 > j_max or _trim(B.numerator()) != _trim(num):
            raise BoundsError("increase bounds")
    return B
