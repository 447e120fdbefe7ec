"""Integer invariants of surfaces and the adjunction case analysis for
degree-10, sectional-genus-6 surfaces in P⁵.

Everything here is exact integer arithmetic.  The classification is built
as a tree: the root enumerates K² in the window allowed by the Hodge index
theorem and the degree bound for nondegenerate surfaces, every child is
obtained from its parent by one adjunction step, and leaves carry a
verdict together with the rule that produced it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from math import comb
from typing import Optional

__all__ = [
    "IntersectionData",
    "ClassificationNode",
    "DiscriminantRecord",
    "Rule",
    "chi_ideal_twist",
    "hk_from_genus",
    "hodge_bound",
    "adjunction_step",
    "adjoint_h0",
    "double_point_residue",
    "classify",
    "discriminant_invariants",
    "expected_normal_sections",
    "chi_top_blowup",
    "TABLE1",
    "LOW_DEGREE_SURFACES",
    "accepted_families",
]


@dataclass(frozen=True)
class IntersectionData:
    """The matrix ``[[H², HK], [HK, K²]]`` together with χ and friends."""

    H2: int
    HK: int
    K2: int
    chi: int = 1
    chi_top: Optional[int] = None
    q: int = 0
    p_g: int = 0

    @property
    def degree(self) -> int:
        return self.H2

    @property
    def genus(self) -> int:
        return (self.H2 + self.HK) // 2 + 1

    @property
    def matrix(self) -> list:
        return [[self.H2, self.HK], [self.HK, self.K2]]

    def to_dict(self) -> dict:
        return {"H2": self.H2, "HK": self.HK, "K2": self.K2, "chi": self.chi,
                "chi_top": self.chi_top, "q": self.q, "p_g": self.p_g}


class Rule(str, Enum):
    HODGE = "hodge"
    ADJOINT_POSITIVITY = "adjoint_positivity"
    DOUBLE_POINT = "double_point"
    LOOKUP = "lookup"
    QUADRIC_CHECK = "quadric_check"
    PROP2_5_NONEXISTENCE = "prop2_5_nonexistence"


@dataclass
class ClassificationNode:
    data: IntersectionData
    ambient: int
    label: str
    verdict: str = "branch"  # "accepted" | "rejected" | "branch"
    family: Optional[str] = None
    reason: Optional[str] = None
    rule: Optional[Rule] = None
    system: Optional[str] = None  # linear system of the leaf, if any
    needs_computation: bool = False
    children: list = field(default_factory=list)

    def leaves(self):
        if not self.children:
            yield self
        for c in self.children:
            yield from c.leaves()

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def to_dict(self) -> dict:
        out = {
            "label": self.label,
            "ambient": self.ambient,
            "matrix": self.data.matrix,
            "chi": self.data.chi,
            "verdict": self.verdict,
        }
        for k in ("family", "reason", "system"):
            v = getattr(self, k)
            if v is not None:
                out[k] = v
        if self.rule is not None:
            out["rule"] = self.rule.value
        if self.needs_computation:
            out["needs_computation"] = True
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def text(self, indent: int = 0) -> str:
        d = self.data
        pad = "  " * indent
        line = f"{pad}{self.label}: [[{d.H2},{d.HK}],[{d.HK},{d.K2}]] in P^{self.ambient}"
        if self.verdict != "branch":
            line += f" -> {self.verdict}"
            if self.family:
                line += f" {self.family}"
            if self.system:
                line += f" {self.system}"
        if self.rule is not None:
            line += f" [{self.rule.value}]"
        if self.reason:
            line += f" ({self.reason})"
        lines = [line]
        lines.extend(c.text(indent + 1) for c in self.children)
        return "\n".join(lines)


@dataclass(frozen=True)
class DiscriminantRecord:
    t: int
    X2: int
    delta: int


# ---------------------------------------------------------------------------
# numerical formulas


def chi_ideal_twist(d: int, genus: int, q: int, p_g: int, m: int) -> int:
    """χ(I_X(m)) for a surface X ⊂ P⁵ (Riemann–Roch for ``O_X(m)``)."""
    return comb(m + 5, 5) - comb(m + 1, 2) * d + m * (genus - 1) - 1 + q - p_g


def hk_from_genus(d: int, genus: int) -> int:
    """H·K from adjunction: ``2π − 2 = H² + H·K``."""
    return 2 * genus - 2 - d


def hodge_bound(H2: int, HK: int) -> int:
    """Largest K² allowed by the Hodge index theorem, ``⌊(H·K)²/H²⌋``."""
    if H2 <= 0:
        raise ValueError("H² must be positive")
    return (HK * HK) // H2


def adjunction_step(data: IntersectionData, blown_down: int) -> IntersectionData:
    """Invariants of the adjoint image after contracting ``blown_down`` (−1)-lines."""
    return IntersectionData(
        H2=data.H2 + 2 * data.HK + data.K2,
        HK=data.HK + data.K2,
        K2=data.K2 + blown_down,
        chi=data.chi,
        chi_top=None if data.chi_top is None else data.chi_top - blown_down,
        q=data.q,
        p_g=data.p_g,
    )


def adjoint_h0(chi: int, genus: int) -> int:
    """``h⁰(O(H+K)) = χ + π − 1`` for a non-special adjoint system."""
    return chi + genus - 1


def double_point_residue(d: int, HK: int, K2: int, chi: int) -> int:
    """Left side of the double point formula for smooth surfaces in P⁴ (0 if admissible)."""
    return d * d - 10 * d - 5 * HK - 2 * K2 + 12 * chi


def chi_top_blowup(base_chi_top: int, ell: int) -> int:
    return base_chi_top + ell


def discriminant_invariants(t: int) -> DiscriminantRecord:
    """Self-intersection of X in the cubic fourfold and the discriminant δ."""
    if not -6 <= t <= 0:
        raise ValueError(f"K² = {t} outside [-6, 0]")
    H2, HK, K2 = 10, 0, t
    chi_top = 12 - t  # Noether: 12χ = K² + χ_top with χ = 1
    X2 = 6 * H2 + 3 * HK + K2 - chi_top
    return DiscriminantRecord(t, X2, 3 * X2 - H2 * H2)


def expected_normal_sections(t: int) -> int:
    if not -6 <= t <= 0:
        raise ValueError(f"K² = {t} outside [-6, 0]")
    return -2 * t


def _k2_window(d: IntersectionData) -> range:
    """K² values of the adjoint image allowed by Hodge, (H+K)² ≥ 0 and K₁² ≥ K²."""
    H1 = adjunction_step(d, 0)
    hi = hodge_bound(H1.H2, H1.HK)
    lo = max(d.K2, -H1.H2 - 2 * H1.HK)
    return range(lo, hi + 1)


# ---------------------------------------------------------------------------
# tables

# Smooth surfaces of low degree (keyed by degree, sectional genus, K²), as
# listed in the classical classifications of surfaces of degree <= 8.
LOW_DEGREE_SURFACES = {
    (1, 0, 9): "plane",
    (2, 0, 8): "quadric surface P1 x P1",
    (3, 1, 3): "cubic surface, P2 blown up in 6 points by (3;1^6)",
    (4, 0, 9): "Veronese surface",
    (4, 0, 8): "rational normal scroll P1 x P1 of degree 4",
    (5, 1, 5): "del Pezzo surface of degree 5, P2 blown up in 4 points",
    (6, 2, 2): "conic bundle over P1 with 6 singular fibres, (4;2,1^6)",
    (7, 3, 1): "P2 blown up in 8 points by (6;2^7,1)",
    (7, 3, 0): "surface whose adjoint map is birational onto P2",
    (7, 3, -1): "Hirzebruch surface blown up in 9 points by (3,2e+3;1^9)",
    (10, 6, 0): "Fano model of an Enriques surface",
}

# K², discriminant, linear system, abstract structure, h⁰(N_{X/Y}), χ_top
TABLE1 = {
    -6: {"delta": 8, "system": "(5;1^15)", "structure": "Veronese surface", "h0N": 12, "chi_top": 18},
    -5: {"delta": 14, "system": "(6;2^4,1^10)", "structure": "del Pezzo surface of degree 5", "h0N": 10, "chi_top": 17},
    -4: {"delta": 20, "system": "(7;3,2^6,1^6)", "structure": "conic bundle over P1 of degree 6", "h0N": 8, "chi_top": 16},
    -3: {"delta": 26, "system": "(7;2^9,1^3)", "structure": "P2", "h0N": 6, "chi_top": 15},
    -2: {"delta": 32, "system": "(9;3^6,2^4,1)", "structure": "del Pezzo surface of degree 3", "h0N": 4, "chi_top": 14},
    -1: {"delta": 38, "system": "(10;3^10)", "structure": "P2", "h0N": 2, "chi_top": 13},
    0: {"delta": 44, "system": "enriques", "structure": "Fano model of an Enriques surface", "h0N": 0, "chi_top": 12},
}


# ---------------------------------------------------------------------------
# the tree


def _lookup(data: IntersectionData) -> Optional[str]:
    return LOW_DEGREE_SURFACES.get((data.H2, data.genus, data.K2))


def _accept(node, t):
    node.verdict = "accepted"
    node.family = f"k2={t}"
    node.system = TABLE1[t]["system"]


def _quadric(node, system, extra=""):
    node.verdict = "rejected"
    node.rule = Rule.QUADRIC_CHECK
    node.system = system
    node.needs_computation = True
    node.reason = "h0(I_X(2)) = 1, so N_{3,3} fails" + extra


def _branch_k1(root: IntersectionData, t: int, k1: int) -> ClassificationNode:
    """Subtree for the first adjoint image with K₁² = k1."""
    X1 = adjunction_step(root, k1 - t)
    node = ClassificationNode(X1, 5, f"K1^2={k1}")
    name = _lookup(X1)
    if t == -6:
        node.rule = Rule.LOOKUP
        node.reason = name
        if k1 == 9:
            _accept(node, t)
        else:
            _quadric(node, "F0(4,3;1^14)")
    elif t in (-5, -4):
        node.rule = Rule.LOOKUP
        node.reason = name
        _accept(node, t)
    elif t == -3:
        if k1 == 1:
            node.reason = name
            _quadric(node, "(9;3^7,2,1^4)")
        elif k1 == 0:
            # second adjunction lands on a plane
            X2 = adjunction_step(X1, 9 - k1)
            child = ClassificationNode(X2, adjoint_h0(X1.chi, X1.genus) - 1, "K2^2=9")
            child.rule = Rule.LOOKUP
            child.reason = _lookup(X2)
            _accept(child, t)
            node.children.append(child)
        else:
            node.reason = name
            _quadric(node, "F_e(4,2e+6;2^9,1^2), 0<=e<=2")
    elif t == -2:
        N2 = adjoint_h0(X1.chi, X1.genus) - 1
        for k2 in _k2_window(X1):
            X2 = adjunction_step(X1, k2 - k1)
            child = ClassificationNode(X2, N2, f"K2^2={k2}")
            if k1 == 0:
                child.verdict = "rejected"
                child.rule = Rule.PROP2_5_NONEXISTENCE
                child.reason = f"no surface of degree {X2.H2} with these invariants is a blowup of P2 or F_e"
            elif k1 == -1:
                child.rule = Rule.LOOKUP
                child.reason = _lookup(X2)
                _accept(child, t)
            else:
                _quadric(child, "(8;3^2,2^9)", "; the F0(5,5;2^10) model gives the same divisor")
            node.children.append(child)
    elif t == -1:
        N2 = adjoint_h0(X1.chi, X1.genus) - 1
        for k2 in _k2_window(X1):
            X2 = adjunction_step(X1, k2 - k1)
            child = ClassificationNode(X2, N2, f"K2^2={k2}")
            res = double_point_residue(X2.H2, X2.HK, X2.K2, X2.chi)
            if res != 0:
                child.verdict = "rejected"
                child.rule = Rule.DOUBLE_POINT
                need = 12 * X2.chi - res
                child.reason = (f"double point formula residue {res} != 0; "
                                f"it would need 12chi = {need}, impossible for chi in Z" if need % 12
                                else f"double point formula residue {res} != 0")
            else:
                X3 = adjunction_step(X2, 9 - k2)
                leaf = ClassificationNode(X3, adjoint_h0(X2.chi, X2.genus) - 1, "K3^2=9")
                leaf.rule = Rule.LOOKUP
                leaf.reason = _lookup(X3)
                _accept(leaf, t)
                child.children.append(leaf)
            node.children.append(child)
    return node


def classify(d: int = 10, genus: int = 6) -> ClassificationNode:
    """Case tree for smooth surfaces of degree d, sectional genus π in P⁵ with χ = 1.

    Only (10, 6) has the full case analysis; other inputs produce the root
    and its K² window.
    """
    HK = hk_from_genus(d, genus)
    N = adjoint_h0(1, genus) - 1
    hi = hodge_bound(d, HK)
    lo = (N - 1) - d - 2 * HK  # deg X₁ = H² + 2HK + K² >= N − 1
    root = ClassificationNode(IntersectionData(d, HK, 0), 5, f"d={d},pi={genus}")
    root.reason = f"K^2 in [{lo}, {hi}]"
    for t in range(lo, hi + 1):
        X = IntersectionData(d, HK, t, chi=1, chi_top=12 - t)
        node = ClassificationNode(X, 5, f"K^2={t}")
        root.children.append(node)
        if (d, genus) != (10, 6):
            continue
        if t == 0:
            node.rule = Rule.LOOKUP
            node.reason = _lookup(X)
            _accept(node, 0)
            continue
        window = _k2_window(X)
        node.reason = f"K1^2 in [{window.start}, {window.stop - 1}]"
        for k1 in window:
            node.children.append(_branch_k1(X, t, k1))
    return root


def accepted_families(tree: ClassificationNode) -> dict:
    """``{family id: linear system}`` of the accepted leaves."""
    return {n.family: n.system for n in tree.walk() if n.verdict == "accepted"}
