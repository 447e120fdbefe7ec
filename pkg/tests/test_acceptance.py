"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Characteristic-zero statements are checked over F_31991.  Run with
``pytest tests/test_acceptance.py -v``; the terminal summary repeats the
criterion lines.
"""

import functools
import time

import numpy as np

from conftest import family_model
from n33 import linalg
from n33.classifier import (
    TABLE1,
    adjunction_step,
    classify,
    discriminant_invariants,
)
from n33.fieldpoly import DEFAULT_PRIME, Ring, scalar_inverse
from n33.groebner import Ideal, buchberger, hilbert_series, normal_form
from n33.mfcubic import extract_mf, normal_sections, random_cubic_in, resolve_over_cubic
from n33.resolve import BettiTable, betti_via_koszul, minimal_resolution, regularity_via_gin
from n33.surfacegen import (
    REJECTED,
    construct_family,
    h0_twist,
    surface_invariants,
)

P = DEFAULT_PRIME
RATIONAL = [f"k2={t}" for t in range(-6, 0)]
ALL_FAMILIES = RATIONAL + ["k2=0"]
STAR = BettiTable.from_twists([[0], [3] * 10, [4] * 15, [5] * 6])
MF_SHAPE = BettiTable({(0, 0): 15, (1, 1): 6, (1, 2): 9})


@functools.lru_cache(maxsize=None)
def enriques():
    return family_model("k2=0")


# ---------------------------------------------------------------------------
# 1. Betti table (*) for the six rational families


def test_criterion_01_betti_tables(criterion):
    bad, times = [], []
    for fam in RATIONAL:
        t0 = time.time()
        I = construct_family(fam).ideal
        B = betti_via_koszul(I)
        F = minimal_resolution(I, regularity=regularity_via_gin(I))
        dt = time.time() - t0
        times.append(dt)
        if not (B == STAR and F.betti() == STAR and dt <= 120):
            bad.append(fam)
    ok = criterion(1, "Betti table (*) for the six rational families", not bad,
                   f"max {max(times):.1f}s per family" + (f"; failing {bad}" if bad else ""))
    assert ok


# ---------------------------------------------------------------------------
# 2. Koszul homology vs minimal resolution


def random_small_ideals(count=20, seed=7):
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n = int(rng.integers(3, 6))
        R = Ring(n)
        ngen = int(rng.integers(2, n + 2))
        degs = sorted(int(d) for d in rng.integers(1, 4, ngen))
        gens = [R.random_form(d, rng) for d in degs]
        if k % 4 == 3:
            # binomial and monomial generators give non-generic Betti tables
            x = R.gens()
            gens = [x[0] * x[1] - x[-1] ** 2, x[0] ** 2, x[1] * x[-1]]
            if n > 3:
                gens.append(x[2] ** 2 * x[0])
        out.append(Ideal(R, gens))
    return out


def test_criterion_02_koszul_vs_resolution(criterion):
    corpus = [(f, family_model(f).ideal) for f in ALL_FAMILIES]
    corpus += [(f, construct_family(f).ideal) for f in REJECTED]
    corpus += [(f"random{k}", I) for k, I in enumerate(random_small_ideals())]
    bad = []
    for name, I in corpus:
        BK = betti_via_koszul(I)
        # the resolution is bounded by a regularity read off a generic initial
        # ideal, never by the Koszul answer
        BR = minimal_resolution(I, regularity=regularity_via_gin(I)).betti()
        if BK != BR:
            bad.append(name)
    ok = criterion(2, "Koszul homology equals minimal resolution on the corpus", not bad,
                   f"{len(corpus)} ideals" + (f"; disagree {bad}" if bad else ""))
    assert ok


# ---------------------------------------------------------------------------
# 3. Hilbert function and numerator


def test_criterion_03_hilbert_data(criterion):
    bad = []
    for fam in ALL_FAMILIES:
        h = hilbert_series(family_model(fam).ideal, 5)
        num = h.numerator + [0] * 6
        if h.values[:6] != [1, 6, 21, 46, 81, 126] or num[:6] != [1, 0, 0, -10, 15, -6] or any(num[6:]):
            bad.append(fam)
    ok = criterion(3, "Hilbert function 1,6,21,46,81,126 and numerator 1-10t^3+15t^4-6t^5",
                   not bad, f"failing {bad}" if bad else "7 families")
    assert ok


# ---------------------------------------------------------------------------
# 4. rejected families lie on a quadric


def test_criterion_04_rejected_on_quadric(criterion):
    got = {}
    for label in REJECTED:
        m = construct_family(label, max_retries=10)
        inv = surface_invariants(hilbert_series(m.ideal, 12), 6)
        got[label] = (h0_twist(m.ideal, 2), inv.get("degree"), inv.get("sectional_genus"))
    ok = all(v == (1, 10, 6) for v in got.values())
    criterion(4, "h0(I_X(2)) = 1 for the rejected systems", ok,
              "; ".join(f"{k}: h0={v[0]}" for k, v in got.items()))
    assert ok


# ---------------------------------------------------------------------------
# 5. classification tree against a golden tree

# (path of labels, verdict, family or system, rule); branch nodes have verdict None
GOLDEN_TREE = [
    (("K^2=-6",), None, None, None),
    (("K^2=-6", "K1^2=8"), "rejected", "F0(4,3;1^14)", "quadric_check"),
    (("K^2=-6", "K1^2=9"), "accepted", "k2=-6", "lookup"),
    (("K^2=-5",), None, None, None),
    (("K^2=-5", "K1^2=5"), "accepted", "k2=-5", "lookup"),
    (("K^2=-4",), None, None, None),
    (("K^2=-4", "K1^2=2"), "accepted", "k2=-4", "lookup"),
    (("K^2=-3",), None, None, None),
    (("K^2=-3", "K1^2=-1"), "rejected", "F_e(4,2e+6;2^9,1^2), 0<=e<=2", "quadric_check"),
    (("K^2=-3", "K1^2=0"), None, None, None),
    (("K^2=-3", "K1^2=0", "K2^2=9"), "accepted", "k2=-3", "lookup"),
    (("K^2=-3", "K1^2=1"), "rejected", "(9;3^7,2,1^4)", "quadric_check"),
    (("K^2=-2",), None, None, None),
    (("K^2=-2", "K1^2=-2"), None, None, None),
    (("K^2=-2", "K1^2=-2", "K2^2=6"), "rejected", "(8;3^2,2^9)", "quadric_check"),
    (("K^2=-2", "K1^2=-2", "K2^2=7"), "rejected", "(8;3^2,2^9)", "quadric_check"),
    (("K^2=-2", "K1^2=-2", "K2^2=8"), "rejected", "(8;3^2,2^9)", "quadric_check"),
    (("K^2=-2", "K1^2=-1"), None, None, None),
    (("K^2=-2", "K1^2=-1", "K2^2=3"), "accepted", "k2=-2", "lookup"),
    (("K^2=-2", "K1^2=0"), None, None, None),
    (("K^2=-2", "K1^2=0", "K2^2=0"), "rejected", None, "prop2_5_nonexistence"),
    (("K^2=-2", "K1^2=0", "K2^2=1"), "rejected", None, "prop2_5_nonexistence"),
    (("K^2=-1",), None, None, None),
    (("K^2=-1", "K1^2=-1"), None, None, None),
    (("K^2=-1", "K1^2=-1", "K2^2=-1"), None, None, None),
    (("K^2=-1", "K1^2=-1", "K2^2=-1", "K3^2=9"), "accepted", "k2=-1", "lookup"),
    (("K^2=-1", "K1^2=-1", "K2^2=0"), "rejected", None, "double_point"),
    (("K^2=-1", "K1^2=0"), None, None, None),
    (("K^2=-1", "K1^2=0", "K2^2=0"), "rejected", None, "double_point"),
    (("K^2=0",), "accepted", "k2=0", "lookup"),
]


def flatten_tree(node, path=()):
    rows = []
    for ch in node.children:
        p = path + (ch.label,)
        if ch.children:
            rows.append((p, None, None, None))
        else:
            tag = ch.family if ch.verdict == "accepted" else (ch.system or None)
            rows.append((p, ch.verdict, tag, ch.rule.value if ch.rule else None))
        rows.extend(flatten_tree(ch, p))
    return rows


def test_criterion_05_classification_tree(criterion):
    tree = classify(10, 6)
    rows = flatten_tree(tree)
    accepted = {n.family: n.system for n in tree.walk() if n.verdict == "accepted"}
    h_ok = all(accepted.get(f"k2={t}") == TABLE1[t]["system"] for t in range(-6, 0))
    ok = rows == GOLDEN_TREE and len(accepted) == 7 and h_ok
    criterion(5, "case tree equals the golden tree (7 accepted leaves)", ok,
              f"{len(rows)} nodes, {len(accepted)} accepted")
    assert rows == GOLDEN_TREE
    assert ok


# ---------------------------------------------------------------------------
# 6. discriminants


def test_criterion_06_discriminants(criterion):
    recs = [discriminant_invariants(t) for t in range(-6, 1)]
    deltas = [r.delta for r in recs]
    ok = (all((r.X2, r.delta) == (48 + 2 * r.t, 44 + 6 * r.t) for r in recs)
          and deltas == [8, 14, 20, 26, 32, 38, 44]
          and deltas == [TABLE1[t]["delta"] for t in range(-6, 1)])
    criterion(6, "(X^2, delta) = (48+2t, 44+6t); delta column 8..44", ok, f"delta = {deltas}")
    assert ok


# ---------------------------------------------------------------------------
# 7. matrix factorizations


def test_criterion_07_matrix_factorizations(criterion):
    bad, worst = [], 0.0
    for fam in ALL_FAMILIES:
        I = family_model(fam).ideal
        for k in range(2):
            t0 = time.time()
            f = random_cubic_in(I, np.random.default_rng([k, 99]))
            mf = extract_mf(resolve_over_cubic(I, f))
            dt = time.time() - t0
            worst = max(worst, dt)
            if not (mf.size == 15 and mf.verify() and mf.shape() == MF_SHAPE and dt <= 300):
                bad.append((fam, k))
    ok = criterion(7, "phi psi = psi phi = f Id with shape 15 6 / . 9", not bad,
                   f"7 families x 2 cubics, max {worst:.1f}s" + (f"; failing {bad}" if bad else ""))
    assert ok


# ---------------------------------------------------------------------------
# 8. normal bundle sections


def test_criterion_08_normal_sections(criterion):
    got, bad = {}, []
    for fam in ALL_FAMILIES:
        t = int(fam.split("=")[1])
        I = family_model(fam).ideal
        vals = []
        for k in range(3):
            f = random_cubic_in(I, np.random.default_rng([k, 7]))
            n = normal_sections(I, f)
            if n != -2 * t:
                # one retry with a fresh cubic is allowed
                f = random_cubic_in(I, np.random.default_rng([k, 7, 1]))
                n = normal_sections(I, f)
            vals.append(n)
        got[t] = vals
        if vals != [-2 * t] * 3 or TABLE1[t]["h0N"] != -2 * t:
            bad.append(fam)
    ok = criterion(8, "h0(N_X/Y) = -2t, stable over 3 cubics", not bad,
                   ", ".join(f"t={t}: {v[0]}" for t, v in sorted(got.items())))
    assert ok


# ---------------------------------------------------------------------------
# 9. Enriques pipeline


def test_criterion_09_enriques(criterion):
    m = enriques()
    hr = m.extra["hr"]
    hvals = hr.hilbert_values(0, 6)
    series = {d: v for d, v in enumerate(hvals) if v}
    checks = {
        "HR series 3t^2+10t^3+6t^4": series == {2: 3, 3: 10, 4: 6},
        "X' degree 9": m.extra["xprime_invariants"]["degree"] == 9,
        "X' genus 6": m.extra["xprime_invariants"]["sectional_genus"] == 6,
        "X' 15 quintics": m.extra["xprime_generators"] == [5] * 15,
    }
    inv = surface_invariants(hilbert_series(m.ideal, 10), 6)
    checks["image degree 10"] = inv["degree"] == 10
    checks["image Betti (*)"] = betti_via_koszul(m.ideal) == STAR
    ok = all(checks.values())
    failing = [k for k, v in checks.items() if not v]
    detail = f"HR Hilbert function in degrees 2..4 = {hvals[2:5]}"
    if failing:
        detail += f"; failing: {failing}"
    criterion(9, "Enriques: HR module, X' in P4, adjoint image in P5", ok, detail)
    for name, v in checks.items():
        assert v, name


# ---------------------------------------------------------------------------
# 10. property suites


def _field_axioms(n=10_000, seed=1):
    rng = np.random.default_rng(seed)
    a, b, c = (rng.integers(0, P, n, dtype=np.int64) for _ in range(3))
    ok = bool(np.all((a + b) % P == (b + a) % P))
    ok &= bool(np.all((a * b) % P == (b * a) % P))
    ok &= bool(np.all(((a + b) % P + c) % P == (a + (b + c) % P) % P))
    ok &= bool(np.all(((a * b) % P) * c % P == a * ((b * c) % P) % P))
    ok &= bool(np.all(a * ((b + c) % P) % P == ((a * b) % P + (a * c) % P) % P))
    ok &= bool(np.all((a + (P - a) % P) % P == 0))
    nz = a[a != 0]
    ok &= all(int(x) * scalar_inverse(int(x), P) % P == 1 for x in nz)
    return ok


def _rank_nullity(n=100, seed=2):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        m, k = (int(x) for x in rng.integers(1, 30, 2))
        r = int(rng.integers(0, min(m, k) + 1))
        M = linalg.matmul(rng.integers(0, P, (m, r)), rng.integers(0, P, (r, k)), P)
        K = linalg.kernel_basis(M, P)
        if linalg.rank(M, P) + K.shape[0] != k or linalg.matmul(M, K.T, P).any():
            return False
    return True


def _nf_idempotent(n=20, seed=3):
    rng = np.random.default_rng(seed)
    R = Ring(4)
    for _ in range(n):
        I = Ideal(R, [R.random_form(d, rng) for d in (2, 2, 3)])
        G = buchberger(I)
        f = R.random_form(int(rng.integers(2, 5)), rng)
        r = normal_form(f, G)
        if normal_form(r, G) != r or not I.contains(f - r):
            return False
    return True


def _point_vanishing(n=50, seed=4):
    rng = np.random.default_rng(seed)
    for fam in RATIONAL:
        m = family_model(fam)
        rmap = m.extra["map"]
        for _ in range(n):
            s, u = (int(x) for x in rng.integers(1, P, 2))
            pt = rmap.evaluate(s, u)
            if any(g.evaluate(pt) for g in m.ideal.gens):
                return False
    return True


def _adjunction_identities():
    def check(node):
        for ch in node.children:
            if (ch.data.H2, ch.data.HK) != (node.data.H2, node.data.HK):
                nxt = adjunction_step(node.data, ch.data.K2 - node.data.K2)
                if (nxt.H2, nxt.HK, nxt.K2, nxt.chi) != (ch.data.H2, ch.data.HK, ch.data.K2, ch.data.chi):
                    return False
                # closed forms: pi' = pi + H.K + K^2 and H'^2 = 4(pi - 1) - H^2 + K^2
                X = node.data
                if ch.data.genus != X.genus + X.HK + X.K2:
                    return False
                if ch.data.H2 != 4 * (X.genus - 1) - X.H2 + X.K2:
                    return False
            if not check(ch):
                return False
        return True

    return check(classify())


def test_criterion_10_property_suites(criterion):
    parts = {
        "field axioms (10^4 triples)": _field_axioms(),
        "rank-nullity (100 matrices)": _rank_nullity(),
        "normal-form idempotence": _nf_idempotent(),
        "implicitization point vanishing (50 pts x 6 families)": _point_vanishing(),
        "adjunction identities on all branches": _adjunction_identities(),
    }
    ok = all(parts.values())
    criterion(10, "property suites", ok, ", ".join(f"{k}: {'ok' if v else 'FAIL'}" for k, v in parts.items()))
    for k, v in parts.items():
        assert v, k
