import functools

import numpy as np
import pytest

from conftest import family_model
from n33.fieldpoly import Ring
from n33.groebner import Ideal
from n33.mfcubic import (
    MatrixFactorization,
    extract_mf,
    f_type_check,
    normal_sections,
    random_cubic_in,
    resolve_over_cubic,
    shamash_cancellations,
    shamash_start,
)
from n33.resolve import BettiTable, GradedMatrix, minimal_resolution

SHAPE = BettiTable({(0, 0): 15, (1, 1): 6, (1, 2): 9})


@functools.lru_cache(maxsize=None)
def veronese_setup():
    I = family_model("k2=-6").ideal
    f = random_cubic_in(I, np.random.default_rng(0))
    QR = resolve_over_cubic(I, f)
    return I, f, QR, extract_mf(QR)


def test_random_cubic_lies_in_ideal():
    I, f, _, _ = veronese_setup()
    assert f.degree == 3 and I.contains(f)


def test_no_cubic_raises():
    R = Ring(4)
    with pytest.raises(ValueError):
        random_cubic_in(Ideal(R, [R.var(0) ** 2]), np.random.default_rng(0))


def test_resolution_over_cubic_is_periodic():
    _, _, QR, _ = veronese_setup()
    B = QR.betti()
    assert [B.total(i) for i in range(6)] == [1, 9, 15, 15, 15, 15]
    assert B[(3, 5)] == 6 and B[(3, 6)] == 9
    assert B[(5, 8)] == 6 and B[(5, 9)] == 9
    assert QR.period_start == 3


def test_matrix_factorization():
    _, f, _, mf = veronese_setup()
    assert mf.size == 15
    assert mf.verify()
    assert mf.shape() == SHAPE
    assert mf.rank_coker_phi() == 7
    # entries: 6-block linear in psi, quadratic in phi
    assert sorted(set(mf.psi.row_degs)) == [0]
    assert sorted(mf.psi.col_degs) == [1] * 6 + [2] * 9


def test_broken_factorization_fails_verify():
    _, f, _, mf = veronese_setup()
    entries = [list(r) for r in mf.phi.entries]
    r, c = next((r, c) for r in range(15) for c in range(15) if not entries[r][c].is_zero())
    entries[r][c] = entries[r][c].scale(2)
    bad = GradedMatrix(mf.phi.ring, mf.phi.row_degs, mf.phi.col_degs, entries)
    assert not MatrixFactorization(f, bad, mf.psi).verify()


def test_shamash_start_and_cancellation():
    I, _, QR, _ = veronese_setup()
    F = minimal_resolution(I, regularity=2)
    S = shamash_start(F, 3, 3)
    # Shamash adds F_0(-3) at step 2 and F_1(-3) at step 3
    assert S[(2, 3)] == 1 and S[(3, 6)] == 10
    assert shamash_cancellations(S, QR.betti(), 3) == [(1, 3), (3, 6)]


def test_f_type_resolution_truncated():
    I, _, _, mf = veronese_setup()
    rep = f_type_check(mf, I, degree_bound=7)
    assert rep.exact
    assert rep.rank == 7 and rep.twist == -2


def test_normal_sections_veronese_family():
    I, f, QR, _ = veronese_setup()
    assert normal_sections(I, f, QR) == 12
    assert normal_sections(I, f) == 12


def test_save(tmp_path):
    _, _, _, mf = veronese_setup()
    mf.save(tmp_path, seed=5)
    assert {p.name for p in tmp_path.iterdir()} >= {"phi.txt", "psi.txt", "meta.json"}
    back = GradedMatrix.from_text((tmp_path / "phi.txt").read_text())
    assert back.entries == mf.phi.entries
