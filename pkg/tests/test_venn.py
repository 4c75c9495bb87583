import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ambibound import VennCover, check_cover, ln_bivariate_moment, refine_single_term, venn_basis
from ambibound.venn import BASIS_NAMES, cover_value, single_term_value, table_entropies
from conftest import random_relation, relations

BALANCED = VennCover.from_flat([F(4, 9), F(1, 3), F(5, 9)] * 3)
PANDA = VennCover.from_flat([1, 1, 1, 1, 0, 0, 0, 0, 0])
ZERO = VennCover.from_flat([0] * 9)

rationals = st.sampled_from([F(0), F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(1), F(3, 2), F(2)])
covers = st.lists(rationals, min_size=9, max_size=9).map(VennCover.from_flat)


def test_single_term_basis():
    cover = VennCover.from_flat([0, 0, 1, 0, 0, 0, 0, 0, 0])  # H(X|Y)
    assert venn_basis(cover) == (1, 0, 0, 0, 0, 1, 0)


def test_balanced_cover_basis_exact():
    basis = venn_basis(BALANCED)
    assert basis == (1, 1, 1, F(4, 3), F(4, 3), F(4, 3), 1)
    assert all(isinstance(v, F) for v in basis)
    v = check_cover(BALANCED)
    assert v.applicable and v.covering and v.witness is None


def test_panda_cover():
    v = check_cover(PANDA)
    assert v.applicable and v.covering
    assert min(v.basis) >= 1 and v.basis[6] == 1


def test_rejections():
    v = check_cover(ZERO)
    assert v.applicable and not v.covering and v.witness == "H(X|YZ)"
    v = check_cover(VennCover.from_flat([1, 1, 1] + [0] * 6))
    assert v.applicable and not v.covering and v.witness == "H(Z|XY)"
    v = check_cover(BALANCED.scaled(F(9, 10)))
    assert not v.covering and v.witness == "H(X|YZ)"


def test_inapplicable_when_mutual_information_dominates():
    v = check_cover(VennCover.from_flat([1, 2, 1] * 3))
    assert not v.applicable and not v.covering


def test_float_tolerance():
    eps = 1e-13
    cover = VennCover.from_flat([4 / 9 - eps, 1 / 3, 5 / 9] * 3)
    assert check_cover(cover).covering
    cover = VennCover.from_flat([4 / 9 - 1e-9, 1 / 3, 5 / 9] * 3)
    assert not check_cover(cover).covering


def test_parse_and_validation():
    assert VennCover.parse("4/9,1/3,5/9, 4/9,1/3,5/9,4/9,1/3,5/9") == BALANCED
    with pytest.raises(ValueError):
        VennCover.parse("1,2,3")
    with pytest.raises(ValueError):
        VennCover.from_flat([-1] + [0] * 8)


@given(covers, covers, rationals, rationals)
def test_basis_is_linear(c1, c2, a, b):
    combo = c1.scaled(a) + c2.scaled(b)
    expect = tuple(a * x + b * y for x, y in zip(venn_basis(c1), venn_basis(c2)))
    assert venn_basis(combo) == expect


@given(covers, st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
                        min_size=1, max_size=50))
@settings(max_examples=300)
def test_accepted_covers_dominate_joint_entropy(cover, table):
    v = check_cover(cover)
    if not v.covering:
        return
    h = table_entropies(table)
    assert cover_value(cover, h) >= h[frozenset("XYZ")] - 1e-9


def test_monte_carlo_on_known_covers():
    rng = np.random.default_rng(0)
    for _ in range(300):
        k = int(rng.integers(1, 51))
        table = [tuple(int(v) for v in rng.integers(0, 4, size=3)) for _ in range(k)]
        h = table_entropies(table)
        for cover in (BALANCED, PANDA):
            assert cover_value(cover, h) >= h[frozenset("XYZ")] - 1e-9


def test_table_entropies_basic():
    h = table_entropies([(0, 0, 0), (1, 1, 0)])
    assert h[frozenset("X")] == pytest.approx(math.log(2))
    assert h[frozenset("Z")] == 0
    assert h[frozenset("XYZ")] == pytest.approx(math.log(2))


# -- single-term refinement ---------------------------------------------

def test_z_interior_minimum(z_rel):
    assert single_term_value(z_rel, 4, 4, 1) == pytest.approx(math.log(80), abs=1e-12)
    assert single_term_value(z_rel, 4, 4, 2) == pytest.approx(math.log(64), abs=1e-12)
    assert single_term_value(z_rel, 4, 4, 4) == pytest.approx(math.log(81), abs=1e-12)
    w, val = refine_single_term(z_rel, 4, 4)
    assert 1 < w < 4
    assert val <= math.log(64) + 1e-6


def test_degenerate_bracket(z_rel):
    w, val = refine_single_term(z_rel, 1, 5)
    assert w == 1.0 and val == ln_bivariate_moment(z_rel, 1, 5)


def test_refine_domain_errors(z_rel):
    with pytest.raises(ValueError):
        refine_single_term(z_rel, 0.5, 2)
    with pytest.raises(ValueError):
        refine_single_term(z_rel, 2, 2, tol=0)


def test_refine_beats_dense_scan():
    rng = np.random.default_rng(11)
    for _ in range(20):
        rel = random_relation(rng, max_pairs=12, domain=5)
        w, val = refine_single_term(rel, 3, 3)
        scan = min(single_term_value(rel, 3, 3, 1 + k / 100) for k in range(201))
        assert val <= scan + 1e-6


@given(relations(), st.floats(1.5, 8), st.floats(1.5, 8))
@settings(max_examples=50)
def test_f_midpoint_convex(rel, p, q):
    hi = min(p, q)
    ws = np.linspace(1, hi, 9)
    f = [single_term_value(rel, p, q, w) for w in ws]
    for i in range(1, 8):
        assert f[i] <= (f[i - 1] + f[i + 1]) / 2 + 1e-9 * max(1.0, abs(f[i]))


@given(relations(), st.floats(1, 6), st.floats(1, 6), st.floats(0.01, 0.99))
@settings(max_examples=80)
def test_refine_beats_two_term_mix(rel, p, q, w):
    # w ln M(p,1) + (1-w) ln M(1,q) bounds the target with coefficients
    # (wp + 1 - w, w + (1 - w) q); the single-term optimum for that target
    # is never worse
    mix = w * ln_bivariate_moment(rel, p, 1) + (1 - w) * ln_bivariate_moment(rel, 1, q)
    _, val = refine_single_term(rel, max(1.0, w * p + 1 - w), max(1.0, w + (1 - w) * q))
    tol = 1e-6 * max(1.0, ln_bivariate_moment(rel, 1, 1)) + 1e-9
    assert val <= mix + tol


def test_basis_names_order():
    assert BASIS_NAMES[0] == "H(X|YZ)" and BASIS_NAMES[-1] == "I(X;Y;Z)"
