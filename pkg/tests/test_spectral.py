import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from socle import ideals
from socle.algebra import Algebra, is_invertible, random_element, spectrum
from socle.errors import BadSpectralValue, NeedsDecomposition, PreconditionError
from socle.generate import (random_diagonalizable, random_rank_element, random_ranks,
                            scrambled_algebra, transport)
from socle.spectral import (count_nonzero_spectrum, diagonalize_maximal, is_in_E,
                            is_maximal_rank, multiplicity, rank, rank_direct, riesz_projection,
                            socle_decompose, spectral_data, spectral_rank, trace,
                            vn_regular_witness)
from socle.wedderburn import wedderburn_decompose

M3 = Algebra.blocks([3])
D220 = M3.from_blocks([np.diag([2.0, 2.0, 0.0])])


@pytest.fixture
def example46():
    alg = Algebra.blocks([2, 2])
    d = np.diag([1.0, -1.0])
    return alg.from_blocks([d, d])


def test_spectral_rank_examples(example46):
    m2 = Algebra.blocks([2])
    assert spectral_rank(m2.zero()) == 0
    assert spectral_rank(m2.unit_matrix(0, 0, 0)) == 1
    assert spectral_rank(example46, samples=32) == 4


def test_rank_direct_examples():
    assert rank_direct(Algebra.blocks([2, 3]).one()) == 5
    alg = Algebra.blocks([2, 2])
    assert rank_direct(alg.unit_matrix(0, 0, 0)) == 1
    assert rank_direct(D220) == 2


def test_rank_direct_needs_iso_for_structure():
    alg, _ = scrambled_algebra([2], 0)
    with pytest.raises(NeedsDecomposition):
        rank_direct(alg.one())
    assert rank_direct(alg.one(), wedderburn_decompose(alg)) == 2


def test_E_membership_examples():
    m2 = Algebra.blocks([2])
    assert is_in_E(m2.from_blocks([np.diag([1.0, 2.0])]), m2.one())
    assert not is_maximal_rank(D220)
    assert all(is_in_E(m2.zero(), random_element(m2, s)) for s in range(5))


def test_riesz_examples():
    m2 = Algebra.blocks([2])
    p = riesz_projection(m2.from_blocks([np.diag([1.0, 0.0])]), [1])
    assert p.close_to(m2.unit_matrix(0, 0, 0))
    assert np.allclose(riesz_projection(D220, [2]).blocks[0], np.diag([1, 1, 0]))
    with pytest.raises(BadSpectralValue):
        riesz_projection(D220, [3])
    with pytest.raises(BadSpectralValue):
        riesz_projection(D220, [0])


@pytest.mark.parametrize("method", ["contour", "contour-factored"])
def test_riesz_dual_path(method):
    alg = Algebra.blocks([3, 1])
    for seed in range(10):
        a = random_diagonalizable(alg, seed)
        for lam in spectrum(a).nonzero:
            p = riesz_projection(a, [lam])
            assert (p - riesz_projection(a, [lam], method)).norm() <= 1e-6
            assert (p * a).close_to(a * p)


def test_riesz_lies_in_Aa_and_aA():
    alg = Algebra.blocks([3])
    a = random_rank_element(alg, [2], 4)
    left = ideals.subspace_span([x * a for x in alg.basis()])
    right = ideals.subspace_span([a * x for x in alg.basis()])
    for lam in spectrum(a).nonzero:
        p = riesz_projection(a, [lam])
        assert left.contains(p) and right.contains(p)


def test_riesz_structure_presentation_matches_blocks():
    blocks = Algebra.blocks([2, 1])
    alg, t = scrambled_algebra([2, 1], 3)
    a = random_diagonalizable(blocks, 3)
    for lam in spectrum(a).nonzero:
        p = riesz_projection(a, [lam])
        q = riesz_projection(transport(a, alg, t), [lam])
        assert q.close_to(transport(p, alg, t), 1e-7)


def test_multiplicity_examples():
    p = M3.from_blocks([np.diag([1.0, 1.0, 0.0])])
    assert multiplicity(p, 1) == 2
    assert multiplicity(D220, 2) == 2 and multiplicity(D220, 0) == 1
    inv = Algebra.blocks([2]).from_blocks([np.diag([1.0, 2.0])])
    assert multiplicity(inv, 1) + multiplicity(inv, 2) == 2
    with pytest.raises(BadSpectralValue):
        multiplicity(inv, 0)


def test_zero_element_bookkeeping():
    data = spectral_data(M3.zero())
    assert data.terms == [] and data.includes_zero and data.zero_multiplicity == 1


def test_trace_examples(example46):
    p = M3.from_blocks([np.diag([1.0, 0.0, 1.0])])
    assert trace(p) == 2
    assert abs(trace(example46)) < 1e-12
    assert abs(trace(D220) - 4) < 1e-12


def test_diagonalize_examples():
    m2 = Algebra.blocks([2])
    terms = diagonalize_maximal(m2.from_blocks([np.diag([1.0, 2.0])]))
    assert {round(l.real) for l, _ in terms} == {1, 2}
    alg = Algebra.blocks([2, 2])
    terms = diagonalize_maximal(alg.from_blocks([np.diag([3.0, 0.0]), np.diag([0.0, 5.0])]))
    assert len(terms) == 2 and all(rank(p) == 1 for _, p in terms)
    with pytest.raises(PreconditionError):
        diagonalize_maximal(D220)


def test_socle_decompose_examples(example46):
    m2 = Algebra.blocks([2])
    e12 = m2.unit_matrix(0, 0, 1)
    dec = socle_decompose(e12)
    assert len(dec.terms) == 1 and dec.reconstruct().close_to(e12)
    dec = socle_decompose(example46)
    assert len(dec.terms) == 4 and dec.reconstruct().close_to(example46)
    assert (dec.u * dec.v).close_to(example46.algebra.one())


def test_vn_regular_examples():
    assert vn_regular_witness(M3.zero()).is_zero()
    a = random_rank_element(M3, [2], 9)
    x = vn_regular_witness(a)
    assert (a * x * a - a).norm() <= 1e-8 * max(1.0, a.norm())


SIZES = st.sampled_from([[2], [3], [2, 1], [2, 2], [3, 2, 1]])
SEEDS = st.integers(0, 10 ** 6)


def _random_low_rank(sizes, seed, alg=None):
    alg = alg or Algebra.blocks(sizes)
    return random_rank_element(alg, random_ranks(alg, seed), seed)


@settings(max_examples=25, deadline=None)
@given(SIZES, SEEDS)
def test_rank_subadditive_and_invertible_invariant(sizes, seed):
    a = _random_low_rank(sizes, seed)
    b = _random_low_rank(sizes, seed + 1, a.algebra)
    assert rank(a + b) <= rank(a) + rank(b)
    u = random_element(a.algebra, seed + 2)
    assert is_invertible(u)[0]
    assert rank(u * a) == rank(a) == rank(a * u)


@settings(max_examples=25, deadline=None)
@given(SIZES, SEEDS)
def test_orthogonal_additivity(sizes, seed):
    alg = Algebra.blocks(sizes)
    b = random_diagonalizable(alg, seed, zero_prob=0.0)
    rng = np.random.default_rng(seed)
    terms = diagonalize_maximal(b)
    combo, want = alg.zero(), 0
    for _, p in terms:
        if rng.uniform() < 0.6:
            combo = combo + complex(rng.uniform(0.5, 3.0), rng.uniform(-1, 1)) * p
            want += rank(p)
    assert rank(combo) == want


@settings(max_examples=25, deadline=None)
@given(SIZES, SEEDS)
def test_nonzero_spectrum_bounded_by_rank(sizes, seed):
    a = _random_low_rank(sizes, seed)
    assert count_nonzero_spectrum(a) <= rank(a)


@settings(max_examples=25, deadline=None)
@given(SIZES, SEEDS)
def test_trace_linear_and_cyclic(sizes, seed):
    alg = Algebra.blocks(sizes)
    a, b = random_element(alg, seed), random_element(alg, seed + 1)
    assert abs(trace(a + 2.5 * b) - trace(a) - 2.5 * trace(b)) < 1e-7
    assert abs(trace(a * b) - trace(b * a)) < 1e-7


@settings(max_examples=25, deadline=None)
@given(SIZES, SEEDS)
def test_trace_nondegenerate(sizes, seed):
    a = _random_low_rank(sizes, seed)
    if a.is_zero():
        return
    assert max(abs(trace(x * a)) for x in a.algebra.basis()) > 1e-8


@settings(max_examples=15, deadline=None)
@given(SIZES, SEEDS)
def test_corner_spectrum_and_trace(sizes, seed):
    alg = Algebra.blocks(sizes)
    b = random_diagonalizable(alg, seed, zero_prob=0.0)
    terms = diagonalize_maximal(b)
    p = alg.zero()
    for _, q in terms[: max(1, len(terms) // 2)]:
        p = p + q
    corner, basis = ideals.corner_algebra(p)
    x = random_element(alg, seed + 5)
    pxp = p * x * p
    inside = ideals.to_corner(pxp, corner, basis)
    from oracles import match_distance
    assert match_distance(spectrum(inside).nonzero, spectrum(pxp).nonzero) < 1e-6
    assert len(spectrum(inside).nonzero) == len(spectrum(pxp).nonzero)
    # corner rank (sampled in the compressed algebra) equals ambient rank
    from socle.spectral import sampled_rank
    assert sampled_rank(inside, 16, seed) == rank(pxp)
    # trace inside pAp: multiplicities are ranks of corner Riesz projections,
    # sampled in the corner itself
    tr_corner = sum(lam * sampled_rank(riesz_projection(inside, [lam]), 16, 0)
                    for lam in spectrum(inside).nonzero)
    assert abs(tr_corner - trace(pxp)) < 1e-7


@settings(max_examples=25, deadline=None)
@given(SIZES, SEEDS)
def test_corner_dim_sandwich(sizes, seed):
    a = _random_low_rank(sizes, seed)
    r, d = rank(a), ideals.corner_dim(a)
    assert r <= d <= r * r


@settings(max_examples=25, deadline=None)
@given(SIZES, SEEDS)
def test_multiplicity_bookkeeping_property(sizes, seed):
    a = _random_low_rank(sizes, seed)
    data = spectral_data(a)
    assert sum(t.multiplicity for t in data.terms) + data.zero_multiplicity == \
        rank(a) + int(data.includes_zero)
