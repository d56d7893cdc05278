import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from socle.algebra import Algebra, random_element
from socle.errors import DecompositionFailed, PreconditionError
from socle.generate import blocks_table, scrambled_algebra, transport
from socle.io import dumps
from socle.spectral import trace
from socle.wedderburn import (WedderburnIso, check_characteristic_functional, dual_bases,
                              enveloping_subalgebra, harvest_minimal_projections, matrix_units,
                              separating_element, unit_relation_residual, wedderburn_decompose)

M2 = Algebra.blocks([2])


def test_separating_element_examples():
    e11, e22 = M2.unit_matrix(0, 0, 0), M2.unit_matrix(0, 1, 1)
    y = separating_element(e11, [e22])
    assert abs(trace(e22 * y)) < 1e-12 and abs(trace(e11 * y) - 1) < 1e-12
    y = separating_element(e11, [])
    assert abs(trace(e11 * y) - 1) < 1e-12
    with pytest.raises(PreconditionError):
        separating_element(e11, [2 * e11])


def test_characteristic_functional_identity():
    alg, _ = scrambled_algebra([3, 1], 2)
    for p in harvest_minimal_projections(alg, 2):
        assert check_characteristic_functional(p) < 1e-10


def test_dual_bases_examples():
    d = dual_bases(M2.unit_matrix(0, 0, 0))
    assert d.n == 2 and d.check(1e-12)
    assert (d.vs[0] * d.us[0]).close_to(M2.unit_matrix(0, 0, 0))
    # u spans e21, v spans e12 (up to scale)
    assert abs(d.us[0].coords[2]) > 0 and np.allclose(d.us[0].coords[[0, 1, 3]], 0)
    assert abs(d.vs[0].coords[1]) > 0 and np.allclose(d.vs[0].coords[[0, 2, 3]], 0)
    assert dual_bases(Algebra.blocks([1]).one()).n == 1
    alg = Algebra.blocks([2, 3])
    d = dual_bases(alg.unit_matrix(0, 0, 0))
    assert d.n == 2 and all(np.allclose(x.coords[4:], 0) for x in d.us + d.vs)
    with pytest.raises(PreconditionError):
        dual_bases(M2.one())


def test_matrix_unit_examples():
    u = matrix_units(M2.unit_matrix(0, 0, 0))
    assert u.shape == (2, 2) and unit_relation_residual([u]) < 1e-12
    assert matrix_units(Algebra.blocks([1]).one()).shape == (1, 1)
    alg = Algebra.blocks([2, 2])
    u = matrix_units(alg.unit_matrix(0, 0, 0))
    assert all(np.allclose(x.coords[4:], 0) for x in u.ravel())


def test_decompose_examples():
    table, unit = blocks_table([2, 1])
    assert sorted(wedderburn_decompose(Algebra.structure(table, unit)).sizes) == [1, 2]
    alg, _ = scrambled_algebra([2, 2], 5)
    iso = wedderburn_decompose(alg, 5)
    assert iso.sizes == (2, 2) and iso.multiplicativity_residual() <= 1e-8
    assert wedderburn_decompose(Algebra.blocks([1])).sizes == (1,)


def test_decompose_rejects_non_semisimple():
    # upper triangular 2x2 matrices: not semisimple
    basis = [np.array(m, dtype=complex) for m in ([[1, 0], [0, 0]], [[0, 1], [0, 0]],
                                                  [[0, 0], [0, 1]])]
    flat = np.array([m.ravel() for m in basis]).T
    table = np.zeros((3, 3, 3), dtype=complex)
    for i, x in enumerate(basis):
        for j, y in enumerate(basis):
            table[i, j] = np.linalg.lstsq(flat, (x @ y).ravel(), rcond=None)[0]
    alg = Algebra.structure(table, np.array([1, 0, 1], dtype=complex))
    with pytest.raises(DecompositionFailed):
        wedderburn_decompose(alg)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([[2], [2, 1], [2, 2], [3, 1], [1, 1, 1], [3, 2, 1]]),
       st.integers(0, 10 ** 6))
def test_round_trip_and_trace_transport(sizes, seed):
    alg, t = scrambled_algebra(sizes, seed)
    iso = wedderburn_decompose(alg, seed)
    assert sorted(iso.sizes) == sorted(sizes)
    assert sum(u.shape[0] ** 2 for u in iso.units) == alg.dim
    x = random_element(alg, seed + 1)
    assert iso.from_blocks(iso.to_blocks(x)).close_to(x)
    blocks_x = transport(random_element(Algebra.blocks(sizes), seed), alg, t)
    classical = sum(np.trace(m) for m in iso.to_blocks(blocks_x))
    assert abs(trace(blocks_x, iso) - classical) < 1e-7


def test_trace_constant_on_rank_one_projections():
    alg, _ = scrambled_algebra([3, 2], 8)
    iso = wedderburn_decompose(alg, 8)
    values = []
    for seed in range(8):
        for p in harvest_minimal_projections(alg, 100 + seed):
            values.append(trace(p, iso))
    assert len(values) >= 8 and np.allclose(values, 1.0)


def test_iso_json_round_trip():
    alg, _ = scrambled_algebra([2, 1], 1)
    iso = wedderburn_decompose(alg, 1)
    doc = __import__("json").loads(dumps(iso.to_json()))
    back = WedderburnIso.from_json(alg, doc)
    x = random_element(alg, 4)
    assert all(np.allclose(a, b) for a, b in zip(iso.to_blocks(x), back.to_blocks(x)))


def test_enveloping_examples():
    e11, e12, e21 = (M2.unit_matrix(0, i, j) for i, j in ((0, 0), (0, 1), (1, 0)))
    rep = enveloping_subalgebra([e11])
    assert rep.ok and rep.sizes == (1,)
    rep = enveloping_subalgebra([e12, e21])
    assert rep.ok and rep.sizes == (2,) and rep.space.dim == 4
    rep = enveloping_subalgebra([M2.zero()])
    assert rep.ok and rep.space.dim == 1


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([[3], [3, 2], [3, 2, 1]]), st.integers(0, 10 ** 6))
def test_enveloping_contains_low_rank_inputs(sizes, seed):
    from socle.generate import random_rank_element
    alg, t = scrambled_algebra(sizes, seed)
    blocks = Algebra.blocks(sizes)
    zs = [transport(random_rank_element(blocks, [1] * len(sizes), seed + k), alg, t)
          for k in range(2)]
    rep = enveloping_subalgebra(zs, seed=seed)
    assert rep.ok
    assert all(k <= 4 for k in rep.sizes)
