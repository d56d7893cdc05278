import numpy as np
import pytest

from socle.algebra import Algebra
from socle.errors import InputError
from socle.generate import (blocks_table, parse_sizes, random_low_rank_traceless,
                            random_nilpotent, random_rank_element, scrambled_algebra, transport)
from socle.spectral import rank


def test_parse_sizes():
    assert parse_sizes("2, 2") == [2, 2]
    for bad in ("", "0", "a,b"):
        with pytest.raises(InputError):
            parse_sizes(bad)


def test_blocks_table_reproduces_multiplication():
    sizes = [2, 1]
    table, unit = blocks_table(sizes)
    blocks = Algebra.blocks(sizes)
    s = Algebra.structure(table, unit)
    x, y = blocks.element(np.arange(5) + 1j), blocks.element(np.arange(5)[::-1])
    assert np.allclose((x * y).coords, (s.element(x.coords) * s.element(y.coords)).coords)


def test_scramble_is_an_isomorphism():
    blocks = Algebra.blocks([2, 2])
    alg, t = scrambled_algebra([2, 2], 3)
    x, y = blocks.element(np.arange(8) * 1j), blocks.element(np.ones(8))
    assert transport(x * y, alg, t).close_to(transport(x, alg, t) * transport(y, alg, t))
    assert transport(blocks.one(), alg, t).close_to(alg.one())
    assert np.linalg.cond(t) <= 1e3


def test_element_families():
    alg = Algebra.blocks([3, 2])
    assert rank(random_rank_element(alg, [2, 1], 0)) == 3
    n = random_nilpotent(alg, 0)
    assert all(np.allclose(np.linalg.matrix_power(m, m.shape[0]), 0, atol=1e-8) for m in n.blocks)
    t = random_low_rank_traceless(alg, 0)
    assert all(abs(np.trace(m)) < 1e-10 for m in t.blocks)
