import random

import numpy as np
import pytest

from localfield_mra.characters import CosetId
from localfield_mra.exactnum import Cyclo
from localfield_mra.gf import GF
from localfield_mra.localfield import ShiftH0
from localfield_mra.mra import (
    MaskError,
    MaskInvalidError,
    MaskTable,
    SpectrumTable,
    TreeMaskMismatchError,
    coefficients_from_mask_arrays,
    mask_chains,
    mask_eval,
    mask_from_tree,
    mask_to_coefficients,
    masks_agree,
    masks_from_coefficient_arrays,
    reconstruct_mask,
    spectrum_from_product,
    spectrum_from_tree,
)
from localfield_mra.trees import RootedTree, random_tree, star_tree

from .conftest import SMALL_FIELDS, all_trees


def test_worked_example_spectrum(example_tree, gf4):
    spec = spectrum_from_tree(example_tree)
    a, b, c = gf4.parse("1,0"), gf4.parse("0,1"), gf4.parse("1,1")
    assert set(spec.values) == {(0, 0), (a, c), (b, c), (c, 0)}
    assert spectrum_from_product(mask_from_tree(example_tree), 1) == spec


def test_mask_from_tree(example_tree, gf4):
    mask = mask_from_tree(example_tree)
    assert mask.value(0, 0) == 0
    assert mask.value(gf4.parse("0,1"), gf4.parse("1,1")) == 0
    assert mask.value(gf4.parse("1,1"), gf4.parse("0,1")) is None
    assert mask_eval(mask, CosetId(1, 1, (gf4.parse("1,1"), 0))) == 0
    assert len(mask.entries) == 4
    # one nonzero per row
    assert all(len(mask.row(i)) == 1 for i in gf4.elements())
    with pytest.raises(MaskError):
        mask_from_tree(example_tree, {(0, 1): 1})


def test_edge_exponents_propagate(example_tree, gf4):
    c, b = gf4.parse("1,1"), gf4.parse("0,1")
    mask = mask_from_tree(example_tree, {(0, c): 1})
    spec = spectrum_from_tree(example_tree, mask)
    assert spec.value((c, 0)) == 1 and spec.value((b, c)) == 1
    assert spectrum_from_product(mask, 1) == spec


def test_mismatched_mask_rejected(example_tree, gf4):
    with pytest.raises(TreeMaskMismatchError):
        spectrum_from_tree(example_tree, mask_from_tree(star_tree(gf4)))


@pytest.mark.parametrize("p,s", SMALL_FIELDS)
def test_tree_and_product_agree_exhaustively(p, s):
    f = GF.make(p, s)
    rng = random.Random(p * s)
    for tree in all_trees(f):
        lam = {(u, v): rng.randrange(p) for u, v in tree.edges()}
        mask = mask_from_tree(tree, lam)
        assert spectrum_from_product(mask, tree.M) == spectrum_from_tree(tree, mask)


def test_product_support_one_level_up(example_tree):
    # tabulating at a larger M gives the same function
    mask = mask_from_tree(example_tree)
    assert spectrum_from_product(mask, 3) == spectrum_from_tree(example_tree).restrict(3)


def test_product_rejects_too_small_M(example_tree):
    with pytest.raises(MaskInvalidError) as err:
        spectrum_from_product(mask_from_tree(example_tree), 0)
    assert err.value.witnesses


def test_all_ones_mask_invalid(gf4):
    with pytest.raises(MaskInvalidError):
        spectrum_from_product(MaskTable.all_ones(gf4), 1)
    assert sum(1 for _ in mask_chains(MaskTable.all_ones(gf4), 0)) == 4**2


def test_spectrum_restrict_and_json(example_tree):
    spec = spectrum_from_tree(example_tree)
    wide = spec.restrict(4)
    assert wide.M == 4 and wide.restrict(1) == spec
    assert SpectrumTable.from_json(spec.to_json()) == spec
    with pytest.raises(ValueError):
        spec.restrict(0)
    assert sorted(x for x in spec.support_levels() if x is not None) == [0, 1, 1]
    mask = mask_from_tree(example_tree)
    assert MaskTable.from_json(mask.to_json()) == mask


def test_star_coefficients_exact():
    f = GF.make(2, 2)
    coeffs = mask_to_coefficients(mask_from_tree(star_tree(f)))
    for h, v in coeffs.items():
        expected = Cyclo.from_rational(2, 1) if h.depth <= 1 else Cyclo.zero(2)
        assert v == expected, h
    assert coeffs.value(ShiftH0(f, (0, 0, 1))).is_zero()


@pytest.mark.parametrize("p,s", [(2, 2), (3, 1), (5, 1), (3, 2)])
def test_coefficients_round_trip_sampled(p, s):
    f = GF.make(p, s)
    rng = random.Random(11)
    for _ in range(10):
        tree = random_tree(f, rng)
        mask = mask_from_tree(tree, {e: rng.randrange(p) for e in tree.edges()})
        rebuilt = reconstruct_mask(mask_to_coefficients(mask))
        for i in f.elements():
            for j in f.elements():
                e = mask.value(i, j)
                assert rebuilt[(i, j)] == Cyclo.root(p, e)


def test_coefficients_direct_sum(example_tree, gf4):
    mask = mask_from_tree(example_tree, {(0, 3): 1})
    coeffs = mask_to_coefficients(mask)
    for h, v in coeffs.items():
        h1, h2 = h.padded(2)
        direct = Cyclo.zero(2)
        for (a1, a0), e in mask.entries.items():
            direct = direct + Cyclo.root(2, (e + gf4.dot(a0, h1) + gf4.dot(a1, h2)) % 2)
        assert v == direct.scaled(2)


def test_batched_solve_matches_single(gf4):
    trees = list(all_trees(gf4))
    masks = np.stack([mask_from_tree(t).to_array() for t in trees])
    beta, scale = coefficients_from_mask_arrays(gf4, masks)
    back, bscale = masks_from_coefficient_arrays(gf4, beta, scale)
    assert masks_agree(gf4, masks, 0, back, bscale).all()
    single = mask_to_coefficients(mask_from_tree(trees[5]))
    assert np.array_equal(single.coeffs, beta[5]) and single.scale == scale
