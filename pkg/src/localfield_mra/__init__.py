"""Orthogonal multiresolution analyses on local fields of positive characteristic,
built from rooted trees on GF(p^s) and verified in exact arithmetic."""

from .analysis import Report, Verdict, full_report
from .characters import Character, CosetId
from .exactnum import Cyclo
from .gf import GF, GFElem, find_irreducible, is_irreducible
from .localfield import LocalElem, ShiftH0, h0_enumerate
from .mra import (
    CoeffTable,
    MaskTable,
    SpectrumTable,
    mask_eval,
    mask_from_tree,
    mask_to_coefficients,
    reconstruct_mask,
    spectrum_from_product,
    spectrum_from_tree,
)
from .stepfn import QuotientGrid, StepFn, inner_product
from .synthesis import extract_indicator, grid_export, scaling_from_spectrum
from .trees import RootedTree, enumerate_trees, prufer_decode, prufer_encode, random_tree, star_tree

__all__ = [
    "Character", "CoeffTable", "CosetId", "Cyclo", "GF", "GFElem", "LocalElem", "MaskTable",
    "QuotientGrid", "Report", "RootedTree", "ShiftH0", "SpectrumTable", "StepFn", "Verdict",
    "enumerate_trees", "extract_indicator", "find_irreducible", "full_report", "grid_export",
    "h0_enumerate", "inner_product", "is_irreducible", "mask_eval", "mask_from_tree",
    "mask_to_coefficients", "prufer_decode", "prufer_encode", "random_tree", "reconstruct_mask",
    "scaling_from_spectrum", "spectrum_from_product", "spectrum_from_tree", "star_tree",
]
