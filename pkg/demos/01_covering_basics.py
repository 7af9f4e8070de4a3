"""Walk through the decomposition model by hand.

A decomposition is an ordered list of n pairs of disjoint subsets of
{1..m}, stored as two n x m binary matrices.  Swapping a pair exchanges
its two rows; a choice of swaps that leaves every column of the first
matrix nonzero is a covering.
"""
import numpy as np

from satcover import (
    DecompositionPair,
    apply_swaps,
    column_counts,
    input_length,
    is_alpha_covering,
    validate,
)

# two pairs over three elements: pair 1 holds ({1}, {2,3}), pair 2 holds
# ({2}, {1,3})
pair = DecompositionPair(
    np.array([[1, 0, 0], [0, 1, 0]], dtype=np.uint8),
    np.array([[0, 1, 1], [1, 0, 1]], dtype=np.uint8),
)

report = validate(pair)
print("valid decomposition:", report.ok)
print("rows n =", pair.n, " columns m =", pair.m)
print("input length (total set cells):", input_length(pair))

counts = column_counts(pair)
print("first-component column counts: ", counts.m_alpha.tolist())
print("second-component column counts:", counts.m_alpha_bar.tolist())

# column 3 has no 1 in the first matrix, so the identity choice of swaps
# is not a covering
print("identity is a covering:", is_alpha_covering(pair))

# a single swap never works here: swapping pair 1 empties column 1,
# swapping pair 2 empties column 2
for swaps in ({1}, {2}):
    print(f"swap set {swaps} is a covering:", is_alpha_covering(apply_swaps(pair, swaps)))

# swapping both pairs moves {2,3} and {1,3} into the first matrix, and
# together they touch every column
swapped = apply_swaps(pair, {1, 2})
print("after swapping both pairs:")
print(swapped.sm_alpha)
print("swap set {1, 2} is a covering:", is_alpha_covering(swapped))

# swaps are involutions: applying the same set twice restores the input
print("double swap restores:", apply_swaps(swapped, {1, 2}) == pair)
