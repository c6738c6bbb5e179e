# Copyright 2026 MediaSeal contributors
# License LGPL-3.0 or later (http://www.gnu.org/licenses/lgpl.html)

"""Blockwise 8×8 orthonormal DCT over complete blocks of a plane"""

import numpy as np
from scipy import fft

BLOCK = 8


def block_grid(plane):
    """Number of complete blocks (rows, cols) of a 2-D plane"""
    height, width = plane.shape
    return height // BLOCK, width // BLOCK


def to_blocks(plane):
    """Split the complete-block area into an array (rows, cols, 8, 8)"""
    rows, cols = block_grid(plane)
    area = plane[: rows * BLOCK, : cols * BLOCK]
    return area.reshape(rows, BLOCK, cols, BLOCK).swapaxes(1, 2)


def from_blocks(blocks, plane):
    """Write blocks back into a copy of ``plane``"""
    rows, cols = blocks.shape[:2]
    result = np.array(plane, dtype=np.float64, copy=True)
    result[: rows * BLOCK, : cols * BLOCK] = blocks.swapaxes(1, 2).reshape(
        rows * BLOCK, cols * BLOCK
    )
    return result


def forward(plane):
    """DCT-II coefficients of every complete block"""
    return fft.dctn(to_blocks(np.asarray(plane, dtype=np.float64)), axes=(2, 3), norm="ortho")


def inverse(coefficients, plane):
    """Inverse of :func:`forward`, partial blocks of ``plane`` are kept"""
    return from_blocks(fft.idctn(coefficients, axes=(2, 3), norm="ortho"), plane)
