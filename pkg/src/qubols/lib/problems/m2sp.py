"""Minimum 2-sum: objective, reduction to QAP and spectral initialization."""

from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np

from qubols.lib.constants import SPECTRAL_MAX_VERTICES
from qubols.lib.problems.graph import WeightedGraph, laplacian
from qubols.lib.problems.permutation import Permutation
from qubols.lib.problems.qap import QapInstance
from qubols.lib.qubo import DimensionError

LOG = logging.getLogger(__name__)

# An ordering is a Permutation sending each vertex to its 0-based position.
Ordering = Permutation


def two_sum_objective(g: WeightedGraph, ordering: Ordering) -> Fraction:
    """``sum_{uv in E} w_uv (pi(u) - pi(v))**2``."""
    if len(ordering) != g.n:
        raise DimensionError(g.n, len(ordering), "ordering")
    total = Fraction(0)
    for u, v, w in g.edges:
        total += w * (ordering[u] - ordering[v]) ** 2
    return total


def m2sp_to_qap(g: WeightedGraph) -> QapInstance:
    """QAP with the Laplacian as flow and ``d_kl = (k + 1)(l + 1)``.

    Positions are 1-based in the distance matrix; a 0 position would cancel
    every term of its vertex.
    """
    positions = np.arange(1, g.n + 1, dtype=np.int64)
    return QapInstance(laplacian(g), np.outer(positions, positions), g.name)


def spectral_ordering(g: WeightedGraph) -> Ordering:
    """Order vertices by their Fiedler vector component, ties by vertex index.

    When the second-smallest Laplacian eigenvalue is repeated, the vector is
    the projection of the centered vertex-index vector onto its eigenspace,
    which does not depend on the basis the eigensolver picked.
    """
    n = g.n
    if n <= 1:
        return Permutation.identity(n)
    if n > SPECTRAL_MAX_VERTICES:
        LOG.warning(f"Dense eigendecomposition of a {n}-vertex Laplacian")

    matrix = np.asarray(laplacian(g), dtype=np.float64)
    values, vectors = np.linalg.eigh(matrix)
    tolerance = 1e-9 * max(1.0, float(np.abs(values).max()))
    columns = np.flatnonzero(np.abs(values - values[1]) <= tolerance)
    centered = np.arange(n, dtype=np.float64) - (n - 1) / 2
    if len(columns) == 1:
        fiedler = vectors[:, 1]
    else:
        basis = vectors[:, columns]
        fiedler = basis @ (basis.T @ centered)
        if np.linalg.norm(fiedler) <= tolerance:
            fiedler = vectors[:, 1]
    # orient along increasing vertex index so that results are reproducible
    if fiedler @ centered < 0:
        fiedler = -fiedler
    scale = float(np.abs(fiedler).max()) or 1.0
    keys = np.round(fiedler / scale, 9)
    ranking = sorted(range(n), key=lambda u: (keys[u], u))
    LOG.debug(f"Spectral ordering with lambda_2 = {values[1]:.6g}")
    return Permutation.from_positions(ranking)
