"""
Double sums over node pairs of a quadrature surface.

    sum_i w_i sum_{j != i} w_j f(x_i, x_j)

Rows are processed in fixed blocks on a thread pool; each block fills
its own slice of the per-row sums and the final reduction uses
math.fsum, so totals do not depend on the thread count.

Kernels that are singular (or merely discontinuous) on the diagonal
declare their leading behavior c rho^-p or c log(rho) through
SingularTerm; each row then gets the lattice-zeta correction that
turns the punctured sum into an approximation of the integral.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Tuple

import numpy as np

from perimflow.errors import ConfigurationError
from perimflow.quadrature.lattice import (
    epstein_zeta,
    epstein_zeta_derivative_at_zero,
    gram_matrices,
)

logger = logging.getLogger(__name__)

THREADS_ENV = "PERIMFLOW_THREADS"

# Matrix entries per block.
_BLOCK_ENTRIES = 1 << 20

# Tangent directions used for the angular averages.
_DIRECTIONS = 32


def thread_count():
    "Worker threads, from PERIMFLOW_THREADS (default: up to 4 cores)."
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return max(1, min(4, os.cpu_count() or 1))
    try:
        n = int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{THREADS_ENV} must be an integer, was '{raw}'.") from e
    if n < 1:
        raise ConfigurationError(f"{THREADS_ENV} must be >= 1, was {n}.")
    return n


class PairBlock:
    """
    Pair geometry for rows start:stop against all nodes.

    The diagonal entries of rho are set to 1; whatever a kernel
    returns there is discarded.
    """

    def __init__(self, surface, start, stop):
        self.surface = surface
        self.start = start
        self.stop = stop
        self.rows = np.arange(start, stop)
        self._diag = (self.rows - start, self.rows)
        self._memo = {}

    def memo(self, key, compute):
        "Value of compute() stored under key, so kernels can share it."
        if key not in self._memo:
            self._memo[key] = compute()
        return self._memo[key]

    @cached_property
    def rho_sq(self):
        "|x_i - x_j|^2."
        x = self.surface.nodes
        xsq = np.einsum("ij,ij->i", x, x)
        rows = x[self.start : self.stop]
        block = xsq[self.start : self.stop, None] + xsq[None, :] - 2.0 * rows @ x.T
        np.maximum(block, 0.0, out=block)
        block[self._diag] = 1.0
        return block

    @cached_property
    def rho(self):
        "|x_i - x_j|."
        return np.sqrt(self.rho_sq)

    @cached_property
    def dot(self):
        "nu_i . nu_j."
        nu = self.surface.normals
        return nu[self.start : self.stop] @ nu.T

    @cached_property
    def dnu_sq(self):
        "|nu_i - nu_j|^2 = 2 - 2 nu_i . nu_j."
        return np.maximum(2.0 - 2.0 * self.dot, 0.0)

    @cached_property
    def proj_row(self):
        "nu_i . (x_i - x_j) / rho."
        x, nu = self.surface.nodes, self.surface.normals
        nu_i = nu[self.start : self.stop]
        own = np.einsum("ij,ij->i", nu_i, x[self.start : self.stop])
        return (own[:, None] - nu_i @ x.T) / self.rho

    @cached_property
    def proj_col(self):
        "nu_j . (x_i - x_j) / rho."
        x, nu = self.surface.nodes, self.surface.normals
        own = np.einsum("ij,ij->i", nu, x)
        return (x[self.start : self.stop] @ nu.T - own[None, :]) / self.rho

    def zero_diagonal(self, values):
        "Drop the i == j entries."
        values[self._diag] = 0.0
        return values


@dataclass(frozen=True)
class SingularTerm:
    """
    Diagonal behavior coefficient * rho^-power, or coefficient * log(rho)
    when log is set.  coefficient is a scalar or one value per node.
    """

    coefficient: object
    power: float = 0.0
    log: bool = False


@dataclass(frozen=True)
class PairKernel:
    "Named pair kernel and its diagonal behavior."

    name: str
    evaluate: Callable[[PairBlock], np.ndarray]
    singular: Tuple[SingularTerm, ...] = ()


@dataclass(frozen=True)
class LocalCoefficients:
    """
    Angular averages over unit tangents u at each node, with S the
    shape operator (derivative of the normal):

      sq   = mean |S u|^2
      abs  = mean |S u|
      curv = mean u . S u  (mean curvature)
    """

    sq: np.ndarray
    abs: np.ndarray
    curv: np.ndarray


@lru_cache(maxsize=16)
def local_coefficients(surface):
    "LocalCoefficients of a surface, from its tangents and normal derivatives."
    x_t, x_p = surface.tangents[:, 0, :], surface.tangents[:, 1, :]
    n_t, n_p = surface.normal_derivatives[:, 0, :], surface.normal_derivatives[:, 1, :]
    nu = surface.normals

    e1 = x_t / np.linalg.norm(x_t, axis=1, keepdims=True)
    e2 = np.cross(nu, e1)
    psi = 2.0 * math.pi * np.arange(_DIRECTIONS) / _DIRECTIONS
    u = np.cos(psi)[None, :, None] * e1[:, None, :] + np.sin(psi)[None, :, None] * e2[:, None, :]

    g11 = np.einsum("ij,ij->i", x_t, x_t)
    g12 = np.einsum("ij,ij->i", x_t, x_p)
    g22 = np.einsum("ij,ij->i", x_p, x_p)
    det = g11 * g22 - g12**2
    r1 = np.einsum("ikj,ij->ik", u, x_t)
    r2 = np.einsum("ikj,ij->ik", u, x_p)
    alpha = (g22[:, None] * r1 - g12[:, None] * r2) / det[:, None]
    beta = (g11[:, None] * r2 - g12[:, None] * r1) / det[:, None]
    s_u = alpha[:, :, None] * n_t[:, None, :] + beta[:, :, None] * n_p[:, None, :]

    sq = np.einsum("ikj,ikj->ik", s_u, s_u)
    return LocalCoefficients(
        sq=sq.mean(axis=1),
        abs=np.sqrt(sq).mean(axis=1),
        curv=np.einsum("ikj,ikj->ik", u, s_u).mean(axis=1),
    )


@lru_cache(maxsize=64)
def _zeta_values(surface, s):
    return epstein_zeta(*gram_matrices(surface.lattice_edges), s)


@lru_cache(maxsize=16)
def _zeta_log(surface):
    return epstein_zeta_derivative_at_zero(*gram_matrices(surface.lattice_edges))


def diagonal_correction(surface, term):
    "Per-row correction for one SingularTerm."
    w = surface.weights
    if term.log:
        return 0.5 * w * term.coefficient * _zeta_log(surface)
    return -w * term.coefficient * _zeta_values(surface, term.power / 2.0)


def _block_rows(n):
    per_block = max(1, _BLOCK_ENTRIES // max(n, 1))
    return [(start, min(start + per_block, n)) for start in range(0, n, per_block)]


def row_sums(surface, kernels, corrected=True):
    """
    {kernel name: array of sum_{j != i} w_j f(x_i, x_j)} plus, when
    corrected, the diagonal corrections.
    """
    n = surface.size
    w = surface.weights
    out = {k.name: np.empty(n) for k in kernels}

    def work(bounds):
        block = PairBlock(surface, *bounds)
        for k in kernels:
            values = block.zero_diagonal(np.asarray(k.evaluate(block), dtype=float))
            out[k.name][bounds[0] : bounds[1]] = values @ w

    blocks = _block_rows(n)
    threads = thread_count()
    logger.debug(
        "pair sums: %d nodes, %d blocks, %d threads, kernels %s",
        n,
        len(blocks),
        threads,
        [k.name for k in kernels],
    )
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for _ in pool.map(work, blocks):
            pass

    if corrected:
        for k in kernels:
            for term in k.singular:
                out[k.name] += diagonal_correction(surface, term)
    return out


def double_sums(surface, kernels, corrected=True):
    "{kernel name: sum_i w_i (row sum)_i}."
    rows = row_sums(surface, kernels, corrected)
    w = surface.weights
    return {name: math.fsum(w * r) for name, r in rows.items()}
