"""Continuous deformation between the exact pair sector and the Harper model.

The effective Hamiltonian can be embedded back into the two-magnon sector by
letting it act on the nearest-neighbor pair states only (all other sectors
stay untouched).  Linear interpolation

    H(eta) = (1 - eta) H_exact + eta H_embedded

then connects both operators inside one symmetry class: the embedding is
built from the same cotranslation-covariant ingredients, so every H(eta)
block-diagonalizes on the same momentum grid.  If the subband gaps stay open
for all eta the Chern vectors of the endpoints must agree, which is the
statement being checked numerically here.
"""

from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from .blocks import block_k_points, build_orbit_basis, reduce_to_block
from .effective import alignment_shift, harper_params
from .errors import ValidationError
from .model import MagnonBasis, hopping_matrix, potential_diagonal

__all__ = [
    "embed_effective",
    "embedded_parts",
    "auxiliary_hamiltonian",
    "GapTrace",
    "gap_trace",
]


def _pair_indices(basis, L):
    """Sector indices of the L ring bond states (m, m+1), m = 1..L."""
    idx = np.empty(L, dtype=np.int64)
    for m in range(1, L + 1):
        pair = (m, m + 1) if m < L else (1, L)
        idx[m - 1] = basis.index_of[pair]
    return idx


def embedded_parts(params, basis=None):
    """Hopping matrix and diagonal of the embedded effective operator.

    Kept separate because only the diagonal depends on the modulation
    phase; sweeps rebuild it cheaply while reusing the reduced hopping.
    """
    if params.N != 2 or params.bc != "periodic":
        raise ValidationError("embedding is defined for the periodic pair sector")
    if basis is None:
        basis = MagnonBasis(params.L, params.N)
    hp = harper_params(params)
    idx = _pair_indices(basis, params.L)
    n = len(basis)
    rows = np.concatenate([idx, np.roll(idx, -1)])
    cols = np.concatenate([np.roll(idx, -1), idx])
    vals = np.full(2 * params.L, -hp.J_eff)
    hop = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    diag = np.zeros(n)
    diag[idx] = hp.mu + alignment_shift(params)
    return hop, diag


def embed_effective(params, basis=None):
    """Full sparse embedding of the effective model in the pair sector."""
    hop, diag = embedded_parts(params, basis)
    H = hop.tolil()
    H.setdiag(H.diagonal() + diag)
    return H.tocsr()


def auxiliary_hamiltonian(params, eta, basis=None, H=None, H_emb=None):
    """Interpolated operator (1 - eta) H + eta H_embedded."""
    if not 0.0 <= eta <= 1.0:
        raise ValidationError(f"eta must lie in [0, 1], got {eta}")
    if basis is None:
        basis = MagnonBasis(params.L, params.N)
    if H is None:
        from .model import build_hamiltonian
        H = build_hamiltonian(params, basis)
    if H_emb is None:
        H_emb = embed_effective(params, basis)
    return ((1.0 - eta) * H + eta * H_emb).tocsr()


@dataclass
class GapTrace:
    eta_grid: np.ndarray
    gaps: np.ndarray      # (n_eta, q - 1) minimal direct subband gaps
    min_gap: float


def gap_trace(params, n_eta=21, n_delta=30):
    """Minimal direct gaps between adjacent bound subbands along eta.

    For each eta the q lowest block eigenvalues are scanned over the full
    (k, delta) grid; entry n of a row is min(E_{n+2} - E_{n+1}).  Row 0 is
    the exact model, the last row the embedded effective model.
    """
    if n_eta < 2:
        raise ValidationError(f"n_eta must be >= 2, got {n_eta}")
    if params.N != 2 or params.bc != "periodic":
        raise ValidationError("gap trace runs in the periodic pair sector")
    q = params.beta_q
    orbits = build_orbit_basis(params.L, q)
    ks = block_k_points(params.L, q)
    deltas = 2.0 * np.pi * np.arange(1, n_delta + 1) / n_delta
    hop = hopping_matrix(orbits.basis, params)
    hop_k = [reduce_to_block(hop, orbits, k) for k in ks]
    diag_pairs = []
    for d in deltas:
        pd = replace(params, delta=d)
        _, ediag = embedded_parts(pd, orbits.basis)
        diag_pairs.append((potential_diagonal(orbits.basis, pd)[orbits.rep_rows],
                           ediag[orbits.rep_rows]))
    # the embedded hopping carries no modulation phase, reduce it once
    emb_hop, _ = embedded_parts(params, orbits.basis)
    emb_k = [reduce_to_block(emb_hop, orbits, k) for k in ks]
    etas = np.linspace(0.0, 1.0, n_eta)
    gaps = np.full((n_eta, q - 1), np.inf)
    for i, eta in enumerate(etas):
        for exact_diag, emb_diag in diag_pairs:
            diag = (1.0 - eta) * exact_diag + eta * emb_diag
            for hk, ek in zip(hop_k, emb_k):
                block = (1.0 - eta) * hk + eta * ek
                block[np.arange(len(diag)), np.arange(len(diag))] += diag
                values = np.linalg.eigvalsh(block)
                d = np.diff(values[:q])
                np.minimum(gaps[i], d, out=gaps[i])
    return GapTrace(eta_grid=etas, gaps=gaps, min_gap=float(gaps.min()))
