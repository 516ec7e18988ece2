"""Subband Chern numbers on the (momentum, modulation-phase) torus.

The torus is sampled on the quantized momenta k = 2 pi alpha / L
(alpha = 1..L/q, spanning one reduced zone of width 2 pi/q) times a uniform
phase grid delta_j = 2 pi j / N_delta.  Band-resolved link variables

    U = <phi | phi'> / |<phi | phi'>|

are multiplied around every plaquette and the field is the principal-branch
argument of the product; the Chern number is the field sum over the torus
divided by 2 pi, which is an integer up to floating-point residue because
every link cancels in the total product.

Both seams are closed exactly: the phase direction reuses the first column
(the Hamiltonian is 2 pi periodic in delta), and the momentum direction maps
the first column through the covariance unitary D = diag(e^{-i 2 pi X / q}),
which conjugates block(k) into block(k + 2 pi/q) identically.

Links along the momentum direction are overlaps of position-gauge states
e^{-ikX} psi(k); expressed through block vectors these carry the per-orbit
wrap-parity weights of the orbit basis (see the blocks module).  Phase-
direction links compare states at equal momentum, where the gauge factor
cancels and the plain overlap is already correct.
"""

from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from .blocks import (block_k_points, build_orbit_basis, covariance_unitary,
                     reduce_to_block)
from .errors import (DegenerateLinkError, GapClosingError, ResolutionError,
                     ValidationError)
from .model import hopping_matrix, potential_diagonal
from .spectra import eig_dense, eig_lowest, gershgorin_floor

__all__ = [
    "BZGrid",
    "ChernResult",
    "berry_link",
    "plaquette_field",
    "chern_from_vectors",
    "collect_grid_vectors",
    "chern_numbers",
    "chern_table",
]

DEGENERACY_FLOOR = 1e-12


@dataclass
class BZGrid:
    k_points: np.ndarray
    delta_points: np.ndarray


@dataclass
class ChernResult:
    cherns: tuple
    field: np.ndarray       # (n_bands, n_k, n_delta) plaquette fields
    grid: BZGrid
    residuals: np.ndarray   # per band, distance of field sum / 2 pi from integer

    def total(self):
        return int(sum(self.cherns))


def berry_link(a, b, overlap_floor=1e-8, metric=None):
    """Unimodular overlap between neighboring eigenvectors.

    ``metric`` (a real weight vector) turns the plain overlap into the
    position-gauge one needed for momentum-direction links of orbit-reduced
    states.
    """
    z = np.vdot(a, b) if metric is None else np.vdot(a, metric * b)
    mag = abs(z)
    if mag <= overlap_floor:
        raise DegenerateLinkError(
            f"link overlap {mag:.3e} below floor {overlap_floor:.1e}; "
            "states at neighboring grid points are orthogonal")
    return z / mag


def plaquette_field(p1, p2, p3, p4, overlap_floor=1e-8, k_metric=None):
    """Principal-branch field of one plaquette.

    Corners run counterclockwise from (k, delta): links 1->2 and 3->4 step
    in momentum (and take the metric), links 2->3 and 4->1 step in phase.
    """
    u = (berry_link(p1, p2, overlap_floor, k_metric)
         * berry_link(p2, p3, overlap_floor)
         * berry_link(p3, p4, overlap_floor, k_metric)
         * berry_link(p4, p1, overlap_floor))
    return -float(np.angle(u))


def chern_from_vectors(vectors, seam, grid, overlap_floor=1e-8,
                       residual_tol=1e-6, k_metric=None):
    """Assemble plaquette fields and Chern integers from grid eigenvectors.

    ``vectors[j, a, :, n]`` is band n at (k_a, delta_j); ``seam`` is the
    diagonal of the covariance unitary used to append the k = k_1 + 2 pi/q
    column, ``k_metric`` the momentum-link weights (None for families whose
    components sit at sharp positions, like the q x q pair model).
    Separating this step from diagonalization lets gauge-invariance checks
    re-run it with re-phased vectors at no solver cost.
    """
    n_delta, n_k, dim, n_bands = vectors.shape
    seam = np.asarray(seam).reshape(dim, 1)
    field = np.empty((n_bands, n_k, n_delta))
    for n in range(n_bands):
        for j in range(n_delta):
            jn = (j + 1) % n_delta
            for a in range(n_k):
                p1 = vectors[j, a, :, n]
                p4 = vectors[jn, a, :, n]
                if a + 1 < n_k:
                    p2 = vectors[j, a + 1, :, n]
                    p3 = vectors[jn, a + 1, :, n]
                else:
                    p2 = seam[:, 0] * vectors[j, 0, :, n]
                    p3 = seam[:, 0] * vectors[jn, 0, :, n]
                field[n, a, j] = plaquette_field(p1, p2, p3, p4, overlap_floor,
                                                 k_metric)
    sums = field.sum(axis=(1, 2)) / (2.0 * np.pi)
    residuals = np.abs(sums - np.round(sums))
    if residuals.max() > residual_tol:
        worst = int(residuals.argmax())
        raise ResolutionError(
            f"band {worst + 1} field sum {sums[worst]:.8f} is {residuals[worst]:.2e} "
            "from an integer; refine the grid (larger N_delta or L)")
    cherns = tuple(int(round(s)) for s in sums)
    return ChernResult(cherns=cherns, field=field, grid=grid, residuals=residuals)


def collect_grid_vectors(params, n_delta=30, solver="dense", orbits=None):
    """Diagonalize the bound band over the full (k, delta) grid.

    Returns (grid, vectors, seam) with q bands per point.  Every grid point
    is checked for band touching among the lowest q+1 states; a closing gap
    raises instead of silently producing garbage topology.
    """
    if params.N != 2 or params.bc != "periodic":
        raise ValidationError("Chern grid requires the periodic two-magnon sector")
    if n_delta < 3:
        raise ValidationError(f"N_delta must be >= 3, got {n_delta}")
    q = params.beta_q
    if orbits is None:
        orbits = build_orbit_basis(params.L, q)
    ks = block_k_points(params.L, q)
    if len(ks) < 3:
        raise ValidationError(f"momentum grid needs L/q >= 3, got {len(ks)}")
    deltas = 2.0 * np.pi * np.arange(1, n_delta + 1) / n_delta
    hop = hopping_matrix(orbits.basis, params)
    hop_blocks = [reduce_to_block(hop, orbits, k, sparse=(solver == "lowest"))
                  for k in ks]
    dim = len(orbits)
    vectors = np.empty((n_delta, len(ks), dim, q), dtype=np.complex128)
    for j, d in enumerate(deltas):
        diag = potential_diagonal(orbits.basis, replace(params, delta=d))[orbits.rep_rows]
        for a, hb in enumerate(hop_blocks):
            if solver == "lowest":
                block = hb + sp.diags(diag)
                es = eig_lowest(block, q + 1, sigma=gershgorin_floor(block) - params.J)
            elif solver == "dense":
                block = hb + np.diag(diag)
                es = eig_dense(block)
            else:
                raise ValidationError(f"unknown solver {solver!r}")
            values = es.values
            floor = DEGENERACY_FLOOR * max(1.0, float(np.abs(values[:q + 1]).max()))
            for n in range(q):
                if values[n + 1] - values[n] <= floor:
                    raise GapClosingError(
                        f"bands {n + 1}/{n + 2} touch at grid point "
                        f"(alpha={a + 1}, delta index {j + 1}): "
                        f"gap {values[n + 1] - values[n]:.3e}",
                        where=(a + 1, j + 1, n + 1))
            vectors[j, a] = es.vectors[:, :q]
    grid = BZGrid(k_points=ks, delta_points=deltas)
    return grid, vectors, covariance_unitary(orbits), orbits.link_weight


def chern_numbers(params, n_delta=30, solver=None, overlap_floor=1e-8):
    """Chern numbers of the q bound subbands.

    Dense per-block diagonalization for small q, shift-inverted iteration
    for the larger blocks (q >= 7 by default).
    """
    if solver is None:
        solver = "dense" if params.beta_q <= 5 else "lowest"
    grid, vectors, seam, metric = collect_grid_vectors(params, n_delta, solver)
    result = chern_from_vectors(vectors, seam, grid, overlap_floor,
                                k_metric=metric)
    if sum(result.cherns) != 0:
        raise ResolutionError(
            f"subband Chern numbers {result.cherns} do not sum to zero; "
            "grid unresolved")
    return result


def chern_table(params_template, q_list=(3, 5), size_factors=(21, 23),
                n_delta=30):
    """Chern vectors for every reduced fraction p/q < 1/2 with q in q_list.

    Each fraction is evaluated at L = f*q for the given (odd) size factors;
    a row is marked converged when all sizes agree.  Returns a list of dicts
    with keys beta_p, beta_q, L, cherns, converged.
    """
    for f in size_factors:
        if f % 2 == 0:
            raise ValidationError("size factors must be odd (L/q must be odd)")
    rows = []
    for q in q_list:
        for p in range(1, q // 2 + 1):
            if np.gcd(p, q) != 1:
                continue
            per_size = []
            for f in size_factors:
                params = replace(params_template, beta_p=p, beta_q=q, L=f * q,
                                 bc="periodic", N=2)
                per_size.append(chern_numbers(params, n_delta).cherns)
            converged = all(c == per_size[-1] for c in per_size)
            rows.append({"beta_p": p, "beta_q": q, "L": size_factors[-1] * q,
                         "cherns": per_size[-1], "converged": converged})
    return rows
