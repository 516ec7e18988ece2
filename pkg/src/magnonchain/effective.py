"""Effective single-particle model for the bound pair.

Deep in the attractive regime (Delta >> J) a nearest-neighbor magnon pair
behaves as one composite particle hopping with amplitude J_eff = J^2/Delta
on the lattice of bond centers.  The pair feels the sum of the two site
fields, which is again a cosine:

    B_m + B_{m+1} = lambda' cos(2 pi beta m + delta'),
    lambda' = 2 lambda cos(pi beta),   delta' = delta + pi beta,

so the pair problem is a Harper chain with renormalized modulation.  Second
order perturbation theory also produces the constant -Delta - 2 J^2/Delta,
kept here as ``alignment_shift`` so effective and exact spectra can be laid
on top of each other without fitting.
"""

from dataclasses import dataclass, replace

import numpy as np

from .blocks import block_k_points
from .errors import GapClosingError, ResolutionError, ValidationError
from .model import TWO_PI
from .spectra import DENSE_CAP

__all__ = [
    "HarperParams",
    "harper_params",
    "build_effective",
    "effective_bloch",
    "effective_chern_numbers",
    "alignment_shift",
    "presentation_shift",
    "BandComparison",
    "compare_bound_band",
]


@dataclass
class HarperParams:
    J_eff: float
    lambda_prime: float
    delta_prime: float
    mu: np.ndarray  # on-site pair energies mu_m, m = 1..L

    @property
    def L(self):
        return len(self.mu)


def harper_params(params):
    """Renormalized pair-model parameters for the given chain."""
    if params.Delta == 0.0:
        raise ValidationError("effective pair model requires Delta != 0")
    J_eff = params.J ** 2 / params.Delta
    beta = params.beta
    lam_p = 2.0 * params.lam * np.cos(np.pi * beta)
    delta_p = params.delta + np.pi * beta
    m = np.arange(1, params.L + 1)
    if params.beta_q > 0:
        # same exact angle reduction as the microscopic field: the sum
        # B_m + B_{m+1} must be bit-periodic with period q as well
        angles = TWO_PI * ((params.beta_p * m) % params.beta_q) / params.beta_q
    else:
        angles = TWO_PI * beta * m
    mu = lam_p * np.cos(angles + delta_p)
    return HarperParams(J_eff=J_eff, lambda_prime=lam_p, delta_prime=delta_p,
                        mu=mu)


def build_effective(params):
    """Dense effective Hamiltonian on the pair lattice.

    Periodic chains keep all L bond centers on a ring.  Open chains have
    L-1 bonds; the two end bonds miss one second-order virtual path each,
    which raises them by +J_eff.
    """
    hp = harper_params(params)
    J_eff = hp.J_eff
    if params.bc == "periodic":
        n = params.L
        H = np.zeros((n, n))
        H[np.arange(n), np.arange(n)] = hp.mu
        for m in range(n):
            H[m, (m + 1) % n] -= J_eff
            H[(m + 1) % n, m] -= J_eff
    else:
        n = params.L - 1
        if n < 1:
            raise ValidationError("open pair lattice needs L >= 2")
        H = np.zeros((n, n))
        H[np.arange(n), np.arange(n)] = hp.mu[:n]
        H[0, 0] += J_eff
        H[n - 1, n - 1] += J_eff
        for m in range(n - 1):
            H[m, m + 1] -= J_eff
            H[m + 1, m] -= J_eff
    return H


def effective_bloch(params, k):
    """q x q Bloch block of the periodic effective model at momentum k."""
    if not params.commensurate():
        raise ValidationError("Bloch reduction needs L divisible by q")
    hp = harper_params(params)
    q = params.beta_q
    H = np.zeros((q, q), dtype=np.complex128)
    for m in range(q):
        H[m, m] += hp.mu[m]
        H[m, (m + 1) % q] += -hp.J_eff * np.exp(1j * k)
        H[m, (m - 1) % q] += -hp.J_eff * np.exp(-1j * k)
    return H


def effective_chern_numbers(params, n_delta=30, overlap_floor=1e-8):
    """Chern numbers of the q Harper subbands, same plaquette engine.

    The covariance seam for the q x q Bloch block is the diagonal
    e^{-i 2 pi m / q} over unit-cell sites m = 1..q.
    """
    from .chern import BZGrid, DEGENERACY_FLOOR, chern_from_vectors
    q = params.beta_q
    ks = block_k_points(params.L, q)
    deltas = TWO_PI * np.arange(1, n_delta + 1) / n_delta
    vectors = np.empty((n_delta, len(ks), q, q), dtype=np.complex128)
    for j, d in enumerate(deltas):
        pj = replace(params, delta=d)
        for a, k in enumerate(ks):
            values, vecs = np.linalg.eigh(effective_bloch(pj, k))
            floor = DEGENERACY_FLOOR * max(1.0, float(np.abs(values).max()))
            if np.diff(values).min() <= floor:
                n = int(np.diff(values).argmin())
                raise GapClosingError(
                    f"effective bands {n + 1}/{n + 2} touch at "
                    f"(alpha={a + 1}, delta index {j + 1})",
                    where=(a + 1, j + 1, n + 1))
            vectors[j, a] = vecs
    seam = np.exp(-1j * TWO_PI * np.arange(1, q + 1) / q)
    grid = BZGrid(k_points=ks, delta_points=deltas)
    result = chern_from_vectors(vectors, seam, grid, overlap_floor)
    if result.total() != 0:
        raise ResolutionError(
            f"effective subband Chern numbers {result.cherns} do not sum to "
            "zero; grid unresolved")
    return result


def alignment_shift(params):
    """Constant separating effective and exact pair energies."""
    if params.Delta == 0.0:
        raise ValidationError("alignment shift requires Delta != 0")
    return -params.Delta - 2.0 * params.J ** 2 / params.Delta


def presentation_shift(params):
    """Energy offset (Delta/J + 2 J/Delta, in units of J) used when plotting
    pair spectra around zero; purely cosmetic, inverse of the alignment."""
    return params.Delta / params.J + 2.0 * params.J / params.Delta


@dataclass
class BandComparison:
    exact: np.ndarray
    effective: np.ndarray
    deviations: np.ndarray
    max_abs_deviation: float


def compare_bound_band(params):
    """Lowest pair energies of the exact chain against the effective model.

    Periodic rings compare L states, open chains L-1.  The effective side
    carries the alignment shift, so the deviation measures the quality of
    the J/Delta expansion, not a fitted offset.
    """
    if params.N != 2:
        raise ValidationError("pair comparison is defined in the two-magnon sector")
    n_states = params.L if params.bc == "periodic" else params.L - 1
    if params.bc == "periodic" and params.commensurate():
        from .blocks import bloch_block, build_orbit_basis
        orbits = build_orbit_basis(params.L, params.beta_q)
        energies = []
        for k in block_k_points(params.L, params.beta_q):
            energies.append(np.linalg.eigvalsh(bloch_block(params, k, orbits=orbits).matrix))
        exact = np.sort(np.concatenate(energies))[:n_states]
    else:
        from .model import build_hamiltonian
        from .spectra import eig_dense
        H = build_hamiltonian(params)
        if H.shape[0] > DENSE_CAP:
            raise ValidationError(
                f"dense comparison dimension {H.shape[0]} exceeds {DENSE_CAP}")
        exact = eig_dense(H).values[:n_states]
    effective = np.sort(np.linalg.eigvalsh(build_effective(params)))
    effective = effective + alignment_shift(params)
    deviations = np.abs(exact - effective)
    return BandComparison(exact=exact, effective=effective,
                          deviations=deviations,
                          max_abs_deviation=float(deviations.max()))
