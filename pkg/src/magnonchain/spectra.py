"""Eigensolvers and spectral observables for the magnon sectors.

Dense work goes through LAPACK (`numpy.linalg.eigh`), iterative work through
ARPACK (`scipy.sparse.linalg.eigsh`) with a fixed start vector so repeated
runs are reproducible.  Every solve is validated: residuals against the
operator and orthonormality of the returned vectors.
"""

from dataclasses import dataclass, replace
from math import gcd

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .blocks import block_k_points, build_orbit_basis, reduce_to_block
from .errors import (BandOverlapError, ConvergenceError, ValidationError)
from .model import build_basis, build_hamiltonian, hopping_matrix, potential_diagonal

__all__ = [
    "EigenSystem",
    "BandSet",
    "EdgeState",
    "DENSE_CAP",
    "eig_dense",
    "eig_lowest",
    "gershgorin_floor",
    "bound_band",
    "density_profile",
    "correlation_matrix",
    "delta_sweep",
    "butterfly",
    "butterfly_lambda",
    "butterfly_envelope",
    "find_edge_states",
]

DENSE_CAP = 6000
_ARPACK_SEED = 987123
# full residual/orthonormality checks up to this dimension, sampled above
_FULL_CHECK_DIM = 2048


@dataclass
class EigenSystem:
    values: np.ndarray
    vectors: np.ndarray

    def __iter__(self):
        return iter((self.values, self.vectors))


def _as_dense(H):
    if sp.issparse(H):
        return H.toarray()
    return np.asarray(H)


def _validate_pairs(H, values, vectors, tol, ortho_tol=1e-10):
    """Residual and orthonormality check for computed eigenpairs."""
    scale = max(1.0, float(np.abs(values).max()) if len(values) else 1.0)
    if vectors.shape[1] > _FULL_CHECK_DIM:
        rng = np.random.default_rng(0)
        cols = rng.choice(vectors.shape[1], size=64, replace=False)
    else:
        cols = slice(None)
    V = vectors[:, cols]
    resid = np.abs(H @ V - V * values[cols]).max()
    if resid > tol * scale:
        raise ConvergenceError(
            f"eigenpair residual {resid:.3e} exceeds {tol:.1e} * scale", residual=float(resid))
    gram = V.conj().T @ V
    ortho = np.abs(gram - np.eye(gram.shape[0])).max()
    if ortho > ortho_tol:
        raise ConvergenceError(
            f"eigenvectors not orthonormal (deviation {ortho:.3e})", residual=float(ortho))


def eig_dense(H, max_dim=DENSE_CAP, check=True):
    """Full Hermitian eigendecomposition, ascending.

    Refuses matrices above `max_dim` (use `eig_lowest` for those).
    """
    n = H.shape[0]
    if n > max_dim:
        raise ValidationError(
            f"dense diagonalization refused at dim {n} > {max_dim}; use eig_lowest")
    A = _as_dense(H)
    values, vectors = np.linalg.eigh(A)
    if check:
        _validate_pairs(A, values, vectors, 1e-9)
    return EigenSystem(values=values, vectors=vectors)


def gershgorin_floor(H):
    """A certified lower bound on the spectrum (diagonal minus row sums)."""
    if sp.issparse(H):
        diag = H.diagonal().real
        rowabs = np.asarray(abs(H).sum(axis=1)).ravel()
    else:
        A = np.asarray(H)
        diag = np.diag(A).real
        rowabs = np.abs(A).sum(axis=1)
    return float((diag - (rowabs - np.abs(diag))).min())


def eig_lowest(H, m, sigma=None, maxiter=None, check=True, ncv=None):
    """The m lowest eigenpairs via ARPACK with a deterministic start vector.

    With `sigma` below the spectrum the solve runs in shift-invert mode,
    which is much faster when the lowest eigenvalues are tightly clustered.
    Falls back to a dense solve when m is too close to the dimension for
    ARPACK.  Non-convergence raises `ConvergenceError`.
    """
    n = H.shape[0]
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    if m > n:
        raise ValidationError(f"m={m} exceeds dimension {n}")
    if m > n - 2 or n < 8:
        full = eig_dense(H, max_dim=max(DENSE_CAP, n), check=check)
        return EigenSystem(values=full.values[:m], vectors=full.vectors[:, :m])
    if ncv is None:
        # nearly degenerate clusters need a roomier Krylov space than the
        # ARPACK default of 2m+1
        ncv = min(n, max(4 * m, 40))
    v0 = np.random.default_rng(_ARPACK_SEED).standard_normal(n)
    try:
        if sigma is None:
            values, vectors = spla.eigsh(H, k=m, which="SA", v0=v0, maxiter=maxiter,
                                         ncv=ncv)
        else:
            values, vectors = spla.eigsh(H, k=m, sigma=sigma, which="LM", v0=v0,
                                         maxiter=maxiter, ncv=ncv)
    except spla.ArpackNoConvergence as exc:
        raise ConvergenceError(
            f"ARPACK did not converge ({len(exc.eigenvalues)}/{m} pairs)") from exc
    order = np.argsort(values)
    values, vectors = values[order], vectors[:, order]
    if check:
        # ARPACK shift-invert loses a little orthonormality on tightly
        # clustered subbands; 1e-8 still flags genuinely broken solves
        _validate_pairs(H, values, vectors, 1e-8, ortho_tol=1e-8)
    return EigenSystem(values=values, vectors=vectors)


@dataclass
class BandSet:
    """Bound-band energies/vectors on the momentum grid (periodic chains)."""

    k_grid: np.ndarray
    energies: np.ndarray        # (n_k, q) ascending per k
    vectors: list               # per k: (block_dim, q) array
    continuum_gap: float
    orbits: object = None


def bound_band(params, delta=None, gap_floor=1.0, orbits=None):
    """The q lowest states of every momentum block, with a continuum-gap guard.

    The bound pair band holds exactly q states per block; the gap to the
    (q+1)-th state is recorded and must exceed `gap_floor` (in units of J),
    otherwise the bound-band picture is not meaningful at these parameters.
    """
    if params.N != 2:
        raise ValidationError("bound band extraction is N=2 only")
    if params.bc != "periodic":
        raise ValidationError("bound_band works on periodic chains; see find_edge_states")
    q = params.beta_q
    if orbits is None:
        orbits = build_orbit_basis(params.L, q)
    p = params if delta is None else replace(params, delta=delta)
    hop = hopping_matrix(orbits.basis, p)
    diag = potential_diagonal(orbits.basis, p)[orbits.rep_rows]
    ks = block_k_points(p.L, q)
    energies = np.empty((len(ks), q))
    vectors = []
    gap = np.inf
    for i, k in enumerate(ks):
        block = reduce_to_block(hop, orbits, k)
        block[np.diag_indices_from(block)] += diag
        if block.shape[0] > DENSE_CAP:
            es = eig_lowest(block, q + 1, sigma=gershgorin_floor(block) - p.J)
        else:
            es = eig_dense(block)
        energies[i] = es.values[:q]
        vectors.append(es.vectors[:, :q])
        gap = min(gap, float(es.values[q] - es.values[q - 1]))
    if gap <= gap_floor * p.J:
        raise BandOverlapError(
            f"continuum gap {gap:.3g} <= floor {gap_floor * p.J:.3g}; "
            "Delta too small for a separated bound band")
    return BandSet(k_grid=ks, energies=energies, vectors=vectors,
                   continuum_gap=gap, orbits=orbits)


def density_profile(vec, basis):
    """Site occupation n_l of a normalized sector state; sums to N."""
    vec = np.asarray(vec)
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > 1e-8:
        raise ValidationError(f"state not normalized (|psi| = {norm:.6g})")
    weights = np.abs(vec) ** 2
    density = np.zeros(basis.L)
    np.add.at(density, (basis.states_array - 1).ravel(),
              np.repeat(weights, basis.N))
    return density


def correlation_matrix(vec, basis):
    """Pair density Gamma[l1, l2] = |psi(l1, l2)|^2, symmetrized, N=2 only."""
    if basis.N != 2:
        raise ValidationError("correlation_matrix is defined for N=2 states")
    vec = np.asarray(vec)
    if abs(np.linalg.norm(vec) - 1.0) > 1e-8:
        raise ValidationError("state not normalized")
    gamma = np.zeros((basis.L, basis.L))
    s = basis.states_array
    gamma[s[:, 0] - 1, s[:, 1] - 1] = np.abs(vec) ** 2
    return gamma + gamma.T


def delta_sweep(params, n_delta=60):
    """Full sector spectra on a uniform modulation-phase grid over [0, 2 pi).

    Periodic commensurate chains go through the momentum blocks; open chains
    are diagonalized in the full sector (subject to the dense cap).
    """
    if n_delta < 1:
        raise ValidationError(f"n_delta must be >= 1, got {n_delta}")
    deltas = 2.0 * np.pi * np.arange(n_delta) / n_delta
    use_blocks = params.bc == "periodic" and params.N == 2 and params.commensurate()
    if use_blocks:
        orbits = build_orbit_basis(params.L, params.beta_q)
        hop = hopping_matrix(orbits.basis, params)
        ks = block_k_points(params.L, params.beta_q)
        hop_blocks = [reduce_to_block(hop, orbits, k) for k in ks]
        out = []
        for d in deltas:
            diag = potential_diagonal(orbits.basis, replace(params, delta=d))[orbits.rep_rows]
            vals = [np.linalg.eigvalsh(hb + np.diag(diag)) for hb in hop_blocks]
            out.append(np.sort(np.concatenate(vals)))
        return deltas, np.array(out)
    basis = build_basis(params.L, params.N)
    if len(basis) > DENSE_CAP:
        raise ValidationError(
            f"full-space sweep refused at dim {len(basis)} > {DENSE_CAP}")
    hop = hopping_matrix(basis, params).toarray()
    out = []
    for d in deltas:
        A = hop + np.diag(potential_diagonal(basis, replace(params, delta=d)))
        out.append(np.linalg.eigvalsh(A))
    return deltas, np.array(out)


def butterfly_lambda(beta_p, beta_q, J, Delta):
    """Amplitude rule that makes the effective modulation strength uniform:
    lam = J^2 / (Delta cos(pi beta)), and 0 at beta = 1/2."""
    if Delta == 0:
        raise ValidationError("Delta must be nonzero for the butterfly amplitude rule")
    if 2 * beta_p == beta_q:
        return 0.0
    return J ** 2 / (Delta * np.cos(np.pi * beta_p / beta_q))


def butterfly_envelope(beta_p, beta_q, J, Delta):
    """Half-width of the Gershgorin envelope of the effective pair model:
    2 J^2/Delta + 2 |lam|, evaluated with the butterfly amplitude rule."""
    lam = butterfly_lambda(beta_p, beta_q, J, Delta)
    return 2.0 * J ** 2 / Delta + 2.0 * abs(lam)


def _reduced_fractions(max_q):
    for q in range(1, max_q + 1):
        for p in range(q + 1):
            if gcd(p, q) == 1 and 2 * p <= q:
                yield p, q


def butterfly(params_template, max_q=12, gap_floor=1.0):
    """Bound-band energies for every reduced modulation fraction with q <= max_q.

    Per fraction the amplitude follows `butterfly_lambda` and the emitted
    energies are shifted by +Delta + 2 J^2/Delta so the band sits around zero.
    Fractions above 1/2 mirror their 1 - beta partner (the amplitude rule
    flips sign under beta -> 1 - beta, which is a pure phase relabeling of
    the same band structure).  Returns a list of (beta_p, beta_q, energies).
    """
    if max_q < 2:
        raise ValidationError(f"max_q must be >= 2, got {max_q}")
    t = params_template
    shift = t.Delta + 2.0 * t.J ** 2 / t.Delta
    n_bound = t.L if t.bc == "periodic" else t.L - 1
    results = {}
    for p, q in _reduced_fractions(max_q):
        lam = butterfly_lambda(p, q, t.J, t.Delta)
        params = replace(t, beta_p=p, beta_q=q, lam=lam, N=2)
        H = build_hamiltonian(params)
        es = eig_lowest(H, n_bound + 1, sigma=gershgorin_floor(H) - params.J)
        gap = float(es.values[n_bound] - es.values[n_bound - 1])
        if gap <= gap_floor * t.J:
            raise BandOverlapError(
                f"bound band not separated at beta={p}/{q} (gap {gap:.3g})")
        results[(p, q)] = es.values[:n_bound] + shift
    rows = []
    for q in range(1, max_q + 1):
        for p in range(q + 1):
            if gcd(p, q) != 1:
                continue
            key = (p, q) if 2 * p <= q else (q - p, q)
            rows.append((p, q, results[key].copy()))
    rows.sort(key=lambda r: r[0] / r[1])
    return rows


@dataclass
class EdgeState:
    energy: float
    side: str           # "left" | "right"
    localization: float  # fraction of density within the edge window


def _periodic_reference_length(L, q):
    for cand in range(L, 3 * q - 1, -1):
        if cand % q == 0 and (cand // q) % 2 == 1:
            return cand
    raise ValidationError(
        f"no periodic reference length (odd multiple of q={q}, >= 3q) below L={L}")


def find_edge_states(params, delta=None, edge_window=5, threshold=0.9,
                     gap_floor=1.0):
    """Edge-localized in-gap bound states of an open chain.

    The L-1 lowest open-chain states are tested against the bulk subband
    ranges of a matching periodic chain (the largest odd multiple of q that
    fits).  A state counts when its energy lies strictly inside a bulk gap
    and at least `threshold` of its density sits within `edge_window` sites
    of one chain end.
    """
    if params.bc != "open":
        raise ValidationError("edge-state search requires open boundaries")
    if params.N != 2:
        raise ValidationError("edge-state search is N=2 only")
    if not (1 <= edge_window < params.L // 2):
        raise ValidationError(f"edge_window must be in 1..L/2, got {edge_window}")
    p = params if delta is None else replace(params, delta=delta)

    L_ref = _periodic_reference_length(p.L, p.beta_q)
    band = bound_band(replace(p, L=L_ref, bc="periodic"), gap_floor=gap_floor)
    lo = band.energies.min(axis=0)
    hi = band.energies.max(axis=0)
    gaps = [(hi[n], lo[n + 1]) for n in range(p.beta_q - 1) if hi[n] < lo[n + 1]]

    basis = build_basis(p.L, 2)
    H = build_hamiltonian(p, basis)
    n_bound = p.L - 1
    if len(basis) <= 1500:
        es = eig_dense(H)
        values, vectors = es.values[:n_bound], es.vectors[:, :n_bound]
    else:
        es = eig_lowest(H, n_bound, sigma=gershgorin_floor(H) - p.J)
        values, vectors = es.values, es.vectors

    found = []
    for i in range(n_bound):
        E = float(values[i])
        if not any(a < E < b for a, b in gaps):
            continue
        density = density_profile(vectors[:, i], basis)
        left = density[:edge_window].sum() / p.N
        right = density[p.L - edge_window:].sum() / p.N
        loc = max(left, right)
        if loc >= threshold:
            found.append(EdgeState(energy=E, side="left" if left >= right else "right",
                                   localization=float(loc)))
    found.sort(key=lambda e: e.energy)
    return found
