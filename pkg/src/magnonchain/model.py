"""Fixed-magnon-number sectors of a harmonically modulated XXZ spin chain.

A magnon is a flipped spin on the all-down vacuum.  With ``N`` magnons on an
``L``-site chain the sector basis is all strictly increasing site tuples
``(l_1 < ... < l_N)``, 1-based.  In that basis the sector Hamiltonian is

* hopping ``-J`` between states that differ by moving one magnon to a free
  neighboring site (wrapping around the ring for periodic boundaries), and
* a diagonal potential: ``-Delta`` per nearest-neighbor magnon pair (the
  ``(1, L)`` pair counts on the ring) plus the on-site modulation
  ``B_l = lam * cos(2 pi (p/q) l + delta)`` summed over occupied sites.

Constant sector offsets (vacuum bond energy, ``-B_l/2`` sums, the uniform
``B0`` term) are dropped; ``B0`` is kept on the parameter record only so a
full configuration round-trips.
"""

from dataclasses import dataclass
from itertools import combinations
from math import gcd, tau as TWO_PI

import numpy as np
import scipy.sparse as sp

from .errors import CommensurabilityError, ValidationError

__all__ = [
    "ModelParams",
    "MagnonBasis",
    "build_basis",
    "potential_energy",
    "potential_diagonal",
    "hopping_matrix",
    "build_hamiltonian",
    "cotranslate",
    "cotranslation_permutation",
    "check_cotranslation_symmetry",
    "map_bose_hubbard",
]


@dataclass(frozen=True)
class ModelParams:
    """Chain, anisotropy, and modulation parameters.

    ``beta_p / beta_q`` is the modulation wavenumber as a reduced fraction;
    keeping it rational makes the on-site field exactly ``beta_q``-periodic,
    which the translation-block machinery relies on.
    """

    Delta: float
    lam: float
    beta_p: int
    beta_q: int
    L: int
    J: float = 1.0
    delta: float = 0.0
    B0: float = 0.0
    N: int = 2
    bc: str = "periodic"

    def __post_init__(self):
        if self.bc not in ("periodic", "open"):
            raise ValidationError(f"bc must be 'periodic' or 'open', got {self.bc!r}")
        if not (self.J > 0):
            raise ValidationError(f"J must be > 0 (band ordering assumes it), got {self.J}")
        for name in ("Delta", "lam", "J", "delta", "B0"):
            if not np.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if self.L < 2:
            raise ValidationError(f"L must be >= 2, got {self.L}")
        if not (1 <= self.N <= self.L):
            raise ValidationError(f"N must be in 1..L, got N={self.N}, L={self.L}")
        if self.beta_q < 1:
            raise ValidationError(f"beta_q must be >= 1, got {self.beta_q}")
        if not (0 <= self.beta_p <= self.beta_q):
            raise ValidationError(
                f"beta_p must be in 0..beta_q, got {self.beta_p}/{self.beta_q}")
        if gcd(self.beta_p, self.beta_q) != 1:
            raise ValidationError(
                f"beta_p/beta_q must be reduced, got {self.beta_p}/{self.beta_q}")

    @property
    def beta(self):
        return self.beta_p / self.beta_q

    @property
    def q(self):
        """Modulation period in sites."""
        return self.beta_q

    def commensurate(self):
        return self.bc == "periodic" and self.L % self.beta_q == 0

    @property
    def s(self):
        """Number of modulation cells on the ring, L/q."""
        if self.L % self.beta_q != 0:
            raise CommensurabilityError(
                f"L={self.L} is not a multiple of the modulation period q={self.beta_q}")
        return self.L // self.beta_q

    def field(self, l):
        """On-site field B_l at (1-based) site l.

        The angle is reduced through ``(p*l) mod q`` so that B is exactly
        q-periodic in l, keeping cotranslation symmetry float-exact.
        """
        return self.lam * np.cos(TWO_PI * ((self.beta_p * l) % self.beta_q) / self.beta_q
                                 + self.delta)

    def field_table(self):
        """B_l for l = 1..L as an array (index l-1)."""
        l = np.arange(1, self.L + 1)
        angles = TWO_PI * ((self.beta_p * l) % self.beta_q) / self.beta_q + self.delta
        return self.lam * np.cos(angles)


class MagnonBasis:
    """Ordered basis of N-magnon configurations on L sites.

    States are strictly increasing tuples in lexicographic order, so the
    index map is a plain dict and ``states_array`` is an (n, N) int array
    for vectorized diagonal work.
    """

    def __init__(self, L, N):
        if L < 2:
            raise ValidationError(f"L must be >= 2, got {L}")
        if not (1 <= N <= L):
            raise ValidationError(f"N must be in 1..L, got N={N}, L={L}")
        self.L = L
        self.N = N
        self.states = list(combinations(range(1, L + 1), N))
        self.index_of = {s: i for i, s in enumerate(self.states)}
        self.states_array = np.array(self.states, dtype=np.int64)

    def index(self, state):
        try:
            return self.index_of[tuple(state)]
        except KeyError:
            raise ValidationError(f"{tuple(state)} is not an N={self.N}, L={self.L} basis state")

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return f"MagnonBasis(L={self.L}, N={self.N}, dim={len(self)})"


def build_basis(L, N):
    """All N-magnon configurations on L sites, lexicographically ordered."""
    return MagnonBasis(L, N)


def potential_energy(state, params):
    """Diagonal energy of one basis state.

    ``-Delta`` per adjacent magnon pair (including the (1, L) ring pair for
    periodic bc) plus the occupied-site field sum.
    """
    state = tuple(state)
    adjacent = sum(1 for a, b in zip(state, state[1:]) if b == a + 1)
    if params.bc == "periodic" and state[0] == 1 and state[-1] == params.L:
        adjacent += 1
    field = sum(params.field(l) for l in state)
    return -params.Delta * adjacent + field


def potential_diagonal(basis, params):
    """Vectorized `potential_energy` over a whole basis."""
    s = basis.states_array
    adjacent = (s[:, 1:] == s[:, :-1] + 1).sum(axis=1)
    if params.bc == "periodic":
        adjacent = adjacent + ((s[:, 0] == 1) & (s[:, -1] == params.L))
    field = params.field_table()[s - 1].sum(axis=1)
    return -params.Delta * adjacent + field


def hopping_matrix(basis, params):
    """Off-diagonal -J hops as a sparse CSR matrix (delta-independent)."""
    L, N = basis.L, basis.N
    periodic = params.bc == "periodic"
    rows, cols = [], []
    for i, state in enumerate(basis.states):
        occupied = set(state)
        for j in range(N):
            for dl in (-1, 1):
                t = state[j] + dl
                if periodic:
                    t = (t - 1) % L + 1
                elif t < 1 or t > L:
                    continue
                if t in occupied:
                    continue  # hard-core: target occupied (or the magnon's own site on a 2-ring)
                new = list(state)
                new[j] = t
                new.sort()
                rows.append(i)
                cols.append(basis.index_of[tuple(new)])
    data = np.full(len(rows), -params.J)
    H = sp.coo_matrix((data, (rows, cols)), shape=(len(basis), len(basis)))
    return H.tocsr()


def build_hamiltonian(params, basis=None):
    """Sector Hamiltonian as a Hermitian sparse CSR matrix.

    Stored in full (both triangles); hopping from `hopping_matrix`, diagonal
    from `potential_diagonal`.
    """
    if basis is None:
        basis = build_basis(params.L, params.N)
    elif basis.L != params.L or basis.N != params.N:
        raise ValidationError("basis does not match params (L, N)")
    H = hopping_matrix(basis, params).tolil()
    H.setdiag(potential_diagonal(basis, params))
    return H.tocsr()


def cotranslate(state, tau, q, L):
    """Shift every magnon by tau*q sites around the L-ring and re-sort."""
    if L % q != 0:
        raise CommensurabilityError(f"L={L} is not a multiple of q={q}")
    shifted = sorted((l - 1 + tau * q) % L + 1 for l in state)
    return tuple(shifted)


def cotranslation_permutation(basis, q):
    """Matrix of the elementary cotranslation T_q(1) on the sector basis.

    Acting on amplitude vectors: (T psi)(s) = psi(s + q), coordinates wrapped.
    """
    n = len(basis)
    cols = np.empty(n, dtype=np.int64)
    for i, state in enumerate(basis.states):
        cols[i] = basis.index_of[cotranslate(state, 1, q, basis.L)]
    data = np.ones(n)
    return sp.coo_matrix((data, (np.arange(n), cols)), shape=(n, n)).tocsr()


def check_cotranslation_symmetry(params, basis=None):
    """Relative max-norm of [T_q(1), H]; zero when the symmetry holds.

    Raises for open boundaries or incommensurate L, where the symmetry is
    absent by construction.
    """
    if params.bc != "periodic":
        raise ValidationError("cotranslation symmetry requires periodic boundaries")
    if params.L % params.beta_q != 0:
        raise CommensurabilityError(
            f"L={params.L} is not a multiple of the modulation period q={params.beta_q}")
    if basis is None:
        basis = build_basis(params.L, params.N)
    H = build_hamiltonian(params, basis)
    T = cotranslation_permutation(basis, params.beta_q)
    comm = T @ H - H @ T
    scale = max(1.0, abs(H).max())
    if comm.nnz == 0:
        return 0.0
    return float(abs(comm).max() / scale)


def map_bose_hubbard(t_up, t_down, U_up_up, U_down_down, U_up_down):
    """Second-order mapping of a two-species Bose-Hubbard chain onto (J, Delta).

    J = 2 t_up t_down / U_up_down,
    Delta = 4 t_up^2 / U_up_up + 4 t_down^2 / U_down_down
            - 2 (t_up^2 + t_down^2) / U_up_down.
    """
    for name, U in (("U_up_up", U_up_up), ("U_down_down", U_down_down),
                    ("U_up_down", U_up_down)):
        if U == 0:
            raise ValidationError(f"{name} must be nonzero")
    J = 2.0 * t_up * t_down / U_up_down
    Delta = (4.0 * t_up ** 2 / U_up_up + 4.0 * t_down ** 2 / U_down_down
             - 2.0 * (t_up ** 2 + t_down ** 2) / U_up_down)
    return J, Delta
