import numpy as np
import pytest
import scipy.sparse as sp

from magnonchain import (BandOverlapError, ConvergenceError, ModelParams,
                         ValidationError, bound_band, build_basis,
                         build_hamiltonian, butterfly, butterfly_envelope,
                         butterfly_lambda, correlation_matrix, delta_sweep,
                         density_profile, eig_dense, eig_lowest,
                         find_edge_states, gershgorin_floor)

from oracles import uniform_bound_energy


def params_for(L, p, q, **kw):
    base = dict(Delta=4.0, lam=1.0, beta_p=p, beta_q=q, L=L, delta=0.4)
    base.update(kw)
    return ModelParams(**base)


class TestSolvers:
    def test_dense_matches_numpy(self):
        rng = np.random.default_rng(0)
        A = rng.standard_normal((40, 40))
        A = A + A.T
        es = eig_dense(A)
        ref = np.linalg.eigvalsh(A)
        assert np.abs(es.values - ref).max() < 1e-12

    def test_dense_cap(self):
        with pytest.raises(ValidationError):
            eig_dense(np.eye(10), max_dim=5)

    def test_lowest_matches_dense(self):
        rng = np.random.default_rng(1)
        A = sp.random(300, 300, density=0.02, random_state=2,
                      format="csr")
        A = A + A.T + sp.diags(np.linspace(0, 10, 300))
        es = eig_lowest(A, 6, sigma=gershgorin_floor(A) - 1.0)
        ref = np.linalg.eigvalsh(A.toarray())[:6]
        assert np.abs(es.values - ref).max() < 1e-9

    def test_lowest_bad_m(self):
        with pytest.raises(ValidationError):
            eig_lowest(sp.eye(10, format="csr"), 11)
        with pytest.raises(ValidationError):
            eig_lowest(sp.eye(10, format="csr"), 0)

    def test_lowest_dense_fallback_near_full(self):
        H = sp.diags(np.arange(10.0)).tocsr()
        es = eig_lowest(H, 10)
        assert np.abs(es.values - np.arange(10.0)).max() < 1e-12

    def test_gershgorin_is_lower_bound(self):
        rng = np.random.default_rng(4)
        A = rng.standard_normal((60, 60))
        A = A + A.T
        assert gershgorin_floor(sp.csr_matrix(A)) <= np.linalg.eigvalsh(A)[0]

    def test_convergence_error_carries_residual(self):
        H = sp.diags(np.arange(100.0)).tocsr()
        with pytest.raises(ConvergenceError):
            eig_lowest(H, 4, maxiter=1, ncv=10)


class TestBoundBand:
    def test_shape_and_order(self):
        p = params_for(15, 1, 3, Delta=8.0)
        band = bound_band(p)
        assert band.energies.shape == (5, 3)
        assert np.all(np.diff(band.energies, axis=1) >= 0)
        assert band.continuum_gap > p.J

    def test_uniform_chain_dispersion(self):
        # lam = 0, q = 1: single bound level per k with the known large-Delta
        # form; tolerance set by the next order in J/Delta
        p = params_for(21, 0, 1, lam=0.0, Delta=30.0)
        band = bound_band(p)
        ref = uniform_bound_energy(band.k_grid, p.J, p.Delta)
        assert np.abs(band.energies[:, 0] - ref).max() < 5 * p.J ** 2 / p.Delta ** 2

    def test_overlap_guard(self):
        with pytest.raises(BandOverlapError):
            bound_band(params_for(15, 1, 3, Delta=1.0))

    def test_open_rejected(self):
        with pytest.raises(ValidationError):
            bound_band(params_for(15, 1, 3, bc="open"))


class TestObservables:
    def test_density_sums_to_two(self):
        p = params_for(15, 1, 3)
        H = build_hamiltonian(p)
        es = eig_dense(H.toarray())
        basis = build_basis(15, 2)
        n = density_profile(es.vectors[:, 0], basis)
        assert n.shape == (15,)
        assert n.sum() == pytest.approx(2.0)
        assert np.all(n >= -1e-15)

    def test_correlation_diagonal_zero_offdiag_density(self):
        p = params_for(9, 1, 3)
        es = eig_dense(build_hamiltonian(p).toarray())
        basis = build_basis(9, 2)
        g = correlation_matrix(es.vectors[:, 0], basis)
        assert g.shape == (9, 9)
        assert np.abs(np.diag(g)).max() == 0.0      # hard-core: no double occupancy
        assert g.sum() == pytest.approx(2.0)        # two magnons total
        assert np.abs(g - g.T).max() < 1e-15

    def test_bound_state_is_pair_localized(self):
        # deep in the attractive regime the lowest state is a nearest
        # neighbor pair: adjacent correlations dominate
        p = params_for(15, 1, 3, Delta=20.0)
        es = eig_dense(build_hamiltonian(p).toarray())
        basis = build_basis(15, 2)
        g = correlation_matrix(es.vectors[:, 0], basis)
        adjacent = sum(g[l, (l + 1) % 15] for l in range(15)) * 2
        assert adjacent > 0.95 * g.sum()


class TestDeltaSweep:
    def test_blocks_and_dense_agree(self):
        p = params_for(9, 1, 3)
        _, by_blocks = delta_sweep(p, n_delta=7)
        p_open = params_for(9, 1, 3, bc="open")
        deltas, dense = delta_sweep(p_open, n_delta=7)
        assert by_blocks.shape == dense.shape == (7, 36)
        # same model, different bc: only a sanity check of shapes above; now
        # check the periodic path against a direct dense diagonalization
        from magnonchain.model import build_hamiltonian as bh
        from dataclasses import replace
        for i, d in enumerate(deltas):
            ref = np.linalg.eigvalsh(bh(replace(p, delta=d)).toarray())
            assert np.abs(by_blocks[i] - ref).max() < 1e-11

    def test_spectrum_periodic_in_delta_over_q(self):
        # shifting the phase by 2 pi / q relabels sites, so the spectrum of a
        # commensurate ring is invariant
        p = params_for(15, 1, 3, delta=0.0)
        _, sweep = delta_sweep(p, n_delta=9)
        for i in range(3):
            assert np.abs(sweep[i] - sweep[i + 3]).max() < 1e-9

    def test_rejects_bad_grid(self):
        with pytest.raises(ValidationError):
            delta_sweep(params_for(9, 1, 3), n_delta=0)


class TestButterfly:
    def test_amplitude_rule(self):
        assert butterfly_lambda(1, 2, 1.0, 4.0) == 0.0
        assert butterfly_lambda(0, 1, 1.0, 4.0) == pytest.approx(0.25)
        assert butterfly_lambda(1, 3, 2.0, 4.0) == pytest.approx(2.0)

    def test_rows_and_mirror_symmetry(self):
        t = params_for(12, 0, 1, bc="open", Delta=8.0)
        rows = butterfly(t, max_q=5)
        fractions = [(p, q) for p, q, _ in rows]
        assert (0, 1) in fractions and (1, 1) in fractions
        assert len(set(fractions)) == len(fractions)
        table = {f: e for p, q, e in rows for f in [(p, q)]}
        for (p, q) in [(1, 3), (1, 4), (2, 5)]:
            assert np.array_equal(table[(p, q)], table[(q - p, q)])

    def test_envelope_contains_band(self):
        t = params_for(12, 0, 1, bc="open", Delta=8.0)
        for p, q, energies in butterfly(t, max_q=5):
            env = butterfly_envelope(p, q, t.J, t.Delta)
            assert np.abs(energies).max() <= env + 1e-12

    def test_row_count(self):
        t = params_for(10, 0, 1, bc="open", Delta=8.0)
        rows = butterfly(t, max_q=4)
        # reduced fractions in [0, 1] with q <= 4: 0,1,1/2,1/3,2/3,1/4,3/4
        assert len(rows) == 7


class TestEdgeStates:
    def test_open_chain_has_edge_modes(self):
        p = params_for(45, 1, 3, Delta=8.0, bc="open", delta=0.0)
        states = find_edge_states(p)
        assert len(states) >= 1
        for st in states:
            assert st.side in ("left", "right")
            assert st.localization >= 0.9

    def test_periodic_rejected(self):
        with pytest.raises(ValidationError):
            find_edge_states(params_for(15, 1, 3))

    def test_uniform_chain_has_none(self):
        p = params_for(27, 0, 1, lam=0.0, Delta=8.0, bc="open")
        assert find_edge_states(p) == []
