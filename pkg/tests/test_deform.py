import numpy as np
import pytest

from magnonchain import (ModelParams, ValidationError, alignment_shift,
                         auxiliary_hamiltonian, build_effective,
                         build_hamiltonian, embed_effective, gap_trace)


def params_for(L, p, q, **kw):
    base = dict(Delta=100.0, lam=0.04, beta_p=p, beta_q=q, L=L, delta=0.7)
    base.update(kw)
    return ModelParams(**base)


class TestEmbedding:
    def test_eta_range(self):
        p = params_for(9, 1, 3)
        for bad in (-0.1, 1.1):
            with pytest.raises(ValidationError):
                auxiliary_hamiltonian(p, bad)

    def test_endpoints(self):
        p = params_for(9, 1, 3)
        H0 = auxiliary_hamiltonian(p, 0.0)
        assert abs(H0 - build_hamiltonian(p)).max() == 0.0
        H1 = auxiliary_hamiltonian(p, 1.0)
        assert abs(H1 - embed_effective(p)).max() == 0.0

    def test_embedded_spectrum_is_effective_plus_zeros(self):
        # the embedding acts only on the L adjacent-pair states, so its
        # spectrum is the shifted effective one plus dim - L zeros
        p = params_for(9, 1, 3)
        emb = np.linalg.eigvalsh(embed_effective(p).toarray())
        eff = np.linalg.eigvalsh(build_effective(p)) + alignment_shift(p)
        dim = 9 * 8 // 2
        ref = np.sort(np.concatenate([eff, np.zeros(dim - 9)]))
        assert np.abs(emb - ref).max() < 1e-12

    def test_open_rejected(self):
        p = params_for(9, 1, 3, bc="open")
        with pytest.raises(ValidationError):
            embed_effective(p)


class TestGapTrace:
    def test_trace_shape_and_endpoint_consistency(self):
        p = params_for(15, 1, 3)
        trace = gap_trace(p, n_eta=5, n_delta=8)
        assert trace.eta_grid[0] == 0.0 and trace.eta_grid[-1] == 1.0
        assert trace.gaps.shape == (5, 2)
        assert trace.min_gap == pytest.approx(trace.gaps.min())
        # eta = 1 row must reproduce the pure effective subband gaps
        from magnonchain import block_k_points, effective_bloch
        from dataclasses import replace

        ref = np.full(2, np.inf)
        for j in range(1, 9):
            pd = replace(p, delta=2 * np.pi * j / 8)
            for k in block_k_points(15, 3):
                vals = np.linalg.eigvalsh(effective_bloch(pd, k))
                np.minimum(ref, np.diff(vals), out=ref)
        assert np.abs(trace.gaps[-1] - ref).max() < 1e-10

    def test_gaps_stay_open_at_operating_point(self):
        trace = gap_trace(params_for(15, 1, 3), n_eta=7, n_delta=10)
        assert trace.min_gap > 0.0
        assert np.all(trace.gaps > 0.0)

    def test_eta_validation(self):
        with pytest.raises(ValidationError):
            gap_trace(params_for(15, 1, 3), n_eta=1)
