import numpy as np
import pytest

from magnonchain import (BZGrid, DegenerateLinkError, GapClosingError,
                         ModelParams, ResolutionError, berry_link,
                         chern_from_vectors, chern_numbers, chern_table,
                         plaquette_field)

from oracles import hofstadter_cherns

TWO_PI = 2.0 * np.pi


def params_for(L, p, q, **kw):
    base = dict(Delta=100.0, lam=0.04, beta_p=p, beta_q=q, L=L, delta=0.7)
    base.update(kw)
    return ModelParams(**base)


def qubit_family(m, n1=24, n2=24):
    """Two-band model d(k).sigma on a torus; lower-band Chern = -deg(d)."""
    k1 = TWO_PI * np.arange(n1) / n1
    k2 = TWO_PI * np.arange(n2) / n2
    d = np.empty((n2, n1, 3))
    vectors = np.empty((n2, n1, 2, 2), dtype=np.complex128)
    for j, ky in enumerate(k2):
        for i, kx in enumerate(k1):
            dv = np.array([np.sin(kx), np.sin(ky), m + np.cos(kx) + np.cos(ky)])
            d[j, i] = dv
            H = (dv[0] * np.array([[0, 1], [1, 0]])
                 + dv[1] * np.array([[0, -1j], [1j, 0]])
                 + dv[2] * np.array([[1, 0], [0, -1]]))
            _, vecs = np.linalg.eigh(H)
            vectors[j, i] = vecs
    grid = BZGrid(k_points=k1, delta_points=k2)
    return grid, vectors, d


def solid_angle_degree(d):
    """Winding number of d: S^1 x S^1 -> S^2 by summed signed solid angles."""

    def tri(a, b, c):
        num = np.dot(a, np.cross(b, c))
        den = (np.linalg.norm(a) * np.linalg.norm(b) * np.linalg.norm(c)
               + np.dot(a, b) * np.linalg.norm(c)
               + np.dot(b, c) * np.linalg.norm(a)
               + np.dot(c, a) * np.linalg.norm(b))
        return 2.0 * np.arctan2(num, den)

    n2, n1, _ = d.shape
    total = 0.0
    for j in range(n2):
        for i in range(n1):
            a = d[j, i]
            b = d[j, (i + 1) % n1]
            c = d[(j + 1) % n2, (i + 1) % n1]
            e = d[(j + 1) % n2, i]
            total += tri(a, b, c) + tri(a, c, e)
    return total / (4.0 * np.pi)


class TestLinks:
    def test_link_is_normalized_overlap_phase(self):
        a = np.array([1.0, 1j]) / np.sqrt(2)
        b = np.array([1.0, 0.0])
        assert abs(abs(berry_link(a, b)) - 1.0) < 1e-15

    def test_orthogonal_raises(self):
        with pytest.raises(DegenerateLinkError):
            berry_link(np.array([1.0, 0.0]), np.array([0.0, 1.0]))

    def test_plaquette_gauge_invariance(self):
        rng = np.random.default_rng(8)
        vs = [v / np.linalg.norm(v) for v in
              (rng.standard_normal((4, 5)) + 1j * rng.standard_normal((4, 5)))]
        f0 = plaquette_field(*vs)
        phased = [v * np.exp(1j * rng.uniform(0, TWO_PI)) for v in vs]
        assert plaquette_field(*phased) == pytest.approx(f0)

    def test_metric_weight_changes_link(self):
        a = np.array([1.0, 1j]) / np.sqrt(2)
        b = np.array([1.0, 1.0]) / np.sqrt(2)
        w = np.array([1.0, -1.0])
        plain = berry_link(a, b)
        weighted = berry_link(a, b, metric=w)
        z = np.vdot(a, w * b)
        assert weighted == pytest.approx(z / abs(z))
        assert not np.isclose(plain, weighted)


class TestEngineOracle:
    @pytest.mark.parametrize("m,expected_deg", [(1.0, -1), (-1.0, 1), (3.0, 0)])
    def test_qubit_model_degree(self, m, expected_deg):
        grid, vectors, d = qubit_family(m)
        deg = solid_angle_degree(d)
        assert deg == pytest.approx(expected_deg, abs=1e-9)
        seam = np.ones(2)  # family is exactly periodic in the k direction
        result = chern_from_vectors(vectors, seam, grid)
        # with this engine's plaquette orientation the lower band carries
        # exactly the degree of the map d
        assert result.cherns[0] == expected_deg
        assert result.cherns[1] == -expected_deg
        assert result.total() == 0

    def test_gauge_invariance_of_cherns(self):
        grid, vectors, _ = qubit_family(1.0, n1=12, n2=12)
        rng = np.random.default_rng(2)
        phases = np.exp(1j * rng.uniform(0, TWO_PI, vectors.shape[:2] + (1, 2)))
        result = chern_from_vectors(vectors * phases, np.ones(2), grid)
        assert result.cherns == (-1, 1)

    def test_unitary_seam_twist_stays_quantized(self):
        # consistent link assignments quantize structurally, whatever the
        # seam; only the zero-sum cross-check can flag a bad family
        grid, vectors, _ = qubit_family(1.0, n1=12, n2=12)
        result = chern_from_vectors(vectors, np.array([1.0, np.exp(0.77j)]),
                                    grid)
        assert result.residuals.max() < 1e-12


class TestSubbandCherns:
    def test_one_third(self):
        p = params_for(21, 1, 3)
        result = chern_numbers(p, n_delta=12)
        assert result.cherns == tuple(hofstadter_cherns(1, 3))
        assert max(result.residuals) < 1e-6

    def test_one_third_other_regime(self):
        # moderate anisotropy, strong modulation: same integers
        p = params_for(21, 1, 3, Delta=10.0, lam=2.0)
        result = chern_numbers(p, n_delta=12)
        assert result.cherns == tuple(hofstadter_cherns(1, 3))

    def test_two_fifths(self):
        p = params_for(25, 2, 5)
        result = chern_numbers(p, n_delta=12)
        assert result.cherns == tuple(hofstadter_cherns(2, 5))

    def test_solver_paths_agree(self):
        p = params_for(15, 1, 3, Delta=10.0, lam=2.0)
        dense = chern_numbers(p, n_delta=12, solver="dense")
        iterative = chern_numbers(p, n_delta=12, solver="lowest")
        assert dense.cherns == iterative.cherns

    def test_flat_field_has_gap_closing(self):
        with pytest.raises(GapClosingError):
            chern_numbers(params_for(15, 1, 3, lam=0.0), n_delta=9)

    def test_zero_sum_guard_flags_unresolved_run(self):
        # small size and weak binding: top subband mixes with the continuum
        # and its integer slips by q, caught by the zero-sum cross-check
        p = params_for(25, 2, 5, Delta=4.0, lam=1.0)
        with pytest.raises(ResolutionError):
            chern_numbers(p, n_delta=12)

    def test_table_shape(self):
        rows = chern_table(params_for(21, 1, 3), q_list=(3,),
                           size_factors=(5, 7), n_delta=12)
        assert len(rows) == 1  # one row per fraction, sizes compared inside
        row = rows[0]
        assert (row["beta_p"], row["beta_q"]) == (1, 3)
        assert row["L"] == 21
        assert row["cherns"] == tuple(hofstadter_cherns(1, 3))
        assert row["converged"]

    def test_table_rejects_even_factor(self):
        with pytest.raises(Exception):
            chern_table(params_for(21, 1, 3), q_list=(3,), size_factors=(4,))
