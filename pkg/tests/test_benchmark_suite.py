import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fibanyon import benchmark_suite as bench
from fibanyon import braid_compiler as bc
from fibanyon import braid_space as bs
from fibanyon import noise_engine as ne
from fibanyon._linalg import dagger, haar_unitary

M_GRID = (1, 2, 4, 8, 16, 32)


@pytest.fixture(scope="module")
def group():
    return bench.CliffordGroup()


def unitary_channel(u):
    return lambda rho: u @ rho @ dagger(u)


def random_kraus_channel(dim, rank, rng):
    """CPTP channel from a Haar-random Stinespring isometry."""
    big = haar_unitary(dim * rank, rng)
    iso = big[:, :dim]  # dim*rank x dim isometry
    kraus = [iso[i * dim:(i + 1) * dim, :] for i in range(rank)]

    def channel(rho):
        return sum(k @ rho @ dagger(k) for k in kraus)

    return channel


class TestQpt:
    def test_identity_channel(self):
        ptm = bench.qpt(lambda rho: rho, 2)
        np.testing.assert_allclose(ptm.matrix, np.eye(4), atol=1e-12)

    def test_ideal_hadamard_mapping(self):
        ptm = bench.qpt(unitary_channel(bc.hadamard_gate()), 2)
        # X -> Z, Y -> -Y, Z -> X
        np.testing.assert_allclose(ptm.matrix[:, 1], [0, 0, 0, 1], atol=1e-12)
        np.testing.assert_allclose(ptm.matrix[:, 2], [0, 0, -1, 0], atol=1e-12)
        np.testing.assert_allclose(ptm.matrix[:, 3], [0, 1, 0, 0], atol=1e-12)

    def test_fully_depolarizing(self):
        ptm = bench.qpt(lambda rho: np.trace(rho) * np.eye(2) / 2, 2)
        expected = np.zeros((4, 4))
        expected[0, 0] = 1.0
        np.testing.assert_allclose(ptm.matrix, expected, atol=1e-12)

    def test_trace_preserving_row(self):
        rng = np.random.Generator(np.random.Philox(key=np.array([3, 3], dtype=np.uint64)))
        channel = random_kraus_channel(4, 3, rng)
        ptm = bench.qpt(channel, 4)
        assert ptm.trace_preserving_defect < 1e-10

    def test_matches_analytic_unitary_ptm(self):
        u = bs.sigma(12)
        ptm = bench.qpt(unitary_channel(u), 4)
        np.testing.assert_allclose(ptm.matrix, bench.ptm_of_unitary(u).matrix, atol=1e-10)

    def test_unitary_channel_orthogonal_on_traceless_sector(self):
        ptm = bench.qpt(unitary_channel(bs.sigma_logical(23)), 2)
        block = ptm.traceless_block()
        np.testing.assert_allclose(block @ block.T, np.eye(3), atol=1e-10)

    def test_nonlinear_channel_detected(self):
        def nonlinear(rho):
            return rho @ rho / max(np.trace(rho @ rho).real, 1e-9)

        with pytest.raises(ValueError, match="not linear"):
            bench.qpt(nonlinear, 2)

    def test_apply_round_trip(self):
        u = bs.sigma_logical(12)
        ptm = bench.qpt(unitary_channel(u), 2)
        rho = np.array([[0.7, 0.2 + 0.1j], [0.2 - 0.1j, 0.3]])
        np.testing.assert_allclose(ptm.apply(rho), u @ rho @ dagger(u), atol=1e-12)


class TestAverageGateFidelity:
    def test_self_fidelity_is_one(self):
        u = bs.sigma_logical(23)
        assert abs(bench.average_gate_fidelity(bench.ptm_of_unitary(u), u) - 1.0) < 1e-12

    def test_depolarizing_closed_form(self):
        ptm = bench.depolarizing_ptm(2, 1.0)
        assert abs(bench.average_gate_fidelity(ptm, bc.hadamard_gate()) - 0.5) < 1e-12

    def test_depolarizing_fidelity_helper(self):
        assert abs(bench.depolarizing_fidelity(2, 0.011) - (1 - 0.011 / 2)) < 1e-15

    def test_monte_carlo_agreement_single_channel(self):
        # a quick sanity version of the acceptance-level cross check
        rng = np.random.Generator(np.random.Philox(key=np.array([11, 4], dtype=np.uint64)))
        channel = random_kraus_channel(2, 2, rng)
        ideal = haar_unitary(2, rng)
        closed = bench.average_gate_fidelity(bench.qpt(channel, 2), ideal)
        n = 2000
        z = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
        states = z / np.linalg.norm(z, axis=1, keepdims=True)
        rotated = np.einsum("ij,nj->ni", ideal, states)
        rho_out = np.stack([channel(np.outer(s, s.conj())) for s in states])
        vals = np.einsum("ni,nij,nj->n", rotated.conj(), rho_out, rotated).real
        assert abs(vals.mean() - closed) < 2e-2


class TestUnitarity:
    def test_identity(self):
        assert abs(bench.unitarity(bench.identity_ptm(2)) - 1.0) < 1e-12

    def test_fully_depolarizing(self):
        assert bench.unitarity(bench.depolarizing_ptm(2, 1.0)) < 1e-12

    def test_dephasing_closed_form(self):
        lam = 0.35
        expected = (1 + 2 * lam**2) / 3
        assert abs(bench.unitarity(bench.dephasing_ptm(lam)) - expected) < 1e-12

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=15, deadline=None)
    def test_unitary_channels_have_unit_unitarity(self, seed):
        rng = np.random.Generator(np.random.Philox(key=np.array([seed, 5], dtype=np.uint64)))
        u = haar_unitary(2, rng)
        assert abs(bench.unitarity(bench.ptm_of_unitary(u)) - 1.0) < 1e-10

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=15, deadline=None)
    def test_cptp_channels_bounded(self, seed):
        rng = np.random.Generator(np.random.Philox(key=np.array([seed, 6], dtype=np.uint64)))
        channel = random_kraus_channel(2, int(rng.integers(1, 5)), rng)
        ptm = bench.qpt(channel, 2)
        u = bench.unitarity(ptm)
        assert -1e-10 <= u <= 1.0 + 1e-10
        # transfer-map entries of physical channels stay within [-1, 1]
        assert np.abs(ptm.matrix).max() <= 1.0 + 1e-10


class TestPurity:
    def test_pure_state(self):
        assert abs(bench.purity_of(np.diag([1.0, 0.0]).astype(complex)) - 1.0) < 1e-12

    @pytest.mark.parametrize("dim", [2, 4])
    def test_maximally_mixed(self, dim):
        assert abs(bench.purity_of(np.eye(dim) / dim)) < 1e-12

    def test_dephased_plus_state_analytic(self):
        t, t2 = 0.05, 0.2
        lam = math.exp(-t / t2)
        rho = np.array([[0.5, 0.5 * lam], [0.5 * lam, 0.5]])
        assert abs(bench.purity_of(rho) - math.exp(-2 * t / t2)) < 1e-12

    def test_accepts_density_matrix_objects(self):
        dm = ne.DensityMatrix.maximally_mixed(2)
        assert abs(bench.purity_of(dm)) < 1e-12


class TestCliffordGroup:
    def test_twenty_four_elements(self, group):
        assert len(group) == 24

    def test_contains_identity(self, group):
        assert group.find(np.eye(2)) == 0

    def test_closed_under_multiplication(self, group):
        for a in group.elements:
            for b in group.elements:
                group.find(a @ b)  # raises if absent

    def test_inverses_in_group(self, group):
        for i in range(len(group)):
            j = group.inverse_index(i)
            prod = group.elements[i] @ group.elements[j]
            assert bc.distance_up_to_phase(prod, np.eye(2)) < 1e-6

    def test_contains_hadamard_and_paulis(self, group):
        for u in (bc.hadamard_gate(), np.array([[0, 1], [1, 0]], dtype=complex)):
            group.find(u)

    def test_ps_extension_preserves_logical_structure(self, group):
        iso = bs.logical_encoding()
        for i in (0, 5, 11):
            ext = group.ps_extension(i, iso)
            assert np.abs(ext @ dagger(ext) - np.eye(4)).max() < 1e-12
            np.testing.assert_allclose(dagger(iso) @ ext @ iso, group.elements[i], atol=1e-12)
            p_l = iso @ dagger(iso)
            assert np.linalg.norm((np.eye(4) - p_l) @ ext @ p_l, 2) < 1e-12

    def test_non_clifford_rejected(self, group):
        with pytest.raises(ValueError):
            group.find(bs.sigma_logical(12))


class TestDecayFit:
    def test_flat_data_gives_unit_rate(self):
        fit = bench.fit_decay([1, 2, 4], [1.0, 1.0, 1.0], [0.0, 0.0, 0.0])
        assert fit.rate == 1.0

    def test_exact_exponential_recovered(self):
        m = np.array([1, 2, 4, 8, 16, 32])
        y = 0.4 + 0.55 * 0.97**m
        fit = bench.fit_decay(m, y, np.zeros_like(y))
        assert abs(fit.rate - 0.97) < 1e-6
        assert abs(fit.a - 0.4) < 1e-5
        assert fit.residual < 1e-8

    def test_pb_model_exponent_offset(self):
        m = np.array([1, 2, 4, 8, 16])
        y = 0.1 + 0.85 * 0.9 ** (m - 1)
        fit = bench.fit_decay(m, y, np.zeros_like(y), model="pb")
        assert abs(fit.rate - 0.9) < 1e-6

    def test_rate_bounded_in_unit_interval(self):
        m = np.array([1, 2, 4, 8])
        y = 0.5 + 0.4 * 0.8**m
        fit = bench.fit_decay(m, y, np.zeros_like(y))
        assert 0.0 < fit.rate <= 1.0

    def test_divergent_fit_reported(self):
        with pytest.raises(bench.FitDivergenceError):
            bench.fit_decay([1, 2, 4], [0.9, float("nan"), 0.5], [0, 0, 0])


class TestRandomizedBenchmarking:
    def test_noiseless_reference(self, group):
        gateset = bench.logical_gateset(group=group)
        fit = bench.rb_reference(gateset, M_GRID, k=5, seed=2)
        assert fit.rate == 1.0
        assert all(abs(m - 1.0) < 1e-9 for m in fit.means)

    def test_depolarizing_rate_recovery(self, group):
        p = 0.02
        gateset = bench.logical_gateset(noise=bench.depolarizing_ptm(2, p), group=group)
        fit = bench.rb_reference(gateset, (1, 2, 4, 8, 16, 32, 50), k=30, seed=42)
        assert abs(fit.rate - (1 - p)) < 1e-3
        f_ref = bench.reference_fidelity_from_rate(fit.rate, 2)
        assert abs(f_ref - bench.depolarizing_fidelity(2, p)) < 1e-3

    def test_interleaved_noiseless_target(self, group):
        noise = bench.depolarizing_ptm(2, 0.015)
        gateset = bench.logical_gateset(noise=noise, group=group)
        target = bench.NoisyGate.ideal(bc.hadamard_gate())
        res = bench.rb_interleaved(target, gateset, M_GRID, k=20, seed=9)
        assert abs(res.f_rb - 1.0) < 2e-3

    def test_all_noiseless(self, group):
        gateset = bench.logical_gateset(group=group)
        target = bench.NoisyGate.ideal(bc.hadamard_gate())
        res = bench.rb_interleaved(target, gateset, M_GRID, k=5, seed=3)
        assert res.fit.rate == 1.0
        assert res.reference.rate == 1.0
        assert abs(res.f_rb - 1.0) < 1e-9

    def test_target_fidelity_recovery_within_half_percent(self, group):
        # braided Hadamard under dephasing, simulated in the physical space
        # where the noise channel is trace preserving
        noise_model = ne.NoiseModel(t2=(0.9, 0.9))
        word = bc.hadamard_word()
        target = bench.NoisyGate(
            bc.evaluate(word, "physical4"),
            bench.qpt(ne.word_channel(word, noise_model), 4),
        )
        clifford_channel = lambda rho: ne.apply_dephasing(
            ne.DensityMatrix(rho), noise_model.rates(), ne.CLIFFORD_SECONDS
        ).matrix
        gateset = bench.physical_gateset(noise=bench.qpt(clifford_channel, 4), group=group)
        res = bench.rb_interleaved(target, gateset, M_GRID, k=30, seed=17)
        oracle = bench.average_gate_fidelity(target.ptm, target.unitary)
        assert abs(res.f_rb - oracle) < 5e-3

    def test_reference_fidelity_context_target(self, group):
        # dephasing calibrated so each Clifford sits near 99.44% fidelity
        lam = 3 * 0.9944 - 2
        gateset = bench.logical_gateset(noise=bench.dephasing_ptm(lam), group=group)
        fit = bench.rb_reference(gateset, M_GRID, k=30, seed=5)
        true_f = bench.average_gate_fidelity(bench.dephasing_ptm(lam), np.eye(2))
        estimate = bench.reference_fidelity_from_rate(fit.rate, 2)
        assert abs(estimate - true_f) < 2e-3
        assert abs(true_f - 0.9944) < 1e-6

    def test_spam_insensitivity(self, group):
        noise = bench.depolarizing_ptm(2, 0.011)
        spam = bench.depolarizing_ptm(2, 0.25)
        plain = bench.rb_reference(bench.logical_gateset(noise=noise, group=group), M_GRID, 30, 4)
        spammed = bench.rb_reference(
            bench.logical_gateset(noise=noise, group=group, spam_ptm=spam), M_GRID, 30, 4
        )
        assert abs(plain.rate - spammed.rate) < 1e-6
        assert spammed.means[0] < plain.means[0] - 0.1  # raw survival shifted

    def test_physical_space_reference(self, group):
        gateset = bench.physical_gateset(noise=bench.depolarizing_ptm(4, 0.01), group=group)
        fit = bench.rb_reference(gateset, (1, 2, 4, 8, 16), k=10, seed=6)
        assert abs(fit.rate - 0.99) < 2e-3


class TestPurityBenchmarking:
    def test_noiseless_purity_flat(self, group):
        gateset = bench.logical_gateset(group=group)
        res = bench.pb_run(gateset, None, M_GRID, k=5, seed=8)
        assert res.fit.rate == 1.0
        assert all(abs(m - 1.0) < 1e-9 for m in res.fit.means)

    def test_over_rotation_preserves_purity(self, group):
        over = bench.ptm_of_unitary(ne.over_rotation_unitary("z", 0.12))
        gateset = bench.logical_gateset(noise=over, group=group)
        res = bench.pb_run(gateset, None, M_GRID, k=20, seed=10)
        assert abs(res.fit.rate - 1.0) < 1e-9
        assert res.incoherent_per_gate < 1e-9

    def test_dephasing_unitarity_recovery(self, group):
        lam = 0.98
        gateset = bench.logical_gateset(noise=bench.dephasing_ptm(lam), group=group)
        res = bench.pb_run(gateset, None, M_GRID, k=30, seed=12)
        assert abs(res.fit.rate - (1 + 2 * lam**2) / 3) < 2e-3


class TestErrorBudget:
    def _budget(self, group, noise, target_noise, seed=13):
        gateset = bench.logical_gateset(noise=noise, group=group)
        target = bench.NoisyGate.with_noise(bc.hadamard_gate(), target_noise)
        rb_ref = bench.rb_reference(gateset, M_GRID, 30, seed)
        rb_int = bench.rb_interleaved(target, gateset, M_GRID, 30, seed, rb_ref)
        pb_ref = bench.pb_run(gateset, None, M_GRID, 30, seed + 1)
        pb_int = bench.pb_run(gateset, target, M_GRID, 30, seed + 1)
        return bench.error_budget(rb_int, pb_ref, pb_int, dim=2)

    def test_dephasing_target_mostly_incoherent(self, group):
        lam = 0.985
        budget = self._budget(group, bench.dephasing_ptm(lam), bench.dephasing_ptm(lam))
        assert abs(budget.coherent) < 3e-3
        assert budget.incoherent > 0.5 * budget.total_infidelity

    def test_over_rotation_target_mostly_coherent(self, group):
        # coherent error on the target only: noiseless Cliffords keep the
        # reference decay flat and the RB estimate well behaved
        over = bench.ptm_of_unitary(ne.over_rotation_unitary("z", 0.1))
        budget = self._budget(group, bench.identity_ptm(2), over)
        assert abs(budget.incoherent) < 3e-3
        assert budget.total_infidelity > 1e-4
        assert budget.coherent > 0.5 * budget.total_infidelity

    def test_strong_coherent_noise_on_all_gates_is_flagged(self, group):
        # interleaving can cancel compounding coherent errors; the estimator
        # reports the pathology instead of a silent negative infidelity
        over = bench.ptm_of_unitary(ne.over_rotation_unitary("z", 0.1))
        budget = self._budget(group, over, over)
        assert abs(budget.incoherent) < 3e-3
        if budget.total_infidelity < 0:
            assert budget.warnings

    def test_noiseless_budget_is_zero(self, group):
        budget = self._budget(group, bench.identity_ptm(2), bench.identity_ptm(2))
        assert abs(budget.total_infidelity) < 1e-9
        assert abs(budget.incoherent) < 1e-9
        assert abs(budget.coherent) < 1e-9


class TestSpaceConsistency:
    def test_projected_fidelity_matches_direct(self, group):
        # leakage-free PS channel: encoded Clifford conjugation
        iso = bs.logical_encoding()
        u_ps = group.ps_extension(7, iso)
        ptm_ps = bench.qpt(unitary_channel(u_ps), 4)
        ptm_ls = bench.project_to_logical(ptm_ps, iso)
        direct = bench.ptm_of_unitary(group.elements[7])
        np.testing.assert_allclose(ptm_ls.matrix, direct.matrix, atol=1e-10)
        f_proj = bench.average_gate_fidelity(ptm_ls, group.elements[7])
        f_direct = bench.average_gate_fidelity(direct, group.elements[7])
        assert abs(f_proj - f_direct) < 1e-10

    def test_projection_requires_ps_map(self):
        with pytest.raises(ValueError):
            bench.project_to_logical(bench.identity_ptm(2))

    def test_projected_fidelity_matches_direct_for_mixed_unitary_channel(self, group):
        # leakage-free but non-unitary: a probabilistic mixture of two
        # encoded Cliffords
        iso = bs.logical_encoding()
        u1, u2 = group.ps_extension(3, iso), group.ps_extension(9, iso)

        def channel_ps(rho):
            return 0.7 * u1 @ rho @ dagger(u1) + 0.3 * u2 @ rho @ dagger(u2)

        def channel_ls(rho):
            a, b = group.elements[3], group.elements[9]
            return 0.7 * a @ rho @ dagger(a) + 0.3 * b @ rho @ dagger(b)

        projected = bench.project_to_logical(bench.qpt(channel_ps, 4), iso)
        direct = bench.qpt(channel_ls, 2)
        np.testing.assert_allclose(projected.matrix, direct.matrix, atol=1e-10)
        ideal = group.elements[3]
        assert abs(
            bench.average_gate_fidelity(projected, ideal)
            - bench.average_gate_fidelity(direct, ideal)
        ) < 1e-10


def test_rng_streams_deterministic_and_independent():
    a1 = bench.rng_for(99, 0).integers(0, 1000, size=5)
    a2 = bench.rng_for(99, 0).integers(0, 1000, size=5)
    b = bench.rng_for(99, 1).integers(0, 1000, size=5)
    np.testing.assert_array_equal(a1, a2)
    assert not np.array_equal(a1, b)
