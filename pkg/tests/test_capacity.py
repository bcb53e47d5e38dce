import math

import numpy as np
import pytest

from qinfo.capacity import (
    ConvergenceError,
    bec,
    bsc,
    channel_capacity,
    channel_mutual_info,
    hsw_capacity_estimate,
    hsw_chi,
    noiseless,
    output_entropy_bound,
    square_root_measurement,
)
from qinfo.entropy import binary_entropy, random_dist
from qinfo.states import (
    KET_0,
    KET_1,
    KET_PLUS,
    depolarizing_channel,
    identity_channel,
    ket,
    outer,
    random_channel,
    random_pure_state,
)


class TestChannelMutualInfo:
    def test_noiseless_uniform(self):
        assert channel_mutual_info([0.25] * 4, noiseless(4)) == pytest.approx(2.0, abs=1e-9)

    def test_useless_bsc(self, rng):
        for _ in range(5):
            px = random_dist(2, rng)
            assert channel_mutual_info(px, bsc(0.5)) == pytest.approx(0.0, abs=1e-9)

    def test_bsc_closed_form(self):
        expected = 1 - binary_entropy(0.11)
        assert channel_mutual_info([0.5, 0.5], bsc(0.11)) == pytest.approx(expected, abs=1e-12)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            channel_mutual_info([0.5, 0.5], noiseless(3))


class TestChannelCapacity:
    def test_identity(self):
        cap, px = channel_capacity(noiseless(2))
        assert cap == pytest.approx(1.0, abs=1e-9)
        assert np.allclose(px, 0.5)

    def test_bsc_011_matches_analytic(self):
        cap, px = channel_capacity(bsc(0.11))
        assert cap == pytest.approx(1 - binary_entropy(0.11), abs=1e-6)
        assert np.allclose(px, 0.5, atol=1e-6)

    def test_bec_family(self):
        for e in (0.0, 0.3, 0.75):
            cap, _ = channel_capacity(bec(e))
            assert cap == pytest.approx(1 - e, abs=1e-6)

    def test_returned_input_achieves_capacity(self, rng):
        for _ in range(10):
            t = np.stack([random_dist(3, rng) for _ in range(3)])
            cap, px = channel_capacity(t, tol=1e-11)
            assert channel_mutual_info(px, t) == pytest.approx(cap, abs=1e-8)

    def test_capacity_beats_random_inputs(self, rng):
        for _ in range(5):
            t = np.stack([random_dist(4, rng) for _ in range(3)])
            cap, _ = channel_capacity(t, tol=1e-11)
            for _ in range(64):
                assert channel_mutual_info(random_dist(3, rng), t) <= cap + 1e-6

    def test_capacity_within_log_bounds(self, rng):
        for _ in range(10):
            nx, ny = int(rng.integers(2, 5)), int(rng.integers(2, 5))
            t = np.stack([random_dist(ny, rng) for _ in range(nx)])
            cap, _ = channel_capacity(t)
            assert -1e-9 <= cap <= math.log2(min(nx, ny)) + 1e-9

    def test_zero_column_support_restriction(self):
        t = np.array([[0.7, 0.3, 0.0], [0.2, 0.8, 0.0]])
        cap, _ = channel_capacity(t)
        assert 0.0 < cap < 1.0

    def test_iteration_cap_raises_with_best(self):
        with pytest.raises(ConvergenceError) as err:
            channel_capacity(bsc(0.11), tol=0.0, max_iter=5)
        assert err.value.capacity_bits == pytest.approx(1 - binary_entropy(0.11), abs=1e-6)


class TestHswChi:
    def test_identity_orthogonal_ensemble(self):
        ens = [(0.5, KET_0), (0.5, KET_1)]
        assert hsw_chi(identity_channel(2), ens) == pytest.approx(1.0, abs=1e-9)

    def test_fully_depolarizing_kills_everything(self, rng):
        ens = [(0.5, random_pure_state(2, rng)), (0.5, random_pure_state(2, rng))]
        assert hsw_chi(depolarizing_channel(1.0), ens) == pytest.approx(0.0, abs=1e-9)

    def test_depolarizing_closed_form(self):
        # outputs of |0>, |1> have eigenvalues (1 - f/2, f/2)
        for f in (0.2, 0.5):
            ens = [(0.5, KET_0), (0.5, KET_1)]
            assert hsw_chi(depolarizing_channel(f), ens) == pytest.approx(
                1 - binary_entropy(f / 2), abs=1e-9)

    def test_bounded_by_output_entropy(self, rng):
        for _ in range(20):
            ch = random_channel(2, 2, rng)
            probs = random_dist(3, rng)
            ens = [(p, random_pure_state(2, rng)) for p in probs]
            chi = hsw_chi(ch, ens)
            assert -1e-9 <= chi <= output_entropy_bound(ch, ens) + 1e-9
            assert chi <= 1.0 + 1e-9


class TestHswEstimate:
    def test_identity_channel(self):
        chi, _ = hsw_capacity_estimate(identity_channel(2), restarts=1, seed=3)
        assert chi >= 0.9999

    def test_fully_depolarizing(self):
        chi, _ = hsw_capacity_estimate(depolarizing_channel(1.0), restarts=1, seed=3)
        assert chi == pytest.approx(0.0, abs=1e-9)

    def test_depolarizing_half(self):
        chi, _ = hsw_capacity_estimate(depolarizing_channel(0.5), restarts=2, seed=3)
        assert chi == pytest.approx(1 - binary_entropy(0.25), abs=1e-3)

    def test_monotone_in_restarts(self):
        ch = depolarizing_channel(0.3)
        a, _ = hsw_capacity_estimate(ch, restarts=1, seed=9)
        b, _ = hsw_capacity_estimate(ch, restarts=3, seed=9)
        assert b >= a - 1e-12

    def test_identity_at_least_classical_capacity(self):
        chi, _ = hsw_capacity_estimate(identity_channel(2), restarts=1, seed=3)
        cap, _ = channel_capacity(noiseless(2))
        assert chi >= cap - 1e-4


class TestSquareRootMeasurement:
    def test_orthogonal_partition_recovers_projectors(self):
        pa = outer(ket(0, 4)) + outer(ket(1, 4))
        pb = outer(ket(2, 4))
        povm = square_root_measurement(pa + pb, [pa, pb])
        assert np.allclose(povm[0], pa)
        assert np.allclose(povm[1], pb)
        assert np.allclose(sum(povm), np.eye(4))

    def test_two_nonorthogonal_signals_beat_naive_guessing(self):
        s1, s2 = outer(KET_0), outer(KET_PLUS)
        povm = square_root_measurement(np.eye(2, dtype=complex), [s1, s2])
        success = 0.5 * np.trace(povm[0] @ s1).real + 0.5 * np.trace(povm[1] @ s2).real
        naive = 1 - 0.5 * abs(np.vdot(KET_0, KET_PLUS)) ** 2
        assert success > naive
        assert success == pytest.approx(0.5 * (1 + 1 / math.sqrt(2)), abs=1e-9)

    def test_positivity_and_completeness_random(self, rng):
        for _ in range(20):
            d = int(rng.integers(2, 5))
            signals = [outer(random_pure_state(d, rng)) for _ in range(3)]
            povm = square_root_measurement(np.eye(d, dtype=complex), signals)
            total = np.zeros((d, d), dtype=complex)
            for e in povm:
                assert np.linalg.eigvalsh(e).min() > -1e-7
                total += e
            assert np.max(np.abs(total - np.eye(d))) < 1e-7
