import numpy as np
import pytest

from qinfo.bb84 import (
    COMPUTATIONAL,
    HADAMARD_BASIS,
    ChannelModel,
    ProtocolConfig,
    bb84_state,
    eve_holevo_bound,
    eve_information_estimate,
    measure_qubit,
    privacy_lower_bound,
    reconcile_and_amplify,
    run_batch,
    run_bb84,
)
from qinfo.codes import coset_key, encode, steane_css
from qinfo.rng import stream
from qinfo.states import (
    KET_0,
    KET_1,
    KET_MINUS,
    KET_PLUS,
    DensityMatrix,
    apply_channel,
)

from oracles import w_matrix_entropy

STEANE = steane_css()


def config(n=64, delta=1.0, threshold=None, seed=11) -> ProtocolConfig:
    t = round(0.11 * n) if threshold is None else threshold
    return ProtocolConfig(n=n, delta=delta, threshold=t, code=STEANE, master_seed=seed)


class TestSignalStates:
    def test_four_states(self):
        assert np.allclose(bb84_state(0, COMPUTATIONAL), KET_0)
        assert np.allclose(bb84_state(1, COMPUTATIONAL), KET_1)
        assert np.allclose(bb84_state(0, HADAMARD_BASIS), KET_PLUS)
        assert np.allclose(bb84_state(1, HADAMARD_BASIS), KET_MINUS)

    def test_channel_models_are_trace_preserving(self):
        for ch in (ChannelModel("ideal"), ChannelModel("depolarizing", 0.3),
                   ChannelModel("intercept_resend", 0.7)):
            op = ch.operation()     # construction validates the Kraus sum
            rho = DensityMatrix.pure(KET_PLUS)
            assert abs(np.trace(apply_channel(rho, op).mat) - 1) < 1e-9

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            ChannelModel("teleport")


class TestMeasureQubit:
    def test_deterministic_same_basis(self):
        rng = stream(0, "m")
        rho = DensityMatrix.pure(KET_0)
        assert all(measure_qubit(rho, COMPUTATIONAL, rng) == 0 for _ in range(20))

    def test_uniform_cross_basis(self):
        rng = stream(1, "m")
        rho = DensityMatrix.pure(KET_0)
        hits = [measure_qubit(rho, HADAMARD_BASIS, rng) for _ in range(2000)]
        assert abs(np.mean(hits) - 0.5) < 0.05

    def test_depolarized_flip_rate(self):
        f = 0.4
        rng = stream(2, "m")
        rho = apply_channel(DensityMatrix.pure(KET_PLUS), ChannelModel("depolarizing", f).operation())
        hits = [measure_qubit(rho, HADAMARD_BASIS, rng) for _ in range(4000)]
        assert abs(np.mean(hits) - f / 2) < 0.02


class TestReconcile:
    def test_equal_strings(self, rng):
        x = rng.integers(0, 2, 7).astype(np.uint8)
        v = encode(STEANE.c1, rng.integers(0, 2, 4).astype(np.uint8))
        ka, kb, ok, _ = reconcile_and_amplify(STEANE, x, x, v)
        assert ok and np.array_equal(ka, kb)
        assert np.array_equal(ka, coset_key(STEANE, v))

    def test_all_single_bit_discrepancies(self, rng):
        x = rng.integers(0, 2, 7).astype(np.uint8)
        v = encode(STEANE.c1, rng.integers(0, 2, 4).astype(np.uint8))
        for i in range(7):
            e = np.zeros(7, dtype=np.uint8)
            e[i] = 1
            ka, kb, ok, _ = reconcile_and_amplify(STEANE, x, x ^ e, v)
            assert ok and np.array_equal(ka, kb)

    def test_double_discrepancy_not_guaranteed(self, rng):
        x = np.zeros(7, dtype=np.uint8)
        v = encode(STEANE.c1, np.array([1, 0, 1, 0], dtype=np.uint8))
        failures = 0
        for i in range(7):
            for j in range(i + 1, 7):
                e = np.zeros(7, dtype=np.uint8)
                e[[i, j]] = 1
                _, _, ok, _ = reconcile_and_amplify(STEANE, x, x ^ e, v)
                failures += not ok
        assert failures > 0

    def test_offset_announced_not_key(self, rng):
        x = rng.integers(0, 2, 7).astype(np.uint8)
        v = encode(STEANE.c1, rng.integers(0, 2, 4).astype(np.uint8))
        _, _, _, offset = reconcile_and_amplify(STEANE, x, x, v)
        assert np.array_equal(offset, x ^ v)


class TestProtocolRuns:
    def test_ideal_run_agrees(self):
        t = run_bb84(config(), ChannelModel("ideal"))
        assert not t.aborted
        assert t.qber_estimate == 0.0
        assert t.keys_match
        assert t.alice_key.size == (64 // 7) * STEANE.logical_bits

    def test_determinism_bit_exact(self):
        a = run_bb84(config(seed=99), ChannelModel("depolarizing", 0.08))
        b = run_bb84(config(seed=99), ChannelModel("depolarizing", 0.08))
        for field in ("alice_bits", "alice_bases", "bob_bases", "bob_bits",
                      "check_indices", "keep_indices", "announced_offset",
                      "alice_key", "bob_key"):
            assert np.array_equal(getattr(a, field), getattr(b, field))
        assert a.qber_estimate == b.qber_estimate

    def test_different_seeds_differ(self):
        a = run_bb84(config(seed=1), ChannelModel("ideal"))
        b = run_bb84(config(seed=2), ChannelModel("ideal"))
        assert not np.array_equal(a.alice_bits, b.alice_bits)

    def test_sifting_abort(self):
        # delta = 0 leaves the expected sifted count right at 2n, so some
        # seeds must abort; probe a few to find one
        aborted = []
        for seed in range(30):
            t = run_bb84(ProtocolConfig(n=32, delta=0.0, threshold=3,
                                        code=STEANE, master_seed=seed),
                         ChannelModel("ideal"))
            aborted.append(t.aborted)
        assert any(aborted)
        idx = aborted.index(True)
        t = run_bb84(ProtocolConfig(n=32, delta=0.0, threshold=3,
                                    code=STEANE, master_seed=idx),
                     ChannelModel("ideal"))
        assert t.abort_reason.startswith("sifting")
        assert t.alice_key.size == 0

    def test_threshold_abort_keeps_qber(self):
        t = run_bb84(config(threshold=0), ChannelModel("intercept_resend", 1.0))
        assert t.aborted
        assert t.abort_reason.startswith("check-bit")
        assert t.qber_estimate > 0.1

    def test_announced_data_excludes_key_bits(self):
        t = run_bb84(config(), ChannelModel("ideal"))
        assert not set(t.check_indices) & set(t.keep_indices)
        # the announced offset masks the kept bits with a random codeword
        n_blocks = t.alice_key.size
        kept = t.alice_bits[t.keep_indices][:7 * n_blocks]
        assert not np.array_equal(t.announced_offset, kept)

    def test_sift_statistics(self):
        t = run_bb84(config(n=256), ChannelModel("ideal"))
        total = t.alice_bits.size
        sifted = int(t.sift_mask.sum())
        sigma = np.sqrt(total * 0.25)
        assert abs(sifted - total / 2) < 3 * sigma


class TestBatches:
    def test_ideal_batch_always_agrees(self):
        ts = run_batch(config(n=64, seed=5), ChannelModel("ideal"), 100)
        assert sum(t.aborted for t in ts) == 0
        assert all(t.keys_match for t in ts)

    def test_depolarizing_qber_calibration(self):
        # measuring (1-f) rho + f I/2 in the preparation basis flips w.p. f/2
        ts = run_batch(config(n=128, seed=6, threshold=127), ChannelModel("depolarizing", 0.1), 300)
        qber = float(np.mean([t.qber_estimate for t in ts]))
        assert abs(qber - 0.05) < 0.01

    def test_intercept_resend_qber_quarter(self):
        ts = run_batch(config(n=128, seed=7, threshold=127),
                       ChannelModel("intercept_resend", 1.0), 300)
        qber = float(np.mean([t.qber_estimate for t in ts]))
        assert abs(qber - 0.25) < 0.01

    def test_batch_determinism(self):
        a = run_batch(config(seed=8), ChannelModel("ideal"), 5)
        b = run_batch(config(seed=8), ChannelModel("ideal"), 5)
        for x, y in zip(a, b):
            assert np.array_equal(x.alice_key, y.alice_key)
            assert x.config_seed == y.config_seed


class TestEveInformation:
    def test_no_eve_gives_zero(self):
        ts = run_batch(config(seed=13), ChannelModel("ideal"), 20)
        mi, bound = eve_information_estimate(ts)
        assert mi == 0.0
        assert bound == pytest.approx(1.0, abs=1e-9)

    def test_full_intercept_half_bit(self):
        ts = run_batch(config(n=128, seed=14, threshold=127),
                       ChannelModel("intercept_resend", 1.0), 40)
        mi, bound = eve_information_estimate(ts)
        assert abs(mi - 0.5) < 0.02
        assert mi <= bound + 1e-9

    def test_estimate_below_holevo_for_partial_interception(self):
        ts = run_batch(config(n=128, seed=15, threshold=127),
                       ChannelModel("intercept_resend", 0.4), 40)
        mi, bound = eve_information_estimate(ts)
        assert 0.0 < mi <= bound + 1e-9

    def test_holevo_bound_value(self):
        assert eve_holevo_bound() == pytest.approx(1.0, abs=1e-9)


class TestPrivacyBound:
    def test_ideal_channel(self):
        assert privacy_lower_bound(DensityMatrix.maximally_mixed(2),
                                   ChannelModel("ideal")) == pytest.approx(1.0, abs=1e-7)

    def test_fully_depolarizing(self):
        assert privacy_lower_bound(DensityMatrix.maximally_mixed(2),
                                   ChannelModel("depolarizing", 1.0)) == pytest.approx(-1.0, abs=1e-7)

    def test_monotone_in_noise(self):
        rho = DensityMatrix.maximally_mixed(2)
        vals = [privacy_lower_bound(rho, ChannelModel("depolarizing", f))
                for f in (0.0, 0.25, 0.5, 0.75, 1.0)]
        assert all(a >= b - 1e-9 for a, b in zip(vals, vals[1:]))

    def test_against_w_matrix_oracle(self):
        # coherent information recomputed from the oracle entropy exchange
        rho = DensityMatrix.maximally_mixed(2)
        for f in (0.1, 0.4, 0.8):
            op = ChannelModel("depolarizing", f).operation()
            out = apply_channel(rho, op)
            from qinfo.qentropy import von_neumann_entropy
            oracle = von_neumann_entropy(out) - w_matrix_entropy(rho.mat, op.kraus)
            assert privacy_lower_bound(rho, op) == pytest.approx(oracle, abs=1e-7)


class TestBatchTransportAgreesWithSingleQubit:
    def test_born_rule_consistency(self):
        # the vectorised path and the public measure_qubit op draw identical
        # bits from identical streams
        from qinfo.bb84 import _born_p0, STATE_MATRICES
        rng1 = stream(21, "compare")
        rng2 = stream(21, "compare")
        bits = np.array([0, 1, 0, 1, 1, 0], dtype=np.uint8)
        bases = np.array([0, 0, 1, 1, 0, 1], dtype=np.uint8)
        meas = np.array([1, 0, 0, 1, 1, 0], dtype=np.uint8)
        rhos = STATE_MATRICES[bases, bits]
        p0 = _born_p0(rhos, meas)
        batch = (rng1.random(6) >= p0).astype(np.uint8)
        single = np.array([measure_qubit(DensityMatrix(rhos[i]), int(meas[i]), rng2)
                           for i in range(6)], dtype=np.uint8)
        assert np.array_equal(batch, single)
