import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from qrlbench.baselines.nets import Mlp, mlp_forward, mlp_forward_batch
from qrlbench.baselines.ppo import (
    Trajectory,
    gae,
    log_softmax,
    policy_distribution,
    ppo_update,
    softmax,
    train_ppo,
)
from qrlbench.config import RunConfig


def make_trajectory(rewards, values=None, dones=None, actions=None, log_probs=None):
    T = len(rewards)
    return Trajectory(
        states=np.zeros((T, 2)),
        actions=np.array(actions if actions is not None else [0] * T),
        rewards=np.array(rewards, dtype=float),
        dones=np.array(dones if dones is not None else [False] * T),
        log_probs=np.array(log_probs if log_probs is not None else [np.log(0.25)] * T),
        values=np.array(values if values is not None else [0.0] * T),
    )


class TestSoftmax:
    @given(logits=hnp.arrays(float, 4, elements=st.floats(-30, 30, allow_nan=False)))
    def test_valid_distribution(self, logits):
        probs = softmax(logits)
        assert np.all(probs >= 0)
        assert probs.sum() == pytest.approx(1.0, abs=1e-10)

    @given(
        logits=hnp.arrays(float, 4, elements=st.floats(-20, 20, allow_nan=False)),
        shift=st.floats(-50, 50, allow_nan=False),
    )
    def test_shift_invariance(self, logits, shift):
        np.testing.assert_allclose(softmax(logits + shift), softmax(logits), atol=1e-12)

    def test_log_softmax_consistent(self):
        logits = np.array([0.5, -1.0, 2.0, 0.0])
        np.testing.assert_allclose(log_softmax(logits), np.log(softmax(logits)), atol=1e-12)


class TestGae:
    def test_lambda_zero_is_one_step_td(self):
        traj = make_trajectory([1.0, 2.0, 3.0], values=[0.5, 0.6, 0.7])
        adv, _ = gae(traj, gamma=0.9, lam=0.0)
        expected = np.array(
            [1.0 + 0.9 * 0.6 - 0.5, 2.0 + 0.9 * 0.7 - 0.6, 3.0 + 0.9 * 0.0 - 0.7]
        )
        np.testing.assert_allclose(adv, expected, atol=1e-12)

    def test_lambda_one_gamma_one_zero_values_is_suffix_sum(self):
        rewards = [1.0, -2.0, 4.0, 0.5]
        traj = make_trajectory(rewards)
        adv, returns = gae(traj, gamma=1.0, lam=1.0)
        suffix = np.cumsum(rewards[::-1])[::-1]
        np.testing.assert_allclose(adv, suffix, atol=1e-12)
        np.testing.assert_allclose(returns, suffix, atol=1e-12)

    def test_three_step_closed_form(self):
        rewards = [2.0, -1.0, 0.5]
        values = [0.3, -0.2, 0.8]
        gamma, lam = 0.97, 0.9
        traj = make_trajectory(rewards, values=values)
        adv, returns = gae(traj, gamma=gamma, lam=lam)
        next_values = values[1:] + [0.0]
        deltas = [r + gamma * nv - v for r, nv, v in zip(rewards, next_values, values)]
        for t in range(3):
            direct = sum((gamma * lam) ** k * deltas[t + k] for k in range(3 - t))
            assert adv[t] == pytest.approx(direct, abs=1e-12)
        np.testing.assert_allclose(returns, adv + np.array(values), atol=1e-12)

    def test_done_masks_bootstrap(self):
        traj = make_trajectory([1.0, 5.0], values=[0.4, 0.9], dones=[True, False])
        adv, _ = gae(traj, gamma=0.9, lam=0.8)
        # episode break after step 0: no value flows across it
        assert adv[0] == pytest.approx(1.0 - 0.4)
        assert adv[1] == pytest.approx(5.0 - 0.9)

    def test_requires_finite_values(self):
        with pytest.raises(ValueError):
            make_trajectory([1.0], values=[np.nan])


def tiny_policy_and_value(seed=0, hidden=4):
    rng = np.random.default_rng(seed)
    policy = Mlp.initialize(rng, hidden_dim=hidden, out_dim=4, hidden_activation="tanh")
    value_net = Mlp.initialize(rng, hidden_dim=hidden, out_dim=1, hidden_activation="tanh")
    return policy, value_net


def rollout_states(rng, n):
    return rng.uniform(0, 1, size=(n, 2))


def current_log_probs(policy, states, actions):
    logits = mlp_forward_batch(policy, states)
    return log_softmax(logits)[np.arange(len(actions)), actions]


class TestPpoUpdate:
    def test_zero_advantages_leave_policy(self):
        policy, value_net = tiny_policy_and_value(seed=1)
        rng = np.random.default_rng(2)
        states = rollout_states(rng, 5)
        actions = rng.integers(0, 4, size=5)
        values = mlp_forward_batch(value_net, states)[:, 0]
        # rewards chosen so every delta and advantage is exactly zero
        rewards = values - 0.99 * np.append(values[1:], 0.0)
        traj = Trajectory(
            states=states,
            actions=actions,
            rewards=rewards,
            dones=np.zeros(5, dtype=bool),
            log_probs=current_log_probs(policy, states, actions),
            values=values,
        )
        before = [p.copy() for p in policy.parameters()]
        ppo_update(policy, value_net, [traj], epochs=1, normalize_advantages=False)
        for prev, now in zip(before, policy.parameters()):
            np.testing.assert_allclose(now, prev, atol=1e-12)

    def test_ratio_one_matches_vanilla_policy_gradient(self):
        policy, value_net = tiny_policy_and_value(seed=3)
        rng = np.random.default_rng(4)
        states = rollout_states(rng, 6)
        actions = rng.integers(0, 4, size=6)
        old_log_probs = current_log_probs(policy, states, actions)
        values = np.zeros(6)
        rewards = rng.normal(size=6)
        traj = Trajectory(states, actions, rewards, np.zeros(6, bool), old_log_probs, values)
        advantages, _ = gae(traj, gamma=0.99, lam=0.95)

        # hand-computed vanilla policy-gradient ascent step
        reference = policy.copy()
        logits = mlp_forward_batch(reference, states)
        probs = np.exp(log_softmax(logits))
        one_hot = np.zeros_like(logits)
        one_hot[np.arange(6), actions] = 1.0
        upstream = -(advantages / 6)[:, None] * (one_hot - probs)
        from qrlbench.baselines.nets import mlp_gradient_batch, sgd_step

        sgd_step(reference, mlp_gradient_batch(reference, states, upstream), lr=0.0003)

        ppo_update(policy, value_net, [traj], epochs=1, normalize_advantages=False)
        for got, expected in zip(policy.parameters(), reference.parameters()):
            np.testing.assert_allclose(got, expected, atol=1e-12)

    def test_clipped_sample_contributes_no_policy_gradient(self):
        policy, value_net = tiny_policy_and_value(seed=5)
        rng = np.random.default_rng(6)
        states = rollout_states(rng, 3)
        actions = np.array([1, 2, 0])
        # pretend the behavior policy was half as likely: ratio = 2 > 1.2
        old_log_probs = current_log_probs(policy, states, actions) - np.log(2.0)
        traj = Trajectory(
            states, actions, np.full(3, 1.0), np.zeros(3, bool), old_log_probs, np.zeros(3)
        )
        before = [p.copy() for p in policy.parameters()]
        ppo_update(policy, value_net, [traj], epochs=1, normalize_advantages=False)
        # positive advantages with over-shot ratios: every sample is clipped
        for prev, now in zip(before, policy.parameters()):
            np.testing.assert_allclose(now, prev, atol=1e-12)

    def test_gradient_matches_finite_differences(self):
        # A single-epoch update moves each policy parameter by exactly
        # lr * dJ/dtheta, so (after - before) / lr must match central finite
        # differences of the surrogate objective. Ratios stay strictly inside
        # the clip band, keeping the objective smooth at the test point.
        policy, value_net = tiny_policy_and_value(seed=7, hidden=3)
        probe = policy.copy()
        rng = np.random.default_rng(8)
        n = 5
        states = rollout_states(rng, n)
        actions = rng.integers(0, 4, size=n)
        old_log_probs = current_log_probs(policy, states, actions) + rng.uniform(
            -0.05, 0.05, size=n
        )
        advantages = rng.normal(size=n)
        clip = 0.2

        def objective():
            log_probs = current_log_probs(probe, states, actions)
            ratio = np.exp(log_probs - old_log_probs)
            clipped = np.clip(ratio, 1 - clip, 1 + clip) * advantages
            return float(np.mean(np.minimum(ratio * advantages, clipped)))

        # with gamma = lam = 0 and zero values, the internal advantages and
        # returns both equal the rewards, so feed the advantages as rewards
        traj = Trajectory(
            states, actions, advantages.copy(), np.zeros(n, bool), old_log_probs,
            np.zeros(n),
        )
        before = [p.copy() for p in policy.parameters()]
        lr = 1e-4
        ppo_update(
            policy, value_net, [traj], clip=clip, lr=lr, gamma=0.0, lam=0.0,
            epochs=1, normalize_advantages=False,
        )
        h = 1e-6
        for prev, param, probe_param in zip(
            before, policy.parameters(), probe.parameters()
        ):
            analytic = (param - prev) / lr
            it = np.nditer(prev, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                original = probe_param[idx]
                probe_param[idx] = original + h
                plus = objective()
                probe_param[idx] = original - h
                minus = objective()
                probe_param[idx] = original
                numeric = (plus - minus) / (2 * h)
                assert analytic[idx] == pytest.approx(numeric, abs=1e-5)

    def test_value_net_fits_returns(self):
        policy, value_net = tiny_policy_and_value(seed=9)
        rng = np.random.default_rng(10)
        states = rollout_states(rng, 8)
        actions = rng.integers(0, 4, size=8)
        traj = Trajectory(
            states,
            actions,
            np.full(8, 2.0),
            np.zeros(8, bool),
            current_log_probs(policy, states, actions),
            mlp_forward_batch(value_net, states)[:, 0],
        )
        _, returns = gae(traj)
        before = float(np.mean((mlp_forward_batch(value_net, states)[:, 0] - returns) ** 2))
        for _ in range(50):
            ppo_update(policy, value_net, [traj], lr=0.01)
        after = float(np.mean((mlp_forward_batch(value_net, states)[:, 0] - returns) ** 2))
        assert after < before

    def test_empty_trajectories_rejected(self):
        policy, value_net = tiny_policy_and_value()
        with pytest.raises(ValueError):
            ppo_update(policy, value_net, [])


class TestTrainPpo:
    def test_deterministic_trace(self):
        config = RunConfig(algo="ppo", episodes=4, seed=13, max_steps=40)
        first, _ = train_ppo(config)
        second, _ = train_ppo(config)
        assert first == second

    def test_record_shape(self):
        records, summary = train_ppo(RunConfig(algo="ppo", episodes=2, seed=3, max_steps=25))
        assert len(records) == 2
        assert summary.total_episodes == 2

    def test_policy_distribution_valid(self):
        policy, _ = tiny_policy_and_value(seed=14)
        probs = policy_distribution(policy, np.array([0.3, 0.7]))
        assert probs.shape == (4,)
        assert probs.sum() == pytest.approx(1.0, abs=1e-10)
