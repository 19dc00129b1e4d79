# Copyright (c) The UniGAP Authors. All rights reserved.
import numpy as np
import pytest

from unigap.datasets import normalize_adjacency, synth_sbm
from unigap.diffcore import (Tape, Variable, adam_step, annealed_temperature,
                             backward, check_csr, csr_from_edges, dense_op,
                             densify, dropout, elementwise, gumbel_softmax_st,
                             identity, masked_softmax_cross_entropy, matmul,
                             mul, reduce_sum, relu, row_l2_normalize, spmm,
                             transpose)
from unigap.diffcore.gradcheck import check_grad
from unigap.utils.exceptions import NonFiniteError, ShapeError, TapeError


class TestDenseOps:

    def test_identity_and_zero(self, rng):
        m = rng.standard_normal((2, 2))
        np.testing.assert_array_equal(
            dense_op(np.eye(2), m, 'matmul').data, m)
        np.testing.assert_array_equal(
            dense_op(m, np.zeros((2, 2)), 'add').data, m)

    def test_concat_shapes(self, rng):
        a = rng.standard_normal((3, 2))
        b = rng.standard_normal((3, 4))
        assert dense_op(a, b, 'concat_cols').shape == (3, 6)
        assert dense_op(a, a, 'concat_axis0').shape == (6, 2)

    def test_shape_mismatch_reports_both_shapes(self):
        with pytest.raises(ShapeError) as err:
            dense_op(np.ones((3, 4)), np.ones((3, 2)), 'matmul')
        assert '(3, 4)' in str(err.value) and '(3, 2)' in str(err.value)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            dense_op(np.ones((2, 2)), np.ones((2, 2)), 'kron')

    def test_matmul_gradient(self, rng):
        a = Variable(rng.standard_normal((3, 4)))
        b = Variable(rng.standard_normal((4, 2)))
        assert check_grad(lambda: reduce_sum(matmul(a, b)), [a, b]) < 1e-6

    @pytest.mark.parametrize('kind', ['add', 'hadamard', 'concat_cols'])
    def test_binary_gradients(self, rng, kind):
        a = Variable(rng.standard_normal((3, 2)))
        b = Variable(rng.standard_normal((3, 2)))
        w = rng.standard_normal(dense_op(a, b, kind).shape)
        err = check_grad(lambda: reduce_sum(mul(dense_op(a, b, kind), w)),
                         [a, b])
        assert err < 1e-6


class TestSpmm:

    def test_identity(self, rng):
        x = rng.standard_normal((4, 3))
        np.testing.assert_array_equal(spmm(identity(4), x).data, x)

    def test_two_node_mean(self, two_node_graph):
        s = normalize_adjacency(two_node_graph)
        np.testing.assert_allclose(densify(s), np.full((2, 2), 0.5))
        x = np.array([[1.0, 3.0], [3.0, 5.0]])
        np.testing.assert_allclose(spmm(s, x).data, [[2.0, 4.0], [2.0, 4.0]])

    def test_matches_dense(self):
        g = synth_sbm((3, 2), p_in=0.8, p_out=0.4, feature_dim=3, seed=1)
        s = normalize_adjacency(g)
        rng = np.random.default_rng(2)
        w = rng.standard_normal((5, 3))
        grads = []
        for op in (lambda x: spmm(s, x), lambda x: matmul(densify(s), x)):
            x = Variable(g.features.copy(), requires_grad=True)
            with Tape() as tape:
                loss = reduce_sum(mul(op(x), w))
            backward(tape, loss)
            grads.append(x.grad)
        np.testing.assert_allclose(
            spmm(s, g.features).data, densify(s) @ g.features, atol=1e-12)
        np.testing.assert_allclose(grads[0], grads[1], atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            spmm(identity(3), np.ones((4, 2)))


class TestCsr:

    def test_canonical_form(self):
        mat = csr_from_edges([2, 0, 0, 1], [0, 2, 2, 1], 3)
        check_csr(mat)
        assert mat.nnz == 3
        np.testing.assert_array_equal(mat.data, 1.0)


class TestElementwise:

    def test_relu(self):
        np.testing.assert_array_equal(relu([-1.0, 2.0]).data, [0.0, 2.0])

    def test_dropout_identity_cases(self, rng):
        x = rng.standard_normal((4, 3))
        np.testing.assert_array_equal(dropout(x, 0.0, seed=1).data, x)
        np.testing.assert_array_equal(
            dropout(x, 0.5, seed=1, training=False).data, x)

    def test_dropout_same_seed_same_mask(self):
        x = np.ones((8, 8))
        a = elementwise(x, 'dropout', p=0.5, seed=7).data
        b = elementwise(x, 'dropout', p=0.5, seed=7).data
        np.testing.assert_array_equal(a, b)
        assert set(np.unique(a)) <= {0.0, 2.0}

    @pytest.mark.parametrize('p', [-0.1, 1.0])
    def test_dropout_rejects_p(self, p):
        with pytest.raises(ValueError):
            dropout(np.ones(3), p, seed=0)

    def test_scale(self):
        np.testing.assert_array_equal(
            elementwise([1.0, -2.0], 'scale', c=3.0).data, [3.0, -6.0])


class TestRowL2Normalize:

    def test_values(self):
        np.testing.assert_allclose(
            row_l2_normalize([[3.0, 4.0]]).data, [[0.6, 0.8]])
        np.testing.assert_array_equal(
            row_l2_normalize(np.zeros((1, 3))).data, np.zeros((1, 3)))

    def test_gradient(self, rng):
        x = Variable(rng.standard_normal((4, 3)))
        w = rng.standard_normal((4, 3))
        err = check_grad(lambda: reduce_sum(mul(row_l2_normalize(x), w)), [x])
        assert err < 1e-6


class TestCrossEntropy:

    def test_saturated(self):
        labels = np.array([0, 2, 1])
        logits = 1000.0 * np.eye(3)[labels]
        loss = masked_softmax_cross_entropy(logits, labels, np.ones(3, bool))
        assert loss.item() < 1e-6

    def test_uniform(self):
        loss = masked_softmax_cross_entropy(
            np.zeros((5, 4)), np.zeros(5, int), np.ones(5, bool))
        assert loss.item() == pytest.approx(np.log(4))

    def test_only_masked_rows_count(self):
        logits = np.array([[0.0, 0.0], [1e3, -1e3]])
        labels = np.array([0, 1])
        loss = masked_softmax_cross_entropy(logits, labels, [True, False])
        assert loss.item() == pytest.approx(np.log(2))

    def test_gradient(self, rng):
        logits = Variable(rng.standard_normal((3, 4)))
        labels = np.array([1, 3, 0])
        mask = np.array([True, False, True])
        err = check_grad(
            lambda: masked_softmax_cross_entropy(logits, labels, mask),
            [logits])
        assert err < 1e-5

    def test_empty_mask(self):
        with pytest.raises(ValueError):
            masked_softmax_cross_entropy(
                np.zeros((2, 2)), [0, 1], [False, False])


class TestGumbelSoftmax:

    def test_tie_selects_insert(self):
        hard, soft = gumbel_softmax_st(np.zeros((1, 2)), noise=False)
        np.testing.assert_allclose(soft.data, [[0.5, 0.5]])
        np.testing.assert_array_equal(hard.data, [[0.0, 1.0]])

    def test_saturated_keeps(self):
        hard, _ = gumbel_softmax_st(np.array([[50.0, -50.0]]), noise=False)
        np.testing.assert_array_equal(hard.data, [[1.0, 0.0]])

    def test_rows_are_one_hot(self, rng):
        hard, soft = gumbel_softmax_st(
            rng.standard_normal((50, 2)), temperature=0.7, seed=3)
        assert set(np.unique(hard.data)) <= {0.0, 1.0}
        np.testing.assert_array_equal(hard.data.sum(axis=1), 1.0)
        np.testing.assert_allclose(soft.data.sum(axis=1), 1.0, atol=1e-12)

    def test_monte_carlo_insert_rate(self):
        hard, _ = gumbel_softmax_st(np.zeros((100_000, 2)), seed=0)
        assert abs(hard.data[:, 1].mean() - 0.5) < 0.01

    def test_same_seed_same_draws(self, rng):
        logits = rng.standard_normal((20, 2))
        a, _ = gumbel_softmax_st(logits, seed=11)
        b, _ = gumbel_softmax_st(logits, seed=11)
        np.testing.assert_array_equal(a.data, b.data)

    def test_straight_through_gradient(self, rng):
        w = rng.standard_normal((6, 2))
        init = rng.standard_normal((6, 2))
        grads = []
        for head in (0, 1):
            logits = Variable(init.copy(), requires_grad=True)
            with Tape() as tape:
                out = gumbel_softmax_st(logits, temperature=0.5,
                                        noise=False)[head]
                loss = reduce_sum(mul(out, w))
            backward(tape, loss)
            grads.append(logits.grad)
        np.testing.assert_allclose(grads[0], grads[1], atol=1e-12)

    def test_errors(self):
        with pytest.raises(ValueError):
            gumbel_softmax_st(np.zeros((1, 2)), temperature=0.0)
        with pytest.raises(NonFiniteError):
            gumbel_softmax_st(np.array([[np.nan, 0.0]]))
        with pytest.raises(ShapeError):
            gumbel_softmax_st(np.zeros((2, 3)))

    def test_annealing(self):
        assert annealed_temperature(1.0, None, 5, 10) == 1.0
        assert annealed_temperature(1.0, 0.5, 0, 10) == 1.0
        assert annealed_temperature(1.0, 0.5, 9, 10) == pytest.approx(0.5)


class TestBackward:

    def test_sum_gives_ones(self, rng):
        x = Variable(rng.standard_normal((3, 2)), requires_grad=True)
        with Tape() as tape:
            loss = reduce_sum(x)
        backward(tape, loss)
        np.testing.assert_array_equal(x.grad, np.ones((3, 2)))

    def test_half_square_gives_x(self, rng):
        x = Variable(rng.standard_normal((4, 1)), requires_grad=True)
        with Tape() as tape:
            loss = 0.5 * matmul(transpose(x), x)
        backward(tape, loss)
        np.testing.assert_allclose(x.grad, x.data)

    def test_raw_array_operand_is_constant(self, rng):
        x = Variable(rng.standard_normal((4, 1)), requires_grad=True)
        with Tape() as tape:
            loss = 0.5 * matmul(x.data.T, x)
        backward(tape, loss)
        np.testing.assert_allclose(x.grad, 0.5 * x.data)

    def test_composite_pipeline(self, toy_graph, rng):
        s = normalize_adjacency(toy_graph)
        x = Variable(toy_graph.features.copy())
        w1 = Variable(0.5 * rng.standard_normal((5, 4)))
        w2 = Variable(0.5 * rng.standard_normal((4, 2)))

        def pipeline():
            hidden = relu(matmul(spmm(s, x), w1))
            return masked_softmax_cross_entropy(
                matmul(hidden, w2), toy_graph.labels, toy_graph.masks.train)

        assert check_grad(pipeline, [x, w1, w2]) < 1e-4

    def test_misuse(self, rng):
        x = Variable(rng.standard_normal(3), requires_grad=True)
        with Tape() as tape:
            vec = mul(x, 2.0)
        with pytest.raises(TapeError):
            backward(tape, vec)
        with Tape() as tape:
            loss = reduce_sum(x)
        backward(tape, loss)
        with pytest.raises(TapeError):
            backward(tape, loss)
        with pytest.raises(TapeError):
            with tape:
                pass

    def test_eager_outside_tape(self, rng):
        x = Variable(rng.standard_normal(3), requires_grad=True)
        out = reduce_sum(x)
        assert out.is_leaf

    def test_non_finite_is_an_error(self):
        with pytest.raises(NonFiniteError):
            mul(np.array([np.inf]), 0.0)


class TestAdam:

    def test_zero_gradient_is_noop(self):
        theta = np.array([1.0, -2.0])
        adam_step([theta], [np.zeros(2)], {}, lr=0.1)
        np.testing.assert_array_equal(theta, [1.0, -2.0])

    def test_decoupled_weight_decay(self):
        theta = np.array([1.0])
        adam_step([theta], [np.zeros(1)], {}, lr=0.1, weight_decay=0.5)
        np.testing.assert_allclose(theta, [0.95])

    def test_descends(self):
        theta = np.array([1.0])
        adam_step([theta], [theta.copy()], {}, lr=0.1)
        assert abs(theta[0]) < 1.0

    def test_converges_on_quadratic(self):
        theta = np.array([1.0])
        state = {}
        for _ in range(200):
            adam_step([theta], [theta.copy()], state, lr=0.1)
        assert abs(theta[0]) < 1e-2
        assert state['step'] == 200

    def test_rejects_lr(self):
        with pytest.raises(ValueError):
            adam_step([np.ones(1)], [np.ones(1)], {}, lr=0.0)
