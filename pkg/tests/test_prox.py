import numpy as np
import pytest

from inertialfb.errors import DimensionMismatch, EmptyGrid, NotOrthogonal
from inertialfb.operators import HaarConfig, identity_operator, make_haar_operator
from inertialfb.prox import (
    CachedProxOracle,
    ScalarProxSpec,
    brute_force_prox_oracle,
    hard_threshold,
    prox_abs,
    prox_l0,
    prox_neg_abs,
    prox_orthogonal_conjugate,
    prox_separable,
)


class TestScalarProxes:
    def test_prox_abs_examples(self):
        assert prox_abs(0.0, 1.0) == 0.0
        assert prox_abs(3.0, 1.0) == 2.0
        assert prox_abs(0.5, 1.0) == 0.0

    def test_prox_abs_is_odd(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            x = rng.uniform(-10, 10)
            g = rng.uniform(1e-3, 5)
            assert prox_abs(-x, g) == -prox_abs(x, g)

    def test_prox_neg_abs_examples(self):
        assert prox_neg_abs(1.0, 0.5) == 1.5
        assert prox_neg_abs(-2.0, 0.3) == pytest.approx(-2.3)
        assert prox_neg_abs(0.0, 0.7) == 0.7
        assert prox_neg_abs(0.0, 0.7, tie_break="keep_negative") == -0.7

    def test_prox_l0_examples(self):
        assert prox_l0(0.0, 2.0) == 0.0
        assert prox_l0(3.0, 2.0) == 3.0
        assert prox_l0(1.0, 2.0) == 0.0

    def test_prox_l0_tie_break(self):
        t = np.sqrt(2.0)
        thr = t * t
        assert prox_l0(t, thr) == 0.0
        assert prox_l0(t, thr, tie_break="keep_value") == t

    def test_prox_l0_output_is_zero_or_input(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            t = rng.uniform(-10, 10)
            s = rng.uniform(1e-3, 5)
            assert prox_l0(t, s) in (0.0, t)

    def test_invalid_weights(self):
        with pytest.raises(ValueError):
            prox_abs(1.0, 0.0)
        with pytest.raises(ValueError):
            prox_neg_abs(1.0, -1.0)
        with pytest.raises(ValueError):
            prox_l0(1.0, 0.0)


class TestBruteForceOracle:
    def test_zero_penalty_returns_nearest_grid_point(self):
        x = 1.23456789
        u = brute_force_prox_oracle(x, 1.0, lambda v: np.zeros_like(v))
        assert abs(u - x) <= 1e-4

    def test_abs_penalty(self):
        u = brute_force_prox_oracle(3.0, 1.0, np.abs)
        assert abs(u - 2.0) <= 1e-4

    def test_neg_abs_at_zero(self):
        u = brute_force_prox_oracle(0.0, 0.7, lambda v: -np.abs(v))
        assert abs(abs(u) - 0.7) <= 1e-4

    def test_empty_grid(self):
        with pytest.raises(EmptyGrid):
            brute_force_prox_oracle(0.0, 1.0, np.abs, lo=1.0, hi=0.0)

    @pytest.mark.parametrize("kind,f", [("abs", np.abs), ("neg_abs", lambda v: -np.abs(v))])
    def test_closed_forms_match_oracle(self, kind, f):
        oracle = CachedProxOracle(f)
        rng = np.random.default_rng(7)
        for _ in range(200):
            x = rng.uniform(-10, 10)
            g = rng.uniform(1e-3, 5)
            closed = prox_abs(x, g) if kind == "abs" else prox_neg_abs(x, g)
            ref = oracle(x, g)
            if abs(closed - ref) > 1e-4:
                # set-valued case: compare objective values instead
                q = lambda u: (u - x) ** 2 / (2 * g) + f(np.array(u))
                assert abs(q(closed) - q(ref)) <= 1e-8


class TestSeparable:
    def test_toy_pair(self):
        specs = [ScalarProxSpec("abs", 1.0), ScalarProxSpec("neg_abs", 1.0)]
        out = prox_separable(np.array([3.0, 1.0]), specs)
        assert np.allclose(out, [2.0, 2.0])

    def test_zero_vector_all_abs(self):
        specs = [ScalarProxSpec("abs", 0.5)] * 4
        assert np.all(prox_separable(np.zeros(4), specs) == 0.0)

    def test_all_l0_equals_vectorized(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(-3, 3, size=8)
        specs = [ScalarProxSpec("l0", 2.0)] * 8
        assert np.array_equal(prox_separable(x, specs), hard_threshold(x, 2.0))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            prox_separable(np.zeros(3), [ScalarProxSpec("abs", 1.0)])

    def test_default_tie_breaks(self):
        assert ScalarProxSpec("neg_abs", 1.0).tie_break == "keep_positive"
        assert ScalarProxSpec("l0", 1.0).tie_break == "keep_zero"


class TestOrthogonalConjugate:
    def test_identity_transform_reduces_to_inner_prox(self):
        ident = identity_operator((6,))
        x = np.linspace(-2, 2, 6)
        out = prox_orthogonal_conjugate(x, ident, lambda u: hard_threshold(u, 1.0))
        assert np.allclose(out, hard_threshold(x, 1.0))

    def test_identity_inner_prox_returns_input(self):
        config = HaarConfig(16, 16, levels=2)
        w = make_haar_operator(config)
        rng = np.random.default_rng(5)
        x = rng.standard_normal((16, 16))
        out = prox_orthogonal_conjugate(x, w, lambda u: u)
        assert np.allclose(out, x, atol=1e-12)

    def test_constant_image_survives_large_threshold(self):
        config = HaarConfig(16, 16, levels=4)
        w = make_haar_operator(config)
        x = np.full((16, 16), 0.7)
        # threshold far above every detail coefficient but below the single
        # approximation coefficient (16 * 0.7)
        out = prox_orthogonal_conjugate(x, w, lambda u: hard_threshold(u, 100.0))
        assert np.allclose(out, x, atol=1e-12)

    def test_objective_no_worse_than_input_or_zero(self):
        config = HaarConfig(16, 16, levels=4)
        w = make_haar_operator(config)
        from inertialfb.operators import haar_forward

        rng = np.random.default_rng(11)
        lam, gamma = 0.01, 0.5
        for _ in range(20):
            x = rng.standard_normal((16, 16))
            u = prox_orthogonal_conjugate(
                x, w, lambda c: hard_threshold(c, 2 * lam * gamma)
            )
            # evaluate in the coefficient domain (norm is preserved and the
            # candidate coefficients are available without a lossy round trip)
            cx = haar_forward(x, config)

            def objective(c):
                return float(np.sum((c - cx) ** 2)) / (2 * gamma) + lam * np.count_nonzero(c)

            cu = hard_threshold(cx, 2 * lam * gamma)
            assert np.allclose(haar_forward(u, config), cu, atol=1e-12)
            assert objective(cu) <= objective(cx) + 1e-12
            assert objective(cu) <= objective(np.zeros_like(cx)) + 1e-12

    def test_not_orthogonal_raises(self):
        from inertialfb.operators import LinearOperatorHandle

        bad = LinearOperatorHandle((4,), (4,), lambda x: 2.0 * x, lambda y: 2.0 * y)
        with pytest.raises(NotOrthogonal):
            prox_orthogonal_conjugate(np.ones(4), bad, lambda u: u)
