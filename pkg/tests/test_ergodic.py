"""
Tests for averaging along exact product sets acting on the torus.

The oracle: averaging cos(2 pi p_0) over the l1 ball of radius n translated
by angles (theta_1, theta_2) from start x depends only on the first
coordinate, and collapses to a weighted cosine sum,

    avg_n = cos(2 pi x_0) * W_n(theta_1) / (2n^2 + 2n + 1),
    W_n(t) = sum_{a=-n..n} (2(n - |a|) + 1) cos(2 pi a t),

because exactly 2(n - |a|) + 1 ball points have first coordinate a.  The
trace must reproduce this to addition-order rounding.
"""

import math

import pytest

from folnerlab.ergodic import (
    GOLDEN_ANGLES,
    TorusAction,
    ergodic_trace,
    observable,
)
from folnerlab.groups import zd_model
from folnerlab.products import product_powers


@pytest.fixture(scope="module")
def ball_sequence():
    return product_powers(zd_model(2), "standard", 80)


@pytest.fixture(scope="module")
def golden_action():
    return TorusAction(GOLDEN_ANGLES)


def _cosine_oracle(n: int, theta: float, x: float) -> float:
    w = sum(
        (2 * (n - abs(a)) + 1) * math.cos(2 * math.pi * a * theta)
        for a in range(-n, n + 1)
    )
    return math.cos(2 * math.pi * x) * w / (2 * n * n + 2 * n + 1)


class TestTorusAction:
    def test_move_wraps(self, golden_action):
        p = golden_action.move((1, -2), (0.9, 0.1))
        assert 0 <= p[0] < 1 and 0 <= p[1] < 1
        assert p[0] == pytest.approx((0.9 + GOLDEN_ANGLES[0]) % 1)
        assert p[1] == pytest.approx((0.1 - 2 * GOLDEN_ANGLES[1]) % 1)

    def test_dimension(self, golden_action):
        assert golden_action.dimension == 2

    def test_arity_mismatch(self, golden_action):
        with pytest.raises(ValueError):
            golden_action.move((1, 2, 3), (0.0, 0.0))
        with pytest.raises(ValueError):
            golden_action.move((1, 2), (0.0,))


class TestObservables:
    def test_known_means(self):
        assert observable("one")[1] == 1.0
        assert observable("cos_x")[1] == 0.0
        assert observable("box")[1] == 1 / 16

    def test_unknown_name(self):
        with pytest.raises(KeyError, match="known"):
            observable("sin_x")

    def test_box_indicator(self):
        f = observable("box")[0]
        assert f((0.1, 0.2)) == 1.0
        assert f((0.3, 0.2)) == 0.0


class TestErgodicTrace:
    def test_matches_cosine_oracle(self, golden_action, ball_sequence):
        trace = ergodic_trace(golden_action, ball_sequence, "cos_x", (0.1, 0.2))
        for n in range(1, 81):
            oracle = _cosine_oracle(n, GOLDEN_ANGLES[0], 0.1)
            assert trace.averages[n] == pytest.approx(oracle, abs=1e-12)

    def test_errors_shrink(self, golden_action, ball_sequence):
        trace = ergodic_trace(golden_action, ball_sequence, "cos_x", (0.1, 0.2))
        assert trace.errors[5] > 1e-3
        assert trace.final_error < 1e-4
        assert trace.envelope(tail=10) < 1e-3

    def test_constant_observable_is_exact(self, golden_action, ball_sequence):
        trace = ergodic_trace(golden_action, ball_sequence, "one", (0.5, 0.5), n_max=10)
        assert set(trace.errors) == {0.0}
        assert trace.final_error == 0.0

    def test_product_observable_converges(self, golden_action, ball_sequence):
        trace = ergodic_trace(golden_action, ball_sequence, "cos_mix", (0.3, 0.7), n_max=60)
        assert trace.space_mean == 0.0
        assert trace.final_error < 1e-4

    def test_box_converges_to_area(self, golden_action, ball_sequence):
        trace = ergodic_trace(golden_action, ball_sequence, "box", (0.0, 0.0), n_max=60)
        assert trace.space_mean == 1 / 16
        assert trace.final_error < 0.01

    def test_rational_angles_miss_the_mean(self, ball_sequence):
        # a period-two rotation keeps the box average near 1/4, not 1/16
        trace = ergodic_trace(
            TorusAction((0.5, 0.5)), ball_sequence, "box", (0.0, 0.0), n_max=40
        )
        assert trace.final_error > 0.1

    def test_steps_and_truncation(self, golden_action, ball_sequence):
        trace = ergodic_trace(golden_action, ball_sequence, "cos_x", (0.1, 0.2), n_max=7)
        assert trace.steps == 7
        assert len(trace.averages) == 8
        assert len(trace.errors) == 8

    def test_n_max_beyond_sequence_raises(self, golden_action, ball_sequence):
        with pytest.raises(ValueError):
            ergodic_trace(golden_action, ball_sequence, "cos_x", (0.1, 0.2), n_max=200)
