import pytest

from formwdp.display import fmt_dollars, fmt_millions, millions, percent, round_half_away


@pytest.mark.parametrize(
    "value, expected",
    [(0.5, 1), (-0.5, -1), (1.5, 2), (2.5, 3), (-2.5, -3), (2.4999, 2), (0.0, 0)],
)
def test_half_away_from_zero(value, expected):
    assert round_half_away(value) == expected


def test_binary_noise_is_snapped():
    # 0.09 / 0.40 * 100 evaluates just below 22.5
    assert 0.09 / 0.40 * 100 < 22.5
    assert percent(0.09 / 0.40) == 23
    assert percent(0.07 / 0.40) == 18


def test_money_formats():
    assert millions(3_029_250_000.0) == 3029
    assert fmt_millions(2_998_964_750.0) == "$2,999M"
    assert fmt_dollars(-1216.87) == "-$1,217"
    assert round_half_away(25.35, 1) == 25.4


def test_round_half_away_accepts_numpy_scalars():
    import numpy as np

    assert round_half_away(np.float64(0.225) * 100) == 23
    assert percent(np.float64(0.5)) == 50
