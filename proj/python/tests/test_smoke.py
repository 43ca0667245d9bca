import numpy as np
import pytest

import esample


def test_size_law():
    assert esample.sample_size_for_epsilon(0.1) == 38
    assert esample.sample_size_for_epsilon(0.01) == 1285


def test_generate_is_deterministic():
    a = esample.generate("uniform", 500, seed=3)
    assert a.shape == (500, 2)
    assert np.array_equal(a, esample.generate("uniform", 500, seed=3))


@pytest.mark.parametrize("method", esample.METHODS)
def test_sample_weights_sum_to_one(method):
    pts = esample.generate("clusters", 2000, seed=1)
    s = esample.epsilon_sample(pts, 40, method=method, seed=2)
    assert s["points"].shape == (s["k_effective"], 2)
    assert s["weights"].sum() == pytest.approx(1.0)
    assert (s["weights"] > 0).all()


def test_error_of_full_sample_is_zero():
    pts = esample.generate("uniform", 300, seed=4)
    w = np.full(len(pts), 1.0 / len(pts))
    assert esample.exact_error(pts, pts, w) < 1e-12
    s = esample.epsilon_sample(pts, 30, method="ham", seed=5)
    exact = esample.exact_error(pts, s["points"], s["weights"])
    assert 0.0 < exact <= 1.0
    assert esample.approx_error(pts, s["points"], s["weights"], budget=50) <= exact + 1e-15


def test_partition_covers_points():
    pts = esample.generate("uniform", 1000, seed=6)
    cells = esample.partition(pts, "chan", 16, seed=1)
    flat = sorted(i for c in cells for i in c)
    assert flat == list(range(1000))
    assert max(len(c) for c in cells) <= 2 * 1000 // 16


def test_cutting_respects_threshold():
    c = esample.cutting(100, 4, cell="trapezoid", seed=2)
    assert c["max_crossing_weight"] <= c["threshold"]


def test_errors_carry_codes():
    pts = esample.generate("uniform", 10, seed=1)
    with pytest.raises(esample.EsampleError) as info:
        esample.epsilon_sample(pts, 50)
    assert info.value.code == "InvalidK"
    with pytest.raises(ValueError):
        esample.epsilon_sample(np.zeros((4, 3)), 2)
