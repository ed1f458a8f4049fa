import numpy as np
import pytest

from proxyclock.rng import trial_uniforms, uniform


def test_range_and_shape():
    u = trial_uniforms(1, 0, 10000)
    assert u.shape == (10000, 2)
    assert (u >= 0).all() and (u < 1).all()


def test_chunks_equal_whole_range():
    whole = trial_uniforms(99, 0, 1000)
    parts = np.concatenate([trial_uniforms(99, lo, min(lo + 137, 1000)) for lo in range(0, 1000, 137)])
    np.testing.assert_array_equal(whole, parts)


def test_single_draw_matches_block():
    block = trial_uniforms(5, 0, 50, stream=3)
    assert uniform(5, 17, 0, stream=3) == block[17, 0]
    assert uniform(5, 17, 1, stream=3) == block[17, 1]


def test_keys_separate_streams():
    a = trial_uniforms(5, 0, 100)
    assert not np.array_equal(a, trial_uniforms(6, 0, 100))
    assert not np.array_equal(a, trial_uniforms(5, 0, 100, stream=1))


def test_repeatable():
    np.testing.assert_array_equal(trial_uniforms(2**64 - 1, 10, 20), trial_uniforms(2**64 - 1, 10, 20))


def test_roughly_uniform():
    u = trial_uniforms(7, 0, 200000)
    assert abs(u.mean() - 0.5) < 0.005
    # draws 0 and 1 of a trial are uncorrelated
    assert abs(np.corrcoef(u[:, 0], u[:, 1])[0, 1]) < 0.01


@pytest.mark.parametrize("seed", [-1, 2**64])
def test_bad_seed(seed):
    with pytest.raises(ValueError):
        trial_uniforms(seed, 0, 1)


def test_bad_draw_index():
    with pytest.raises(IndexError):
        uniform(0, 0, 2)
