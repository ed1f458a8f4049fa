"""Counter-based uniforms keyed by (seed, stream, trial, draw).

Each trial owns one Philox-4x64 block: the block counter is the trial index
and the first two output words are draws 0 and 1.  Any contiguous range of
trials can therefore be generated independently and in any order, which is
what makes chunked or threaded runs bit-identical to a serial run.
"""

from __future__ import annotations

import numpy as np

DRAWS_PER_TRIAL = 2
_WORDS_PER_BLOCK = 4
_U64 = 1 << 64


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < _U64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def trial_uniforms(seed: int, start: int, stop: int, stream: int = 0) -> np.ndarray:
    """Uniforms in [0, 1) for trials ``start..stop-1``, shape (stop - start, 2)."""
    seed = _check_seed(seed)
    stream = _check_seed(stream)
    if not 0 <= start <= stop:
        raise ValueError(f"bad trial range [{start}, {stop})")
    count = stop - start
    if count == 0:
        return np.empty((0, DRAWS_PER_TRIAL))
    bitgen = np.random.Philox(key=np.array([seed, stream], dtype=np.uint64),
                              counter=np.array([start, 0, 0, 0], dtype=np.uint64))
    words = bitgen.random_raw(count * _WORDS_PER_BLOCK).reshape(count, _WORDS_PER_BLOCK)
    # top 53 bits -> double in [0, 1)
    return (words[:, :DRAWS_PER_TRIAL] >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def uniform(seed: int, trial: int, draw: int, stream: int = 0) -> float:
    if not 0 <= draw < DRAWS_PER_TRIAL:
        raise IndexError(f"draw index {draw} out of range")
    return float(trial_uniforms(seed, trial, trial + 1, stream)[0, draw])
