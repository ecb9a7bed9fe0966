"""Reproducible per-mode random streams.

Every mode of a grid owns an independent counter-based stream, derived from
(seed, mode_index) through SeedSequence spawn keys on top of the Philox
bit generator. Draws are blocked by realization index: realization j of a
random-phase field consumes uniform j of each mode stream, and realization
j of a complex-Gaussian field consumes uniforms (2j, 2j+1). The fixed block
layout means any single mode, any realization row, or any contiguous slice
of an ensemble can be regenerated without drawing the rest, and results do
not depend on how work is partitioned across workers.

Normal deviates use the Box-Muller construction, which maps exactly two
uniforms to one (u, v) pair; its fixed consumption is what makes the block
indexing possible.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi

# uniforms consumed per realization, per mode
BLOCK_PHASE = 1      # one phase draw
BLOCK_NORMAL_PAIR = 2  # Box-Muller pair

_PHILOX_DRAWS_PER_BLOCK = 4  # Philox advance() moves the counter in 4-draw blocks


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    if seed < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    return int(seed)


def mode_stream(seed: int, mode_index: int) -> np.random.Generator:
    """Independent stream for one mode of one seeded experiment."""
    ss = np.random.SeedSequence(check_seed(seed), spawn_key=(int(mode_index),))
    return np.random.Generator(np.random.Philox(ss))


def mode_streams(seed: int, n_modes: int) -> list[np.random.Generator]:
    """Streams for modes 0..n_modes-1 (equivalent to mode_stream per index)."""
    children = np.random.SeedSequence(check_seed(seed)).spawn(n_modes)
    return [np.random.Generator(np.random.Philox(ss)) for ss in children]


def skip_uniforms(gen: np.random.Generator, n: int) -> np.random.Generator:
    """Position a fresh stream as if n uniform doubles had been drawn."""
    if n < 0:
        raise ValueError("cannot skip a negative number of draws")
    blocks, rem = divmod(n, _PHILOX_DRAWS_PER_BLOCK)
    if blocks:
        gen.bit_generator.advance(blocks)
    if rem:
        gen.random(rem)
    return gen


def mode_uniforms(seed: int, mode_index: int, count: int, start: int = 0) -> np.ndarray:
    """Uniform doubles [start, start+count) of one mode stream."""
    gen = mode_stream(seed, mode_index)
    skip_uniforms(gen, start)
    return gen.random(count)


def boxmuller(u1, u2):
    """Map uniform pairs in [0, 1) to independent standard normal pairs.

    u = r cos(2 pi u2), v = r sin(2 pi u2) with r = sqrt(-2 ln(1 - u1)).
    """
    r = np.sqrt(-2.0 * np.log1p(-np.asarray(u1)))
    ang = TWO_PI * np.asarray(u2)
    return r * np.cos(ang), r * np.sin(ang)
