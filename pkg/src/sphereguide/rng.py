"""Deterministic random streams.

All randomness in a run flows from a single root seed. Each consumer asks
for a named substream so that components stay reproducible in isolation:
the dataset generator, the cloud initializer, the per-ray sampler and the
trainer each get an independent generator that depends only on
(root_seed, name).
"""

import zlib

import numpy as np

__all__ = ["substream", "spawn_state", "save_state", "load_state"]


def _name_key(name: str) -> int:
    # crc32 keeps the key stable across interpreter runs (unlike hash()).
    return zlib.crc32(name.encode("utf-8"))


def substream(root_seed: int, name: str, index: int = 0) -> np.random.Generator:
    """Generator for the named substream of ``root_seed``.

    ``index`` distinguishes repeated draws from the same logical stream,
    e.g. per-iteration or per-ray substreams.
    """
    seq = np.random.SeedSequence([int(root_seed), _name_key(name), int(index)])
    return np.random.Generator(np.random.PCG64(seq))


def spawn_state(root_seed: int, name: str) -> dict:
    """Bit-generator state for a named substream (checkpointable form)."""
    return substream(root_seed, name).bit_generator.state


def save_state(gen: np.random.Generator) -> str:
    """Serialize generator state to a compact string."""
    import json

    return json.dumps(gen.bit_generator.state, sort_keys=True)


def load_state(state: str) -> np.random.Generator:
    """Rebuild a generator from :func:`save_state` output."""
    import json

    gen = np.random.Generator(np.random.PCG64())
    gen.bit_generator.state = json.loads(state)
    return gen
