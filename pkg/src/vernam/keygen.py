"""Key generation.

Two sources:

* system randomness (``os.urandom``), for pads that are actually used;
* a seeded deterministic generator, for reproducible tests.

The seeded generator is pinned as::

    SHAKE-256(b"vernam-keygen/v1" || seed as 8-byte little-endian).digest(length)

It is a pure function of ``(seed, length)`` and gives identical bytes on every
platform and Python version.  A shorter key is a prefix of a longer key with the
same seed.  If this ever changes, bump the domain tag and regenerate the
frozen vectors in ``tests/test_keygen.py``.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from typing import Optional

from .core import KeyMaterial, KeyOrigin
from .errors import EmptyKey, EntropyUnavailable, IoFailure

SEED_DOMAIN = b"vernam-keygen/v1"
MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class KeySpec:
    """Length plus source; ``seed=None`` means system randomness."""

    length: int
    seed: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.length, bool) or not isinstance(self.length, int):
            raise TypeError("key length must be an integer")
        if self.length < 1:
            raise ValueError(f"key length must be at least 1, got {self.length}")
        if self.seed is not None and not 0 <= self.seed <= MAX_SEED:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")

    @property
    def seeded(self) -> bool:
        return self.seed is not None


def seeded_bytes(seed: int, length: int) -> bytes:
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    return hashlib.shake_256(SEED_DOMAIN + seed.to_bytes(8, "little")).digest(length)


def generate_key(spec: KeySpec) -> KeyMaterial:
    if spec.seeded:
        return KeyMaterial(seeded_bytes(spec.seed, spec.length), KeyOrigin.GENERATED)
    try:
        data = os.urandom(spec.length)
    except (NotImplementedError, OSError) as e:
        raise EntropyUnavailable(f"system entropy source unavailable: {e}") from e
    return KeyMaterial(data, KeyOrigin.GENERATED)


def monobit_fraction(key: KeyMaterial | bytes) -> float:
    """Fraction of 1-bits in the key; about 0.5 for a healthy pad."""
    data = bytes(key)
    if not data:
        raise EmptyKey()
    ones = int.from_bytes(data, "big").bit_count()
    return ones / (8 * len(data))


def write_key(key: KeyMaterial | bytes, path: os.PathLike | str) -> None:
    """Write raw key bytes, no framing; directly usable as a key file."""
    try:
        with open(path, "wb") as f:
            f.write(bytes(key))
    except OSError as e:
        raise IoFailure(path, e.strerror or str(e)) from e


def read_key(path: os.PathLike | str) -> KeyMaterial:
    with open(path, "rb") as f:
        return KeyMaterial(f.read(), KeyOrigin.FILE)
