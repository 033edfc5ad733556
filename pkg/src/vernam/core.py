"""Byte-level Vernam cipher.

Enciphering and deciphering are the same operation: each byte of the input
is XORed with the byte of the key at the same position.  Nothing here touches
the file system.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from .errors import EmptyKey, KeyTooShort


class KeyPolicy(enum.Enum):
    """How the key length is checked against the message length.

    STRICT is the one-time pad rule: the key must be at least as long as the
    message.  RELAXED_REPEAT cycles a short key over the message.  That is a
    repeating-key XOR, *not* a one-time pad, and is trivially breakable; it
    exists so that key-reuse faults can be demonstrated.  Never the default.
    """

    STRICT = "strict"
    RELAXED_REPEAT = "relaxed-repeat"


class KeyOrigin(enum.Enum):
    FILE = "file"
    GENERATED = "generated"
    LITERAL = "literal"


@dataclass(frozen=True)
class KeyMaterial:
    """Immutable key bytes plus where they came from."""

    data: bytes
    origin: KeyOrigin = KeyOrigin.LITERAL

    def __post_init__(self):
        if not isinstance(self.data, bytes):
            object.__setattr__(self, "data", bytes(self.data))

    def __len__(self) -> int:
        return len(self.data)

    def __bytes__(self) -> bytes:
        return self.data

    def __repr__(self) -> str:
        return f"KeyMaterial(<{len(self.data)} bytes>, origin={self.origin.value})"


KeyLike = Union[KeyMaterial, bytes, bytearray, memoryview]


def _key_bytes(key: KeyLike) -> bytes:
    if isinstance(key, KeyMaterial):
        return key.data
    return bytes(key)


def validate_key(key: KeyLike | int, message_len: int, policy: KeyPolicy = KeyPolicy.STRICT) -> None:
    """Raise unless ``policy`` admits a key of this length for the message.

    ``key`` may be key material or a bare length, which lets callers check
    file sizes before reading anything.
    """
    key_len = key if isinstance(key, int) else len(key)
    if policy is KeyPolicy.STRICT:
        if key_len < message_len:
            raise KeyTooShort(key_len, message_len)
    elif policy is KeyPolicy.RELAXED_REPEAT:
        if key_len == 0:
            raise EmptyKey("key under the repeating-key policy")
    else:
        raise TypeError(f"not a KeyPolicy: {policy!r}")


def key_stream(key: KeyLike, length: int, policy: KeyPolicy = KeyPolicy.STRICT, offset: int = 0) -> bytes:
    """The ``length`` key bytes that combine with a message, starting at ``offset``.

    Under STRICT this is a plain slice; under RELAXED_REPEAT the key is cycled.
    """
    kb = _key_bytes(key)
    validate_key(len(kb) - offset if policy is KeyPolicy.STRICT else len(kb), length, policy)
    if policy is KeyPolicy.STRICT or len(kb) - offset >= length:
        return kb[offset:offset + length]
    start = offset % len(kb)
    reps = (start + length) // len(kb) + 1
    return (kb * reps)[start:start + length]


def xor_bytes(a: bytes, b: bytes) -> bytes:
    """XOR two equal-length byte strings."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} != {len(b)}")
    n = len(a)
    return (int.from_bytes(a, "big") ^ int.from_bytes(b, "big")).to_bytes(n, "big")


def xor_combine(data: bytes, key: KeyLike, policy: KeyPolicy = KeyPolicy.STRICT) -> bytes:
    """Combine ``data`` with the key stream byte by byte.

    ``output[j] == data[j] ^ key[j % len(key)]``; the modulo only matters
    under RELAXED_REPEAT.  The output always has exactly ``len(data)`` bytes.
    """
    data = bytes(data)
    return xor_bytes(data, key_stream(key, len(data), policy))


def encipher(key: KeyLike, plaintext: bytes, policy: KeyPolicy = KeyPolicy.STRICT) -> bytes:
    return xor_combine(plaintext, key, policy)


def decipher(key: KeyLike, ciphertext: bytes, policy: KeyPolicy = KeyPolicy.STRICT) -> bytes:
    return xor_combine(ciphertext, key, policy)
