"""Round-trip checking, fault injection and kill matrices.

The only property checked is the round trip ``decipher(k, encipher(k, m)) == m``.
A *mutant* is the cipher with one deliberate behavioural fault; a corpus of
(message, key) pairs *kills* the mutant when some pair breaks the round trip.

Catalog (all faults are injected at the cipher seam, no source is edited):

=====================  =========================================================
M1_DecipherOr          decipher combines with OR instead of XOR
M2_DecipherAnd         decipher combines with AND instead of XOR
M3_KeyStreamOffByOne   decipher reads key byte j+1 for message byte j
M4_KeyReuseHalf        decipher cycles only the first ceil(|k|/2) key bytes
M5_DropLastByte        decipher emits one byte fewer than it was given
M6_EncipherOr          encipher combines with OR instead of XOR
=====================  =========================================================

M1 survives exactly those pairs where every 1-bit of the key is also a 1-bit
of the message (``k & ~m == 0`` bytewise), so random corpora are not trusted
to kill it; every generated corpus starts with two fixed adversarial vectors.

M4 is decipher-side only.  Applied to both directions it would be an
equivalent mutant: XOR with any key stream, used twice, round-trips.
"""

from __future__ import annotations

import enum
import math
import random
import re
from collections.abc import Sequence
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Optional, Union

from . import core
from .core import KeyLike, KeyMaterial, KeyOrigin, KeyPolicy, key_stream
from .errors import BrokenBaseline, UnknownMutant

Transform = Callable[[KeyLike, bytes, KeyPolicy], bytes]


@dataclass(frozen=True)
class CipherBehavior:
    """A pluggable symmetric cipher: any pair of length-preserving transforms."""

    name: str
    encipher: Transform
    decipher: Transform


VERNAM = CipherBehavior("vernam", core.encipher, core.decipher)


class MutantId(str, enum.Enum):
    M1_DecipherOr = "M1_DecipherOr"
    M2_DecipherAnd = "M2_DecipherAnd"
    M3_KeyStreamOffByOne = "M3_KeyStreamOffByOne"
    M4_KeyReuseHalf = "M4_KeyReuseHalf"
    M5_DropLastByte = "M5_DropLastByte"
    M6_EncipherOr = "M6_EncipherOr"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, name: Union[str, "MutantId"]) -> "MutantId":
        """Accept a MutantId, its full name, or the short form ``M1``..``M6``."""
        if isinstance(name, cls):
            return name
        if isinstance(name, str):
            text = name.strip()
            for m in cls:
                if text.lower() in (m.value.lower(), m.value.split("_")[0].lower()):
                    return m
        raise UnknownMutant(name)


ALL_MUTANTS: tuple[MutantId, ...] = tuple(MutantId)


def _bitwise(op: Callable[[int, int], int]) -> Transform:
    def combine(key: KeyLike, data: bytes, policy: KeyPolicy = KeyPolicy.STRICT) -> bytes:
        data = bytes(data)
        ks = key_stream(key, len(data), policy)
        n = len(data)
        return op(int.from_bytes(ks, "big"), int.from_bytes(data, "big")).to_bytes(n, "big")

    return combine


_or_combine = _bitwise(lambda k, m: k | m)
_and_combine = _bitwise(lambda k, m: k & m)


def _shift_key(inner: Transform) -> Transform:
    def shifted(key: KeyLike, data: bytes, policy: KeyPolicy = KeyPolicy.STRICT) -> bytes:
        # One extra key byte is consumed, so a STRICT key needs |m| + 1 bytes.
        ks = key_stream(key, len(data) + 1, policy)[1:]
        return inner(ks, data, policy)

    return shifted


def _reuse_half_key(inner: Transform) -> Transform:
    def reused(key: KeyLike, data: bytes, policy: KeyPolicy = KeyPolicy.STRICT) -> bytes:
        kb = bytes(key)
        if kb:
            half = kb[: math.ceil(len(kb) / 2)]
            kb = key_stream(half, len(kb), KeyPolicy.RELAXED_REPEAT)
        return inner(kb, data, policy)

    return reused


def _drop_last(inner: Transform) -> Transform:
    def truncated(key: KeyLike, data: bytes, policy: KeyPolicy = KeyPolicy.STRICT) -> bytes:
        return inner(key, data, policy)[:-1]

    return truncated


def apply_mutant(base: CipherBehavior, mutant: Union[MutantId, str]) -> CipherBehavior:
    """Return ``base`` with one fault injected.

    M3, M4 and M5 wrap ``base``'s own transforms.  M1, M2 and M6 swap the
    combining operator, so the result is a faulted Vernam whatever ``base`` is.
    """
    mutant = MutantId.parse(mutant)
    name = f"{base.name}+{mutant.value}"
    if mutant is MutantId.M1_DecipherOr:
        return replace(base, name=name, decipher=_or_combine)
    if mutant is MutantId.M2_DecipherAnd:
        return replace(base, name=name, decipher=_and_combine)
    if mutant is MutantId.M3_KeyStreamOffByOne:
        return replace(base, name=name, decipher=_shift_key(base.decipher))
    if mutant is MutantId.M4_KeyReuseHalf:
        return replace(base, name=name, decipher=_reuse_half_key(base.decipher))
    if mutant is MutantId.M5_DropLastByte:
        return replace(base, name=name, decipher=_drop_last(base.decipher))
    if mutant is MutantId.M6_EncipherOr:
        return replace(base, name=name, encipher=_or_combine)
    raise UnknownMutant(mutant)  # pragma: no cover


@dataclass(frozen=True)
class RoundTripResult:
    passed: bool
    first_diff_offset: Optional[int] = None
    # True when the recovered message had the wrong length; the offset is
    # then the length of the common prefix.
    length_mismatch: bool = False

    def __bool__(self) -> bool:
        return self.passed


def first_difference(a: bytes, b: bytes) -> Optional[int]:
    """Smallest index where ``a`` and ``b`` differ, counting a missing byte as a difference."""
    if a == b:
        return None
    for j, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return j
    return min(len(a), len(b))


def roundtrip_holds(
    behavior: CipherBehavior,
    msg: bytes,
    key: KeyLike,
    policy: KeyPolicy = KeyPolicy.STRICT,
) -> RoundTripResult:
    msg = bytes(msg)
    recovered = behavior.decipher(key, behavior.encipher(key, msg, policy), policy)
    if recovered == msg:
        return RoundTripResult(True)
    return RoundTripResult(
        False,
        first_difference(msg, recovered),
        length_mismatch=len(recovered) != len(msg),
    )


FIXED_VECTORS: tuple[tuple[bytes, bytes], ...] = (
    (b"\x00" * 16, b"\xff" * 17),  # k & ~m is all ones: kills M1
    (b"\xff" * 16, b"\x55" * 17),  # k & (k ^ m) == 0 != m: kills M2 and M6
)

# Keys get |m| + 1 + randint(0, KEY_SLACK) bytes.
KEY_SLACK = 8


@dataclass(frozen=True)
class Corpus(Sequence):
    """(message, key) pairs plus the seed that produced them, if any."""

    pairs: tuple[tuple[bytes, KeyMaterial], ...]
    seed: Optional[int] = None

    def __getitem__(self, i):
        return self.pairs[i]

    def __len__(self) -> int:
        return len(self.pairs)


def generate_corpus(seed: int, n: int, max_len: int = 256) -> Corpus:
    """Fixed vectors followed by ``n`` pseudo-random pairs.

    Deterministic in ``(seed, n, max_len)``.  Message lengths are uniform on
    ``[0, max_len]`` and every key has at least one byte more than its
    message, so the off-by-one key mutant can run.
    """
    if n < 1:
        raise ValueError(f"corpus needs at least one random pair, got n={n}")
    if max_len < 0:
        raise ValueError(f"max_len must be non-negative, got {max_len}")
    rng = random.Random(seed)
    pairs = [(m, KeyMaterial(k, KeyOrigin.LITERAL)) for m, k in FIXED_VECTORS]
    for _ in range(n):
        msg_len = rng.randint(0, max_len)
        key_len = msg_len + 1 + rng.randint(0, KEY_SLACK)
        msg = rng.randbytes(msg_len)
        key = rng.randbytes(key_len)
        pairs.append((msg, KeyMaterial(key, KeyOrigin.GENERATED)))
    return Corpus(tuple(pairs), seed)


@dataclass(frozen=True)
class Witness:
    msg: bytes
    key: KeyMaterial
    offset: Optional[int]
    length_mismatch: bool = False


@dataclass(frozen=True)
class KillEntry:
    mutant: MutantId
    witness: Optional[Witness] = None

    @property
    def killed(self) -> bool:
        return self.witness is not None

    def report_line(self) -> str:
        if self.witness is None:
            return f"MUTANT {self.mutant.value} SURVIVED"
        w = self.witness
        return (
            f"MUTANT {self.mutant.value} KILLED witness "
            f"msg_len={len(w.msg)} key_len={len(w.key)} offset={w.offset}"
        )


@dataclass(frozen=True)
class KillMatrix:
    entries: tuple[KillEntry, ...]
    corpus_seed: Optional[int]
    corpus_size: int

    @property
    def all_killed(self) -> bool:
        return all(e.killed for e in self.entries)

    @property
    def survivors(self) -> list[MutantId]:
        return [e.mutant for e in self.entries if not e.killed]

    def __getitem__(self, mutant: Union[MutantId, str]) -> KillEntry:
        mutant = MutantId.parse(mutant)
        for e in self.entries:
            if e.mutant is mutant:
                return e
        raise KeyError(mutant)

    def report(self) -> str:
        seed = "none" if self.corpus_seed is None else str(self.corpus_seed)
        lines = [f"BASELINE OK corpus_seed={seed} corpus_size={self.corpus_size}"]
        lines.extend(e.report_line() for e in self.entries)
        return "\n".join(lines) + "\n"


def _first_failure(behavior: CipherBehavior, corpus: Iterable, policy: KeyPolicy) -> Optional[Witness]:
    for msg, key in corpus:
        result = roundtrip_holds(behavior, msg, key, policy)
        if not result.passed:
            if not isinstance(key, KeyMaterial):
                key = KeyMaterial(bytes(key))
            return Witness(bytes(msg), key, result.first_diff_offset, result.length_mismatch)
    return None


def run_kill_matrix(
    base: CipherBehavior,
    mutants: Iterable[Union[MutantId, str]],
    corpus: Sequence,
    policy: KeyPolicy = KeyPolicy.STRICT,
) -> KillMatrix:
    """Check ``base`` on the whole corpus, then try to kill each mutant.

    Raises BrokenBaseline if ``base`` itself fails a round trip.  Entries are
    ordered by catalog id, one per distinct requested mutant.  Errors raised
    by a mutant (for example KeyTooShort from a corpus whose keys are not
    longer than their messages) propagate.
    """
    if len(corpus) == 0:
        raise ValueError("corpus must not be empty")
    requested = {MutantId.parse(m) for m in mutants}

    broken = _first_failure(base, corpus, policy)
    if broken is not None:
        raise BrokenBaseline(broken)

    entries = []
    for mutant in ALL_MUTANTS:
        if mutant in requested:
            witness = _first_failure(apply_mutant(base, mutant), corpus, policy)
            entries.append(KillEntry(mutant, witness))
    return KillMatrix(tuple(entries), getattr(corpus, "seed", None), len(corpus))


_BASELINE_RE = re.compile(r"^BASELINE OK corpus_seed=(\S+) corpus_size=(\d+)$")
_MUTANT_RE = re.compile(
    r"^MUTANT (\S+) (KILLED|SURVIVED)"
    r"(?: witness msg_len=(\d+) key_len=(\d+) offset=(\d+))?$"
)


def parse_report(text: str) -> dict:
    """Parse a kill-matrix report back into plain data.

    Returns ``{"corpus_seed": int | None, "corpus_size": int, "mutants": [...]}``
    where each mutant is a dict with ``id``, ``verdict`` and, when killed,
    ``msg_len``, ``key_len`` and ``offset``.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty report")
    head = _BASELINE_RE.match(lines[0])
    if head is None:
        raise ValueError(f"bad baseline line: {lines[0]!r}")
    seed = None if head.group(1) == "none" else int(head.group(1))
    mutants = []
    for ln in lines[1:]:
        m = _MUTANT_RE.match(ln)
        if m is None:
            raise ValueError(f"bad mutant line: {ln!r}")
        entry = {"id": m.group(1), "verdict": m.group(2)}
        if m.group(3) is not None:
            entry.update(msg_len=int(m.group(3)), key_len=int(m.group(4)), offset=int(m.group(5)))
        mutants.append(entry)
    return {"corpus_seed": seed, "corpus_size": int(head.group(2)), "mutants": mutants}


class TriangleKind(enum.Enum):
    EQUILATERAL = "Equilateral"
    ISOSCELES = "Isosceles"
    SCALENE = "Scalene"
    NOT_A_TRIANGLE = "NotATriangle"

    def __str__(self) -> str:
        return self.value


def classify_triangle(a: int, b: int, c: int) -> TriangleKind:
    x, y, z = sorted((a, b, c))
    if x <= 0 or x + y <= z:
        return TriangleKind.NOT_A_TRIANGLE
    if x == z:
        return TriangleKind.EQUILATERAL
    if x == y or y == z:
        return TriangleKind.ISOSCELES
    return TriangleKind.SCALENE
