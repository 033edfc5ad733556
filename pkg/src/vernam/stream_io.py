"""Three-file protocol: read an input file and a key file, write an output file.

Files are raw octet streams.  Processing is chunked, but the result is
identical to XORing one byte at a time.  Output goes to a temporary sibling
that is renamed over the destination only once everything succeeded, so a
failed run never leaves a half-written file under the final name.

The key length is taken from file metadata before streaming starts.  A file
that changes size while it is being processed is not handled.
"""

from __future__ import annotations

import os
import stat
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .core import KeyPolicy, key_stream, validate_key, xor_bytes
from .errors import InvalidJob, IoFailure, MissingFile

CHUNK_SIZE = 1 << 20


@dataclass(frozen=True)
class FileJob:
    in_path: Path
    out_path: Path
    key_path: Path
    policy: KeyPolicy = KeyPolicy.STRICT

    def __post_init__(self):
        for name in ("in_path", "out_path", "key_path"):
            object.__setattr__(self, name, Path(getattr(self, name)))
        out = _canonical(self.out_path)
        if out == _canonical(self.in_path):
            raise InvalidJob(f"output path {self.out_path} is the same as the input path")
        if out == _canonical(self.key_path):
            raise InvalidJob(f"output path {self.out_path} is the same as the key path")


def _canonical(path: Path) -> Path:
    return Path(os.path.realpath(path))


class MismatchKind:
    LENGTH = "length"
    BYTE = "byte"


@dataclass(frozen=True)
class Mismatch:
    kind: str
    left_len: int
    right_len: int
    # None for length mismatches: those are decided without reading content.
    offset: Optional[int] = None


@dataclass(frozen=True)
class EqualityVerdict:
    equal: bool
    mismatch: Optional[Mismatch] = field(default=None)

    def __bool__(self) -> bool:
        return self.equal

    def describe(self) -> str:
        if self.mismatch is None:
            return "files are equal"
        m = self.mismatch
        if m.kind == MismatchKind.LENGTH:
            return f"length mismatch: {m.left_len} != {m.right_len} bytes"
        return f"first differing byte at offset {m.offset} (both files {m.left_len} bytes)"


def _regular_file_size(path: Path) -> int:
    try:
        st = os.stat(path)
    except FileNotFoundError:
        raise MissingFile(path) from None
    except OSError as e:
        raise IoFailure(path, e.strerror or str(e)) from e
    if not stat.S_ISREG(st.st_mode):
        raise IoFailure(path, "not a regular file")
    return st.st_size


def _open(path: Path, mode: str):
    try:
        return open(path, mode)
    except FileNotFoundError:
        raise MissingFile(path) from None
    except OSError as e:
        raise IoFailure(path, e.strerror or str(e)) from e


def _read_exact(f, n: int, path: Path) -> bytes:
    buf = f.read(n)
    if len(buf) != n:
        raise IoFailure(path, f"file shrank while reading (wanted {n} bytes, got {len(buf)})")
    return buf


def _read_umask() -> int:
    mask = os.umask(0)
    os.umask(mask)
    return mask


# Read once at import; os.umask is process-wide and not safe to toggle per job.
_UMASK = _read_umask()


def _xor_file(job: FileJob) -> int:
    in_len = _regular_file_size(job.in_path)
    key_len = _regular_file_size(job.key_path)
    validate_key(key_len, in_len, job.policy)

    out_dir = job.out_path.parent
    try:
        fd, tmp_name = tempfile.mkstemp(prefix=f".{job.out_path.name}.", suffix=".tmp", dir=out_dir)
    except FileNotFoundError:
        raise IoFailure(job.out_path, "output directory does not exist") from None
    except OSError as e:
        raise IoFailure(job.out_path, e.strerror or str(e)) from e

    try:
        with os.fdopen(fd, "wb") as fout, _open(job.in_path, "rb") as fin, _open(job.key_path, "rb") as fkey:
            # Relaxed keys are cycled, so keep the whole key in memory.
            cyclic_key = _read_exact(fkey, key_len, job.key_path) if job.policy is KeyPolicy.RELAXED_REPEAT else None
            pos = 0
            while pos < in_len:
                n = min(CHUNK_SIZE, in_len - pos)
                chunk = _read_exact(fin, n, job.in_path)
                if cyclic_key is None:
                    ks = _read_exact(fkey, n, job.key_path)
                else:
                    ks = key_stream(cyclic_key, n, job.policy, offset=pos)
                fout.write(xor_bytes(chunk, ks))
                pos += n
        os.chmod(tmp_name, 0o666 & ~_UMASK)
        os.replace(tmp_name, job.out_path)
    except BaseException as e:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        if isinstance(e, OSError) and not isinstance(e, (MissingFile, IoFailure)):
            raise IoFailure(job.out_path, e.strerror or str(e)) from e
        raise
    return in_len


def encipher_file(job: FileJob) -> int:
    """Encipher ``job.in_path`` into ``job.out_path``; returns the byte count."""
    return _xor_file(job)


def decipher_file(job: FileJob) -> int:
    """Decipher ``job.in_path`` into ``job.out_path``; returns the byte count."""
    return _xor_file(job)


def _first_difference(a: bytes, b: bytes) -> int:
    # Bisect on slice equality; C-speed comparisons instead of a Python loop.
    lo, hi = 0, len(a)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if a[lo:mid] != b[lo:mid]:
            hi = mid
        else:
            lo = mid
    return lo


def files_equal(a_path: os.PathLike | str, b_path: os.PathLike | str) -> EqualityVerdict:
    """Compare two files byte by byte.

    Lengths are compared first from metadata; a length mismatch is reported
    without opening either file.  Otherwise the verdict carries the smallest
    offset at which the files differ.
    """
    a_path, b_path = Path(a_path), Path(b_path)
    a_len = _regular_file_size(a_path)
    b_len = _regular_file_size(b_path)
    if a_len != b_len:
        return EqualityVerdict(False, Mismatch(MismatchKind.LENGTH, a_len, b_len))

    with _open(a_path, "rb") as fa, _open(b_path, "rb") as fb:
        pos = 0
        while pos < a_len:
            n = min(CHUNK_SIZE, a_len - pos)
            ca = _read_exact(fa, n, a_path)
            cb = _read_exact(fb, n, b_path)
            if ca != cb:
                offset = pos + _first_difference(ca, cb)
                return EqualityVerdict(False, Mismatch(MismatchKind.BYTE, a_len, b_len, offset))
            pos += n
    return EqualityVerdict(True)


def clean_outputs(paths: Iterable[os.PathLike | str]) -> None:
    """Delete stale output files; paths that do not exist are skipped."""
    for p in paths:
        p = Path(p)
        if not os.path.lexists(p):
            continue
        if p.is_dir() and not p.is_symlink():
            raise IoFailure(p, "is a directory")
        try:
            os.unlink(p)
        except FileNotFoundError:
            pass
        except OSError as e:
            raise IoFailure(p, e.strerror or str(e)) from e
