"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations

import os


class VernamError(Exception):
    """Base class for all errors raised by this package."""


class KeyTooShort(VernamError, ValueError):
    def __init__(self, key_len: int, msg_len: int):
        self.key_len = key_len
        self.msg_len = msg_len
        super().__init__(
            f"key too short: key is {key_len} bytes but the input is {msg_len} bytes"
        )


class EmptyKey(VernamError, ValueError):
    def __init__(self, what: str = "key"):
        super().__init__(f"{what} must not be empty")


class MissingFile(VernamError, FileNotFoundError):
    def __init__(self, path: os.PathLike | str):
        self.path = os.fspath(path)
        super().__init__(f"no such file: {self.path}")


class IoFailure(VernamError, OSError):
    def __init__(self, path: os.PathLike | str, detail: str):
        self.path = os.fspath(path)
        self.detail = detail
        super().__init__(f"I/O failure on {self.path}: {detail}")


class InvalidJob(VernamError, ValueError):
    """A file job whose paths overlap."""


class EntropyUnavailable(VernamError, RuntimeError):
    pass


class UnknownMutant(VernamError, KeyError):
    def __init__(self, name: object):
        self.name = name
        super().__init__(f"unknown mutant: {name!r}")

    def __str__(self) -> str:
        return self.args[0]


class BrokenBaseline(VernamError, AssertionError):
    """The unmutated cipher failed its own round-trip check."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(
            f"baseline cipher fails the round trip: msg_len={len(witness.msg)} "
            f"key_len={len(witness.key)} offset={witness.offset}"
        )
