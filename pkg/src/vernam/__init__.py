"""Vernam one-time pad with a round-trip and fault-injection test harness."""

from .core import (
    KeyMaterial,
    KeyOrigin,
    KeyPolicy,
    decipher,
    encipher,
    key_stream,
    validate_key,
    xor_combine,
)
from .errors import (
    BrokenBaseline,
    EmptyKey,
    EntropyUnavailable,
    InvalidJob,
    IoFailure,
    KeyTooShort,
    MissingFile,
    UnknownMutant,
    VernamError,
)
from .infection import (
    ALL_MUTANTS,
    VERNAM,
    CipherBehavior,
    KillMatrix,
    MutantId,
    TriangleKind,
    apply_mutant,
    classify_triangle,
    generate_corpus,
    roundtrip_holds,
    run_kill_matrix,
)
from .keygen import KeySpec, generate_key, monobit_fraction
from .stream_io import EqualityVerdict, FileJob, clean_outputs, decipher_file, encipher_file, files_equal

__version__ = "0.1.0"
