import os
import tempfile
from pathlib import Path

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from oracles import first_diff, xor_bytes
from vernam import (
    FileJob,
    InvalidJob,
    IoFailure,
    KeyPolicy,
    KeyTooShort,
    MissingFile,
    clean_outputs,
    decipher_file,
    encipher_file,
    files_equal,
)
from vernam import stream_io


def write(path: Path, data: bytes) -> Path:
    path.write_bytes(data)
    return path


@pytest.fixture
def files(tmp_path):
    def make(**contents):
        return {name: write(tmp_path / name, data) for name, data in contents.items()}

    return make


def test_empty_files(files, tmp_path):
    f = files(inp=b"", key=b"")
    out = tmp_path / "out"
    assert encipher_file(FileJob(f["inp"], out, f["key"])) == 0
    assert out.read_bytes() == b""


def test_zero_input_reproduces_key(files, tmp_path):
    key = bytes(range(200, 256)) + b"extra"
    f = files(inp=bytes(56), key=key)
    out = tmp_path / "out"
    assert encipher_file(FileJob(f["inp"], out, f["key"])) == 56
    assert out.read_bytes() == key[:56]


def test_short_key_rejected(files, tmp_path):
    f = files(inp=b"12345", key=b"1234")
    out = tmp_path / "out"
    with pytest.raises(KeyTooShort) as exc:
        encipher_file(FileJob(f["inp"], out, f["key"]))
    assert (exc.value.key_len, exc.value.msg_len) == (4, 5)
    assert not out.exists()


def test_round_trip(files, tmp_path):
    f = files(inp=os.urandom(5000), key=os.urandom(6000))
    enc, dec = tmp_path / "enc", tmp_path / "dec"
    encipher_file(FileJob(f["inp"], enc, f["key"]))
    decipher_file(FileJob(enc, dec, f["key"]))
    assert files_equal(f["inp"], dec).equal
    assert not files_equal(f["inp"], enc).equal


def test_key_equal_to_input_gives_zeros(files, tmp_path):
    data = os.urandom(300)
    f = files(inp=data, key=data)
    out = tmp_path / "out"
    decipher_file(FileJob(f["inp"], out, f["key"]))
    assert out.read_bytes() == bytes(300)


def test_missing_key(files, tmp_path):
    f = files(inp=b"abc")
    with pytest.raises(MissingFile) as exc:
        decipher_file(FileJob(f["inp"], tmp_path / "out", tmp_path / "nope"))
    assert exc.value.path.endswith("nope")


def test_missing_input(files, tmp_path):
    f = files(key=b"abc")
    with pytest.raises(MissingFile):
        encipher_file(FileJob(tmp_path / "nope", tmp_path / "out", f["key"]))


def test_missing_output_directory(files, tmp_path):
    f = files(inp=b"abc", key=b"abc")
    with pytest.raises(IoFailure):
        encipher_file(FileJob(f["inp"], tmp_path / "no" / "out", f["key"]))


def test_overlapping_paths_rejected(tmp_path):
    with pytest.raises(InvalidJob):
        FileJob(tmp_path / "a", tmp_path / "a", tmp_path / "k")
    with pytest.raises(InvalidJob):
        FileJob(tmp_path / "a", tmp_path / "k", tmp_path / "k")
    with pytest.raises(InvalidJob):
        FileJob(tmp_path / "a", tmp_path / "sub" / ".." / "k", tmp_path / "k")


def test_existing_output_replaced(files, tmp_path):
    f = files(inp=b"\x01\x02", key=b"\x01\x02", out=b"old content that is longer")
    encipher_file(FileJob(f["inp"], f["out"], f["key"]))
    assert f["out"].read_bytes() == b"\x00\x00"


def test_failed_job_keeps_old_output_and_leaves_no_temp(files, tmp_path):
    f = files(inp=b"12345", key=b"1", out=b"previous")
    with pytest.raises(KeyTooShort):
        encipher_file(FileJob(f["inp"], f["out"], f["key"]))
    assert f["out"].read_bytes() == b"previous"
    assert sorted(p.name for p in tmp_path.iterdir()) == ["inp", "key", "out"]


def test_failure_mid_stream_removes_temp(files, tmp_path, monkeypatch):
    f = files(inp=os.urandom(100), key=os.urandom(100))
    out = tmp_path / "out"
    monkeypatch.setattr(stream_io, "CHUNK_SIZE", 10)
    calls = []

    def exploding(a, b):
        calls.append(1)
        if len(calls) == 3:
            raise OSError(28, "No space left on device")
        return bytes(x ^ y for x, y in zip(a, b))

    monkeypatch.setattr(stream_io, "xor_bytes", exploding)
    with pytest.raises(IoFailure):
        encipher_file(FileJob(f["inp"], out, f["key"]))
    assert sorted(p.name for p in tmp_path.iterdir()) == ["inp", "key"]


@pytest.mark.parametrize("chunk", [1, 3, 7, 64, 1 << 20])
def test_chunked_output_matches_byte_loop(files, tmp_path, monkeypatch, chunk):
    data, key = os.urandom(257), os.urandom(260)
    f = files(inp=data, key=key)
    monkeypatch.setattr(stream_io, "CHUNK_SIZE", chunk)
    out = tmp_path / "out"
    encipher_file(FileJob(f["inp"], out, f["key"]))
    assert out.read_bytes() == xor_bytes(data, key)


@pytest.mark.parametrize("chunk", [1, 4, 5, 1 << 20])
def test_relaxed_policy_cycles_across_chunks(files, tmp_path, monkeypatch, chunk):
    data, key = os.urandom(50), b"\x01\x02\x03"
    f = files(inp=data, key=key)
    monkeypatch.setattr(stream_io, "CHUNK_SIZE", chunk)
    out = tmp_path / "out"
    encipher_file(FileJob(f["inp"], out, f["key"], KeyPolicy.RELAXED_REPEAT))
    assert out.read_bytes() == xor_bytes(data, key)


def test_files_equal_examples(files):
    content = os.urandom(1024)
    f = files(a=content, b=content, c=bytes(10), d=bytes(11), e=bytes([0, 1, 2, 3]), g=bytes([0, 1, 9, 3]))
    assert files_equal(f["a"], f["b"]).equal
    assert files_equal(f["a"], f["b"]).mismatch is None

    v = files_equal(f["c"], f["d"])
    assert not v.equal
    assert (v.mismatch.kind, v.mismatch.left_len, v.mismatch.right_len) == ("length", 10, 11)

    v = files_equal(f["e"], f["g"])
    assert not v.equal
    assert (v.mismatch.kind, v.mismatch.offset) == ("byte", 2)
    assert first_diff(bytes([0, 1, 2, 3]), bytes([0, 1, 9, 3])) == 2


def test_length_mismatch_reported_without_reading(files, monkeypatch):
    f = files(a=b"x" * 10, b=b"x" * 11)

    def no_open(*a, **k):
        raise AssertionError("content was read")

    monkeypatch.setattr(stream_io, "_open", no_open)
    assert files_equal(f["a"], f["b"]).mismatch.kind == "length"


def test_files_equal_missing(files, tmp_path):
    f = files(a=b"x")
    with pytest.raises(MissingFile):
        files_equal(f["a"], tmp_path / "nope")
    with pytest.raises(MissingFile):
        files_equal(tmp_path / "nope", f["a"])


def test_files_equal_directory(files, tmp_path):
    f = files(a=b"x")
    with pytest.raises(IoFailure):
        files_equal(f["a"], tmp_path)


@pytest.mark.parametrize("offset", [0, 1, 2, 999_999, 1 << 20, (1 << 20) + 1, 3 * (1 << 20) - 1])
def test_first_offset_across_chunks(tmp_path, offset):
    size = 3 * (1 << 20)
    a = bytearray(size)
    b = bytearray(size)
    b[offset] = 1
    b[-1] = 7
    write(tmp_path / "a", bytes(a))
    write(tmp_path / "b", bytes(b))
    v = files_equal(tmp_path / "a", tmp_path / "b")
    assert v.mismatch.offset == offset


small_blobs = st.binary(max_size=40)


@settings(suppress_health_check=[HealthCheck.function_scoped_fixture], max_examples=200)
@given(a=small_blobs, b=small_blobs, flip=st.integers(0, 39))
def test_files_equal_agrees_with_memory(tmp_path, a, b, flip):
    # Bias towards same-length near-misses, which random pairs rarely hit.
    if flip < len(a) and flip % 2:
        b = a[:flip] + bytes([a[flip] ^ 0x80]) + a[flip + 1 :]
    pa, pb = write(tmp_path / "a", a), write(tmp_path / "b", b)
    v = files_equal(pa, pb)
    assert v.equal == (a == b)
    assert files_equal(pb, pa).equal == v.equal
    if v.equal:
        assert v.mismatch is None
    elif len(a) != len(b):
        assert v.mismatch.kind == "length"
    else:
        assert v.mismatch.kind == "byte"
        assert v.mismatch.offset == first_diff(a, b)


@settings(suppress_health_check=[HealthCheck.function_scoped_fixture], max_examples=50)
@given(data=st.binary(max_size=2000), extra=st.binary(max_size=8))
def test_file_round_trip_property(tmp_path, data, extra):
    key = os.urandom(len(data)) + extra
    inp, k = write(tmp_path / "in", data), write(tmp_path / "key", key)
    encipher_file(FileJob(inp, tmp_path / "enc", k))
    decipher_file(FileJob(tmp_path / "enc", tmp_path / "dec", k))
    assert files_equal(inp, tmp_path / "dec").equal


def test_clean_outputs(tmp_path):
    present = write(tmp_path / "present", b"x")
    clean_outputs([tmp_path / "absent", present])
    assert not present.exists()


def test_clean_outputs_directory(tmp_path):
    (tmp_path / "d").mkdir()
    with pytest.raises(IoFailure):
        clean_outputs([tmp_path / "d"])


def test_clean_outputs_dangling_symlink(tmp_path):
    link = tmp_path / "link"
    link.symlink_to(tmp_path / "nowhere")
    clean_outputs([link])
    assert not os.path.lexists(link)


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_clean_outputs_denied(tmp_path):
    d = tmp_path / "ro"
    d.mkdir()
    target = write(d / "f", b"x")
    d.chmod(0o500)
    try:
        with pytest.raises(IoFailure):
            clean_outputs([target])
    finally:
        d.chmod(0o700)


def test_output_permissions_follow_umask(files, tmp_path):
    f = files(inp=b"a", key=b"b")
    out = tmp_path / "out"
    encipher_file(FileJob(f["inp"], out, f["key"]))
    assert out.stat().st_mode & 0o777 == 0o666 & ~stream_io._UMASK
