"""Tag-stream data model and TTAG/CSV file round trips."""

import struct

import numpy as np
import pytest

from twistg2.errors import FormatError
from twistg2.timetags import (
    HEADER_SIZE,
    RECORD_SIZE,
    ChannelId,
    TagStream,
    TimeTag,
    merge_streams,
    read_tags,
    write_tags,
)


def random_stream(rng, n, duration_ps):
    channels = rng.integers(0, 3, n).astype(np.uint8)
    times = rng.integers(0, duration_ps, n)
    return TagStream.from_unsorted(duration_ps, channels, times)


def test_from_tags_sorts_and_tie_breaks():
    s = TagStream.from_tags(
        1000,
        [
            TimeTag(ChannelId.SIGNAL1, 50),
            TimeTag(ChannelId.IDLER, 100),
            TimeTag(ChannelId.SIGNAL2, 50),
            TimeTag(ChannelId.IDLER, 50),
        ],
    )
    assert s.tags == [
        TimeTag(ChannelId.IDLER, 50),
        TimeTag(ChannelId.SIGNAL1, 50),
        TimeTag(ChannelId.SIGNAL2, 50),
        TimeTag(ChannelId.IDLER, 100),
    ]


def test_stream_invariants_rejected():
    with pytest.raises(FormatError):
        TagStream(100, np.array([5], np.uint8), np.array([10], np.int64))
    with pytest.raises(FormatError):
        TagStream(100, np.array([0], np.uint8), np.array([100], np.int64))
    with pytest.raises(FormatError):
        TagStream(100, np.array([0, 0], np.uint8), np.array([20, 10], np.int64))
    with pytest.raises(FormatError):
        # tied times must be ordered by channel code
        TagStream(100, np.array([1, 0], np.uint8), np.array([10, 10], np.int64))


def test_channel_times():
    rng = np.random.default_rng(3)
    s = random_stream(rng, 500, 10_000)
    for ch in ChannelId:
        times = s.channel_times(ch)
        assert np.all(np.diff(times) >= 0)
    assert sum(s.channel_times(ch).size for ch in ChannelId) == len(s)


def test_merge_matches_full_sort():
    rng = np.random.default_rng(7)
    a = random_stream(rng, 1000, 50_000)
    b = random_stream(rng, 800, 50_000)
    merged = merge_streams(a, b)
    expected = TagStream.from_unsorted(
        50_000,
        np.concatenate([a.channels, b.channels]),
        np.concatenate([a.times_ps, b.times_ps]),
    )
    assert merged == expected


def test_merge_duration_mismatch():
    with pytest.raises(ValueError):
        merge_streams(TagStream(10), TagStream(20))


@pytest.mark.parametrize("n", [0, 1, 100_000])
def test_ttag_round_trip(tmp_path, n):
    rng = np.random.default_rng(n)
    s = random_stream(rng, n, 10**9)
    path = tmp_path / "s.ttag"
    write_tags(s, path)
    assert path.stat().st_size == HEADER_SIZE + RECORD_SIZE * n
    assert read_tags(path) == s


def test_ttag_layout_is_little_endian(tmp_path):
    s = TagStream.from_tags(1000, [TimeTag(ChannelId.SIGNAL2, 600)])
    path = tmp_path / "one.ttag"
    write_tags(s, path)
    raw = path.read_bytes()
    assert raw[:4] == b"TTAG"
    assert struct.unpack_from("<H", raw, 4)[0] == 1
    assert struct.unpack_from("<Q", raw, 6)[0] == 1000
    assert raw[14] == 2
    assert struct.unpack_from("<q", raw, 15)[0] == 600


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(11)
    s = random_stream(rng, 200, 5000)
    path = tmp_path / "s.csv"
    write_tags(s, path)
    back = read_tags(path)
    assert np.array_equal(back.channels, s.channels)
    assert np.array_equal(back.times_ps, s.times_ps)
    # CSV stores no duration; reading infers the tightest valid value
    assert back.duration_ps == int(s.times_ps.max()) + 1


def test_csv_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("time,chan\n")
    with pytest.raises(FormatError):
        read_tags(path)
    path.write_text("channel,time_ps\n0,12\n1,notanint\n")
    with pytest.raises(FormatError, match="line 3"):
        read_tags(path)


def _corrupt(tmp_path, raw):
    path = tmp_path / "bad.ttag"
    path.write_bytes(raw)
    with pytest.raises(FormatError) as info:
        read_tags(path)
    return info.value


def test_ttag_header_errors(tmp_path):
    assert _corrupt(tmp_path, b"TTAG").offset == 0  # shorter than the header
    good = struct.pack("<4sHQ", b"TTAG", 1, 1000)
    assert _corrupt(tmp_path, b"GATT" + good[4:]).offset == 0
    assert _corrupt(tmp_path, struct.pack("<4sHQ", b"TTAG", 9, 1000)).offset == 4


def test_ttag_record_errors(tmp_path):
    header = struct.pack("<4sHQ", b"TTAG", 1, 1000)
    rec = lambda c, t: struct.pack("<Bq", c, t)

    err = _corrupt(tmp_path, header + rec(0, 10) + b"\x01\x02")
    assert err.offset == HEADER_SIZE + RECORD_SIZE  # truncated second record

    err = _corrupt(tmp_path, header + rec(0, 10) + rec(7, 20))
    assert err.offset == HEADER_SIZE + RECORD_SIZE  # unknown channel code

    err = _corrupt(tmp_path, header + rec(0, 30) + rec(0, 20))
    assert err.offset == HEADER_SIZE + RECORD_SIZE  # out of order

    err = _corrupt(tmp_path, header + rec(0, 10) + rec(1, 2000))
    assert err.offset == HEADER_SIZE + RECORD_SIZE  # beyond duration


def test_empty_file_is_header_only(tmp_path):
    path = tmp_path / "empty.ttag"
    write_tags(TagStream(12345), path)
    assert path.stat().st_size == HEADER_SIZE
    s = read_tags(path)
    assert len(s) == 0 and s.duration_ps == 12345
