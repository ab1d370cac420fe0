#!/usr/bin/env python3
"""Regenerates the MIDI fixture corpus under tests/fixtures/.

Each fixture is written together with a .expected.json file holding the
segment melody the decoder must produce (boundaries at note onsets relative
to the first onset, final boundary at the last offset, rests absorbed into
the preceding note). chord_error.mid is the exception: it is deliberately
polyphonic and gets no expectation file.
"""

import json
import pathlib
import struct


def vlq(value: int) -> bytes:
    groups = [value & 0x7F]
    value >>= 7
    while value:
        groups.append(value & 0x7F | 0x80)
        value >>= 7
    return bytes(reversed(groups))


def header(fmt: int, ntrks: int, division: int = 480) -> bytes:
    return b"MThd" + struct.pack(">IHHH", 6, fmt, ntrks, division)


def track(events: bytes) -> bytes:
    return b"MTrk" + struct.pack(">I", len(events)) + events


def end_of_track(delta: int = 0) -> bytes:
    return vlq(delta) + b"\xff\x2f\x00"


TEMPO_120 = vlq(0) + b"\xff\x51\x03\x07\xa1\x20"
TIME_SIG_4_4 = vlq(0) + b"\xff\x58\x04\x04\x02\x18\x08"


def plain_events(notes, first_delta_extra=0):
    """Note-on/note-off pairs for (onset, offset, pitch) triples, no overlap."""
    out = bytearray()
    cursor = -first_delta_extra
    for onset, offset, pitch in notes:
        out += vlq(onset - cursor) + bytes([0x90, pitch, 64])
        out += vlq(offset - onset) + bytes([0x80, pitch, 0])
        cursor = offset
    return bytes(out)


def expected_segments(notes, end=None):
    onsets = [n[0] for n in notes]
    origin = onsets[0]
    times = [o - origin for o in onsets] + [(end if end is not None else notes[-1][1]) - origin]
    return {
        "representation": "segment",
        "time_unit": "ticks",
        "times": times,
        "pitches": [n[2] for n in notes],
    }


def main() -> None:
    out_dir = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures"
    out_dir.mkdir(parents=True, exist_ok=True)

    fixtures = {}

    # Eight quarter notes, back to back, format 0.
    scale_notes = [(i * 480, i * 480 + 480, p) for i, p in enumerate([60, 62, 64, 65, 67, 69, 71, 72])]
    fixtures["scale_c_major"] = (
        header(0, 1) + track(plain_events(scale_notes) + end_of_track()),
        expected_segments(scale_notes),
    )

    # Format 1: conductor track plus a melody that starts late and breathes.
    pickup_notes = [(96, 336, 67), (384, 624, 65), (720, 816, 64), (816, 1296, 60)]
    fixtures["rests_and_pickup"] = (
        header(1, 2)
        + track(TEMPO_120 + TIME_SIG_4_4 + end_of_track())
        + track(plain_events(pickup_notes) + end_of_track()),
        expected_segments(pickup_notes),
    )

    # Running status throughout: one explicit 0x90, then data bytes only,
    # with velocity 0 standing in for note-off.
    rs = bytearray()
    rs += vlq(0) + bytes([0x90, 60, 64])
    rs += vlq(240) + bytes([60, 0])
    rs += vlq(0) + bytes([62, 64])
    rs += vlq(240) + bytes([62, 0])
    rs += vlq(0) + bytes([64, 64])
    rs += vlq(480) + bytes([64, 0])
    fixtures["running_status"] = (
        header(0, 1) + track(bytes(rs) + end_of_track()),
        expected_segments([(0, 240, 60), (240, 480, 62), (480, 960, 64)]),
    )

    # The final note has no note-off; the end-of-track delta closes it.
    held = plain_events([(0, 480, 55)]) + vlq(0) + bytes([0x90, 59, 64])
    fixtures["held_last_note"] = (
        header(0, 1) + track(held + end_of_track(720)),
        expected_segments([(0, 480, 55), (480, 1200, 59)], end=1200),
    )

    # Wide register jumps, for stress rather than musicality.
    leap_notes = [(0, 120, 36), (120, 240, 96), (240, 480, 48), (480, 600, 84), (600, 960, 40)]
    fixtures["big_leaps"] = (
        header(0, 1) + track(plain_events(leap_notes) + end_of_track()),
        expected_segments(leap_notes),
    )

    # Negative fixture: a second onset at tick 10 while the first still sounds.
    chord = bytearray()
    chord += vlq(0) + bytes([0x90, 60, 64])
    chord += vlq(10) + bytes([0x90, 64, 64])
    chord += vlq(470) + bytes([0x80, 64, 0])
    chord += vlq(0) + bytes([0x80, 60, 0])
    fixtures["chord_error"] = (header(0, 1) + track(bytes(chord) + end_of_track()), None)

    for name, (data, expected) in fixtures.items():
        (out_dir / f"{name}.mid").write_bytes(data)
        if expected is not None:
            with open(out_dir / f"{name}.expected.json", "w") as f:
                json.dump(expected, f, indent=2)
                f.write("\n")
        print(f"wrote {name}.mid ({len(data)} bytes)")


if __name__ == "__main__":
    main()
