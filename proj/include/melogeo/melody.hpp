#pragma once

#include <cstddef>
#include <vector>

#include "melogeo/errors.hpp"
#include "melogeo/rational.hpp"

namespace melogeo {

using Pitch = Rational;

/**
 * Step-function contour: boundary times x_0 < x_1 < ... < x_n with x_0 = 0 and
 * one pitch per segment [x_{i-1}, x_i). Always one more time than pitches.
 */
struct SegmentMelody {
  std::vector<Rational> times;
  std::vector<Pitch> pitches;

  std::size_t segment_count() const { return pitches.size(); }
  const Rational& duration() const { return times.back(); }

  bool operator==(const SegmentMelody&) const = default;
};

struct Note {
  Rational time;
  Pitch pitch;

  bool operator==(const Note&) const = default;
};

/** Ordered notes with strictly increasing times; no origin requirement. */
struct PointMelody {
  std::vector<Note> notes;

  std::size_t size() const { return notes.size(); }

  bool operator==(const PointMelody&) const = default;
};

/** Validates and returns the melody; throws Error on any invariant violation. */
SegmentMelody make_segment_melody(std::vector<Rational> times, std::vector<Pitch> pitches);
PointMelody make_point_melody(std::vector<Note> notes);

void validate(const SegmentMelody& melody);
void validate(const PointMelody& melody);

/**
 * Indices i where pitches[i] == pitches[i+1]. Equal consecutive pitches are
 * legal (the boundary carries timing information), so this is a lint, not an
 * error.
 */
std::vector<std::size_t> equal_adjacent_pitch_segments(const SegmentMelody& melody);

/** One note per segment: time at the segment midpoint, pitch of the segment. */
PointMelody segment_to_point(const SegmentMelody& melody);

/** Shifts all pitches so the first one is zero. */
SegmentMelody transpose_normalize(const SegmentMelody& melody);
PointMelody transpose_normalize(const PointMelody& melody);

}  // namespace melogeo
