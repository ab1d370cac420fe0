#include "melogeo/melody.hpp"

#include <utility>

namespace melogeo {

namespace {

void check_strictly_increasing(const std::vector<Rational>& times) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i - 1] < times[i])) {
      fail(ErrorCode::NonMonotoneTimes,
           "times must be strictly increasing (violated at index " + std::to_string(i) + ")");
    }
  }
}

}  // namespace

void validate(const SegmentMelody& melody) {
  if (melody.times.size() < 2 || melody.pitches.empty()) {
    fail(ErrorCode::Empty, "segment melody needs at least one segment");
  }
  if (melody.times.size() != melody.pitches.size() + 1) {
    fail(ErrorCode::LengthMismatch,
         "expected one more time than pitches, got " + std::to_string(melody.times.size()) +
             " times and " + std::to_string(melody.pitches.size()) + " pitches");
  }
  if (melody.times.front() != 0) {
    fail(ErrorCode::NonZeroOrigin, "first time must be 0, got " + to_string(melody.times.front()));
  }
  check_strictly_increasing(melody.times);
}

void validate(const PointMelody& melody) {
  if (melody.notes.empty()) {
    fail(ErrorCode::Empty, "point melody needs at least one note");
  }
  for (std::size_t i = 1; i < melody.notes.size(); ++i) {
    if (!(melody.notes[i - 1].time < melody.notes[i].time)) {
      fail(ErrorCode::NonMonotoneTimes,
           "note times must be strictly increasing (violated at index " + std::to_string(i) + ")");
    }
  }
}

SegmentMelody make_segment_melody(std::vector<Rational> times, std::vector<Pitch> pitches) {
  SegmentMelody melody{std::move(times), std::move(pitches)};
  validate(melody);
  return melody;
}

PointMelody make_point_melody(std::vector<Note> notes) {
  PointMelody melody{std::move(notes)};
  validate(melody);
  return melody;
}

std::vector<std::size_t> equal_adjacent_pitch_segments(const SegmentMelody& melody) {
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i + 1 < melody.pitches.size(); ++i) {
    if (melody.pitches[i] == melody.pitches[i + 1]) hits.push_back(i);
  }
  return hits;
}

PointMelody segment_to_point(const SegmentMelody& melody) {
  validate(melody);
  PointMelody out;
  out.notes.reserve(melody.segment_count());
  for (std::size_t i = 0; i < melody.segment_count(); ++i) {
    out.notes.push_back({(melody.times[i] + melody.times[i + 1]) / 2, melody.pitches[i]});
  }
  return out;
}

SegmentMelody transpose_normalize(const SegmentMelody& melody) {
  validate(melody);
  SegmentMelody out = melody;
  Pitch shift = melody.pitches.front();
  for (Pitch& p : out.pitches) p -= shift;
  return out;
}

PointMelody transpose_normalize(const PointMelody& melody) {
  validate(melody);
  PointMelody out = melody;
  Pitch shift = melody.notes.front().pitch;
  for (Note& note : out.notes) note.pitch -= shift;
  return out;
}

}  // namespace melogeo
