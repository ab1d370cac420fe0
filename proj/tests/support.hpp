#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "melogeo/melody.hpp"

namespace melogeo::testing {

using Rng = std::mt19937_64;

inline int rand_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/** Random rational with small numerator and denominator in {1,2,3,4}. */
inline Rational rand_gap(Rng& rng, int max_num) {
  return Rational(rand_int(rng, 1, max_num), rand_int(rng, 1, 4));
}

inline SegmentMelody random_segment_melody(Rng& rng, int max_segments, int max_pitch) {
  const int m = rand_int(rng, 1, max_segments);
  std::vector<Rational> times{0};
  std::vector<Pitch> pitches;
  for (int i = 0; i < m; ++i) {
    times.push_back(times.back() + rand_gap(rng, 6));
    pitches.push_back(rand_int(rng, 0, max_pitch));
  }
  return make_segment_melody(std::move(times), std::move(pitches));
}

inline PointMelody random_point_melody(Rng& rng, int max_notes, int max_pitch) {
  const int m = rand_int(rng, 1, max_notes);
  std::vector<Note> notes;
  Rational t = Rational(rand_int(rng, -4, 4), rand_int(rng, 1, 3));
  for (int i = 0; i < m; ++i) {
    notes.push_back({t, Rational(rand_int(rng, 0, max_pitch))});
    t += rand_gap(rng, 6);
  }
  return make_point_melody(std::move(notes));
}

}  // namespace melogeo::testing
