#pragma once

#include <cstddef>
#include <vector>

#include "melogeo/measures.hpp"

namespace melogeo {

/**
 * Matching costs of the reference notes strictly between two kept notes.
 * Notes are 1-based inside the table; rows 0 and n+1 are virtual boundaries
 * before the first and after the last note. For a < b, w[a][b] is the total
 * cost of the notes strictly between a and b when a and b are the nearest
 * kept notes: each note goes to the nearer side, a note exactly on the
 * midpoint to the cheaper side. w[0][b] sends every note left of b to b,
 * w[a][n+1] every note right of a to a. Cells with a >= b are unused.
 */
struct PairwiseCostTable {
  std::vector<std::vector<Rational>> w;
};

PairwiseCostTable build_pairwise_costs(const PointMelody& r);

/** A k-note subset of a point melody together with its matching cost. */
struct PointCompression {
  std::vector<std::size_t> kept;  // 0-based indices into r.notes, strictly increasing
  PointMelody melody;
  Rational cost;

  bool operator==(const PointCompression&) const = default;
};

/**
 * Picks the k notes of r whose melody minimizes t_monotone_matching(r, .)
 * over all k-note subsets; among minimizers the kept index sequence is
 * lexicographically smallest. Throws BadK unless 1 <= k <= size and TooLarge
 * when the quadratic tables would not fit in memory.
 */
PointCompression compress_points(const PointMelody& r, std::size_t k);

/** A k-segment melody on reference boundaries together with its area cost. */
struct SegmentCompression {
  SegmentMelody melody;
  Rational cost;

  bool operator==(const SegmentCompression&) const = default;
};

/**
 * Builds the k-segment melody minimizing area_between(r, .) among melodies
 * whose boundaries are reference boundaries (keeping 0 and the duration) and
 * whose pitches are reference pitches. At equal cost a segment extends
 * further left rather than restarting, and the smallest pitch wins. Throws
 * BadK unless 1 <= k <= segment_count and TooLarge when the branch table
 * would not fit in memory.
 */
SegmentCompression compress_segments(const SegmentMelody& r, std::size_t k);

}  // namespace melogeo
