#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "melogeo/melody.hpp"

namespace melogeo {

/** (reference index, query index), both 0-based. */
using IndexPair = std::pair<std::size_t, std::size_t>;

/**
 * t-monotone matching between a reference and a query point melody.
 *
 * Phase 1 assigns every reference note to its time-nearest query note (exact
 * midpoint ties go to the l1-nearest of the two, then to the earlier one);
 * phase 2 assigns every query note left unmatched to its time-nearest
 * reference note under the same rule. Pairs are split by time order and kept
 * sorted lexicographically: a_minus holds pairs with x_i < t_j, a_plus the
 * pairs with x_i >= t_j.
 */
struct Matching {
  std::vector<IndexPair> a_minus;
  std::vector<IndexPair> a_plus;
  Rational cost;

  std::size_t pair_count() const { return a_minus.size() + a_plus.size(); }

  bool operator==(const Matching&) const = default;
};

/**
 * Returns the query with its last boundary moved to `end`, i.e. the final
 * pitch prolonged. Identity when the durations already agree; throws
 * QueryLongerThanReference when the query is longer than `end`.
 */
SegmentMelody extend_query(const SegmentMelody& query, const Rational& end);

/**
 * Area between two step functions of equal duration: the sum over the merged
 * partition of |pitch difference| * interval width.
 */
Rational area_between(const SegmentMelody& reference, const SegmentMelody& query);

/** Computes the t-monotone matching in time linear in n + m. */
Matching t_monotone_matching(const PointMelody& reference, const PointMelody& query);

}  // namespace melogeo
