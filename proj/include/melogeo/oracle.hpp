#pragma once

#include <cstddef>
#include <optional>

#include "melogeo/compression.hpp"
#include "melogeo/scaling.hpp"

/**
 * Slow, independently derived counterparts of every optimizer, written
 * against the defining statements with no shared sweep or table machinery.
 * Tests and the CLI --check mode compare the fast implementations against
 * these; the exhaustive ones throw TooLarge beyond a few million candidates.
 */
namespace melogeo::oracle {

/** Integrates |r - q| over the union of both boundary sets. */
Rational area_between(const SegmentMelody& r, const SegmentMelody& q);

/** Literal per-note transcription of the two matching phases. */
Matching t_monotone_matching(const PointMelody& r, const PointMelody& q);

/** Best epsilon and cost found by direct evaluation at every candidate. */
struct ScaleCheck {
  Rational best_epsilon;
  Rational best_cost;

  bool operator==(const ScaleCheck&) const = default;
};

/** Evaluates the area at every boundary-crossing epsilon and both interval ends. */
ScaleCheck min_area_scaling(const SegmentMelody& r, const SegmentMelody& q);

/**
 * Evaluates the matching cost at every solution of the three event equations,
 * at every midpoint of consecutive candidates and at both interval ends. The
 * sweep minimum can undercut this only where the cost jumps and the cheaper
 * one-sided limit is never attained.
 */
ScaleCheck min_matching_scaling(const PointMelody& r, const PointMelody& q,
                                std::optional<Rational> eps_max = {});

/** Tries all k-note subsets in lexicographic order. */
PointCompression compress_points(const PointMelody& r, std::size_t k);

/** Pitch pool the exhaustive segment compression draws from. */
enum class PitchPool {
  Contained,    // pitches of the reference segments the query segment covers
  AllDistinct,  // every distinct reference pitch
};

/** Tries all boundary subsets in lexicographic order, best pool pitch per segment. */
SegmentCompression compress_segments(const SegmentMelody& r, std::size_t k, PitchPool pool);

/**
 * Exhaustive minimum cost with boundaries drawn from the reference boundaries
 * plus all midpoints between consecutive ones; equals the plain exhaustive
 * minimum whenever restricting boundaries to the reference grid loses nothing.
 */
Rational compress_segments_refined_cost(const SegmentMelody& r, std::size_t k);

}  // namespace melogeo::oracle
