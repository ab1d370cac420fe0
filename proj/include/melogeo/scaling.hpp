#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "melogeo/measures.hpp"

namespace melogeo {

enum class EventKind {
  // a scaled query boundary t_j + j*eps crosses a reference boundary x_i
  AreaBoundaryCross,
  // a scaled query note t_j(eps) reaches its matched reference note x_i
  Type1,
  // the bisector of t_j(eps), t_{j+1}(eps) reaches x_i: the reference note re-partners
  Type2,
  // t_j(eps) of an unmatched query note crosses the midpoint of x_i, x_{i+1}
  Type3,
};

enum class PairSet { AMinus, APlus };

/** One matched pair entering or leaving A- / A+ at an event. */
struct PairDelta {
  IndexPair pair;
  PairSet set;
  bool enters;

  bool operator==(const PairDelta&) const = default;
};

/**
 * One structural change of the sweep at a fixed epsilon. Area events fill the
 * rectangle payload (vanished/created heights, slope_delta); matching events
 * fill pair_deltas plus slope_delta. ref_index/query_index are the (i, j) of
 * the defining equation, 0-based; for area events they are the interior
 * boundary indices (1-based by construction since boundary 0 never moves).
 */
struct SweepEvent {
  Rational epsilon;
  EventKind kind = EventKind::AreaBoundaryCross;
  std::size_t ref_index = 0;
  std::size_t query_index = 0;
  Rational vanished_height;
  Rational created_height;
  Rational slope_delta;
  std::vector<PairDelta> pair_deltas;

  bool operator==(const SweepEvent&) const = default;
};

/**
 * One linear piece of the cost-versus-epsilon function on [eps_lo, eps_hi].
 * value_at_lo is the right-sided value at eps_lo: the matching cost may jump
 * downward or upward exactly at a piece boundary, and each piece stores the
 * value the cost takes just inside it.
 */
struct ProfilePiece {
  Rational eps_lo;
  Rational eps_hi;
  Rational value_at_lo;
  Rational slope;

  Rational value_at(const Rational& eps) const { return value_at_lo + slope * (eps - eps_lo); }

  bool operator==(const ProfilePiece&) const = default;
};

struct ScaleResult {
  Rational best_epsilon;
  Rational best_cost;
  Rational eps_max;
  std::size_t event_count = 0;
  std::vector<ProfilePiece> profile;

  bool operator==(const ScaleResult&) const = default;
};

/**
 * Applies a deterministic permutation to the deltas inside each equal-epsilon
 * event batch when set. The final sweep state is order-independent; the hook
 * exists so tests can assert exactly that.
 */
struct SweepOptions {
  std::optional<std::uint64_t> shuffle_seed;
};

/** Moves boundary j to t_j + j*eps; pitches unchanged. Throws BadEpsilon when eps < 0. */
SegmentMelody scale_segment(const SegmentMelody& q, const Rational& eps);

/** Moves note j (1-based) to t_j + (2j-1)/2*eps. Throws BadEpsilon when eps < 0. */
PointMelody scale_points(const PointMelody& q, const Rational& eps);

/**
 * All eps in (0, eps_max] at which an interior scaled query boundary crosses
 * an interior reference boundary, merged into one nondecreasing sequence,
 * eps_max = (duration(r) - duration(q)) / segment_count(q).
 */
std::vector<SweepEvent> area_event_schedule(const SegmentMelody& r, const SegmentMelody& q);

/**
 * Minimizes the area between r and the extended eps-scaled q over
 * [0, eps_max]. The area is continuous piecewise linear; the minimum is
 * attained at an event or an endpoint, ties resolve to the smallest eps.
 */
ScaleResult min_area_scaling(const SegmentMelody& r, const SegmentMelody& q,
                             const SweepOptions& options = {});

/** eps at which the last query note reaches the last reference note; may be <= 0. */
Rational default_matching_eps_max(const PointMelody& r, const PointMelody& q);

/**
 * All admitted matching events in (0, eps_max]: every Type1 and Type2
 * candidate, and the Type3 candidates whose query note is unmatched when the
 * candidate is reached. Each event carries its pair deltas.
 */
std::vector<SweepEvent> matching_event_schedule(const PointMelody& r, const PointMelody& q,
                                                const Rational& eps_max);

/**
 * Minimizes the t-monotone matching cost between r and the eps-scaled q over
 * [0, eps_max] (default eps_max = default_matching_eps_max, clamped to the
 * single point 0 when that is not positive). The cost is piecewise linear
 * with jumps at Type2/Type3 events; the returned minimum is taken over the
 * definitional cost at 0, both one-sided values at every event, the value at
 * eps_max, and the definitional cost at events where several re-partnering
 * choices tie at one eps. Ties resolve to the smallest eps.
 */
ScaleResult min_matching_scaling(const PointMelody& r, const PointMelody& q,
                                 std::optional<Rational> eps_max = {},
                                 const SweepOptions& options = {});

/** The piecewise description of the area cost over [0, eps_max]. */
std::vector<ProfilePiece> cost_profile(const SegmentMelody& r, const SegmentMelody& q);

/** The piecewise description of the matching cost over [0, eps_max]. */
std::vector<ProfilePiece> cost_profile(const PointMelody& r, const PointMelody& q,
                                       std::optional<Rational> eps_max = {});

}  // namespace melogeo
