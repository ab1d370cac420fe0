#include "doctest.h"

#include <functional>

#include "melogeo/measures.hpp"

using namespace melogeo;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("extend_query prolongs the final pitch") {
  SegmentMelody q = make_segment_melody({0, 1, 2}, {10, 0});
  SegmentMelody ext = extend_query(q, 4);
  CHECK(ext.times == std::vector<Rational>{0, 1, 4});
  CHECK(ext.pitches == q.pitches);
  CHECK(extend_query(q, 2) == q);
  CHECK(code_of([&] { extend_query(q, 1); }) == ErrorCode::QueryLongerThanReference);
}

TEST_CASE("area between step functions") {
  SegmentMelody r = make_segment_melody({0, 1, 4}, {0, 10});
  SegmentMelody q = extend_query(make_segment_melody({0, 1, 2}, {10, 0}), 4);
  CHECK(area_between(r, q) == 40);

  SegmentMelody r2 = make_segment_melody({0, 2, 4}, {60, 62});
  SegmentMelody q2 = make_segment_melody({0, 4}, {61});
  CHECK(area_between(r2, q2) == 4);

  CHECK(area_between(r, r) == 0);
  CHECK(code_of([&] { area_between(r, make_segment_melody({0, 1}, {0})); }) ==
        ErrorCode::DurationMismatch);
}

TEST_CASE("area is symmetric and respects rational boundaries") {
  SegmentMelody a = make_segment_melody({0, Rational(1, 3), 2}, {Rational(5, 2), 1});
  SegmentMelody b = make_segment_melody({0, Rational(3, 2), 2}, {0, 3});
  CHECK(area_between(a, b) == area_between(b, a));
  // (5/2)*(1/3) + 1*(7/6) + 2*(1/2) = 5/6 + 7/6 + 1 = 3
  CHECK(area_between(a, b) == 3);
}

TEST_CASE("matching pairs every reference note in phase 1") {
  PointMelody r = make_point_melody({{1, 60}, {3, 64}});
  PointMelody q = make_point_melody({{2, 62}});
  Matching m = t_monotone_matching(r, q);
  CHECK(m.cost == 6);
  CHECK(m.a_minus == std::vector<IndexPair>{{0, 0}});
  CHECK(m.a_plus == std::vector<IndexPair>{{1, 0}});
}

TEST_CASE("matching adds phase-2 pairs for unmatched query notes") {
  PointMelody r = make_point_melody({{2, 0}});
  PointMelody q = make_point_melody({{1, 0}, {3, 0}});
  Matching m = t_monotone_matching(r, q);
  CHECK(m.cost == 2);
  // Exact-midpoint pitch tie resolves to the earlier query note; the late
  // query note then picks up the lone reference note in phase 2.
  CHECK(m.a_plus == std::vector<IndexPair>{{0, 0}});
  CHECK(m.a_minus == std::vector<IndexPair>{{0, 1}});
}

TEST_CASE("exact midpoint prefers the l1-nearest query note") {
  PointMelody r = make_point_melody({{2, 10}});
  PointMelody q = make_point_melody({{1, 0}, {3, 9}});
  Matching m = t_monotone_matching(r, q);
  // Times tie at the midpoint; pitch 9 is closer than pitch 0.
  CHECK(m.a_minus == std::vector<IndexPair>{{0, 1}});
  CHECK(m.cost == (1 + 1) + (1 + 10));
}

TEST_CASE("reference notes outside the query span clamp to the ends") {
  PointMelody r = make_point_melody({{0, 5}, {10, 7}});
  PointMelody q = make_point_melody({{2, 5}, {4, 7}});
  Matching m = t_monotone_matching(r, q);
  CHECK(m.a_minus == std::vector<IndexPair>{{0, 0}});
  CHECK(m.a_plus == std::vector<IndexPair>{{1, 1}});
  CHECK(m.cost == 2 + 6);
}

TEST_CASE("matching a note at a query time costs only the pitch gap") {
  PointMelody r = make_point_melody({{2, 60}});
  PointMelody q = make_point_melody({{1, 59}, {2, 64}, {3, 59}});
  Matching m = t_monotone_matching(r, q);
  // x == t_1 wins even though both neighbours are nearer in pitch.
  REQUIRE(m.pair_count() == 3);
  CHECK(m.a_plus == std::vector<IndexPair>{{0, 0}, {0, 1}});
  CHECK(m.a_minus == std::vector<IndexPair>{{0, 2}});
  CHECK(m.cost == (1 + 1) + 4 + (1 + 1));
}

TEST_CASE("matching cost is zero iff the melodies coincide") {
  PointMelody r = make_point_melody({{1, 60}, {2, 62}, {5, 60}});
  Matching m = t_monotone_matching(r, r);
  CHECK(m.cost == 0);
  CHECK(m.a_minus.empty());
  CHECK(m.a_plus == std::vector<IndexPair>{{0, 0}, {1, 1}, {2, 2}});
}

TEST_CASE("every reference note gets exactly one phase-1 pair") {
  PointMelody r = make_point_melody({{0, 1}, {1, 2}, {4, 3}, {9, 4}});
  PointMelody q = make_point_melody({{2, 1}, {3, 5}});
  Matching m = t_monotone_matching(r, q);
  std::vector<int> seen(r.size(), 0);
  for (const auto& s : {m.a_minus, m.a_plus}) {
    for (const IndexPair& pr : s) ++seen[pr.first];
  }
  for (int c : seen) CHECK(c >= 1);
  CHECK(m.pair_count() >= r.size());
  CHECK(m.pair_count() <= r.size() + q.size());
}
