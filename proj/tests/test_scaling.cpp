#include <functional>
#include <optional>
#include <vector>

#include "doctest.h"
#include "melogeo/scaling.hpp"
#include "support.hpp"

using namespace melogeo;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

Rational definitional_cost(const PointMelody& r, const PointMelody& q, const Rational& eps) {
  return t_monotone_matching(r, scale_points(q, eps)).cost;
}

}  // namespace

TEST_CASE("scale_segment moves boundary j by j times eps") {
  const SegmentMelody q = make_segment_melody({0, 1, 2}, {5, 7});
  const SegmentMelody scaled = scale_segment(q, Rational(1, 2));
  CHECK(scaled.times == std::vector<Rational>{0, Rational(3, 2), 3});
  CHECK(scaled.pitches == q.pitches);
  CHECK(scale_segment(q, 0) == q);
  CHECK(code_of([&] { scale_segment(q, -1); }) == ErrorCode::BadEpsilon);
}

TEST_CASE("scale_points moves note j by half of 2j-1 times eps") {
  const PointMelody q = make_point_melody({{1, 3}, {3, 4}});
  const PointMelody scaled = scale_points(q, 2);
  CHECK(scaled.notes == std::vector<Note>{{2, 3}, {6, 4}});
  CHECK(scale_points(q, 0) == q);
  CHECK(code_of([&] { scale_points(q, Rational(-1, 3)); }) == ErrorCode::BadEpsilon);
}

TEST_CASE("scaling commutes with taking segment midpoints") {
  testing::Rng rng(41);
  for (int iter = 0; iter < 50; ++iter) {
    const SegmentMelody s = testing::random_segment_melody(rng, 6, 12);
    const Rational eps = testing::rand_gap(rng, 5);
    CHECK(segment_to_point(scale_segment(s, eps)) == scale_points(segment_to_point(s), eps));
  }
}

TEST_CASE("area sweep without events is a single falling piece") {
  const SegmentMelody r = make_segment_melody({0, 1, 4}, {0, 10});
  const SegmentMelody q = make_segment_melody({0, 1, 2}, {10, 0});
  const ScaleResult res = min_area_scaling(r, q);
  CHECK(res.eps_max == 1);
  CHECK(res.best_epsilon == 1);
  CHECK(res.best_cost == 30);
  CHECK(res.event_count == 0);
  CHECK(res.profile == std::vector<ProfilePiece>{{0, 1, 40, -10}});
  CHECK(area_event_schedule(r, q).empty());
}

TEST_CASE("area sweep crossing one reference boundary") {
  const SegmentMelody r = make_segment_melody({0, 1, 2, 3, 8}, {0, 10, 0, 5});
  const SegmentMelody q = make_segment_melody({0, 2, 4}, {10, 0});
  const ScaleResult res = min_area_scaling(r, q);
  CHECK(res.eps_max == 2);
  CHECK(res.best_epsilon == 0);
  CHECK(res.best_cost == 35);
  CHECK(res.event_count == 1);
  CHECK(res.profile == std::vector<ProfilePiece>{{0, 1, 35, 10}, {1, 2, 45, 0}});

  const std::vector<SweepEvent> schedule = area_event_schedule(r, q);
  REQUIRE(schedule.size() == 1);
  const SweepEvent expected{1, EventKind::AreaBoundaryCross, 3, 1, 0, 5, -10, {}};
  CHECK(schedule[0] == expected);
}

TEST_CASE("area sweep with a single query segment") {
  const SegmentMelody r = make_segment_melody({0, 2, 4}, {60, 62});

  SUBCASE("equal durations pin eps to zero") {
    const ScaleResult res = min_area_scaling(r, make_segment_melody({0, 4}, {61}));
    CHECK(res.eps_max == 0);
    CHECK(res.best_epsilon == 0);
    CHECK(res.best_cost == 4);
    CHECK(res.profile == std::vector<ProfilePiece>{{0, 0, 4, 0}});
  }

  SUBCASE("a shorter query yields a constant profile") {
    const ScaleResult res = min_area_scaling(r, make_segment_melody({0, 3}, {61}));
    CHECK(res.eps_max == 1);
    CHECK(res.best_epsilon == 0);
    CHECK(res.best_cost == 4);
    CHECK(res.profile == std::vector<ProfilePiece>{{0, 1, 4, 0}});
  }
}

TEST_CASE("area sweep rejects a query longer than the reference") {
  const SegmentMelody r = make_segment_melody({0, 2}, {60});
  const SegmentMelody q = make_segment_melody({0, 3}, {60});
  CHECK(code_of([&] { min_area_scaling(r, q); }) == ErrorCode::QueryLongerThanReference);
}

TEST_CASE("matching sweep over three reference notes and two query notes") {
  const PointMelody r = make_point_melody({{1, 0}, {3, 0}, {5, 0}});
  const PointMelody q = make_point_melody({{1, 0}, {2, 0}});
  REQUIRE(default_matching_eps_max(r, q) == 2);

  const ScaleResult res = min_matching_scaling(r, q);
  CHECK(res.eps_max == 2);
  CHECK(res.best_epsilon == 2);
  CHECK(res.best_cost == 2);
  CHECK(res.event_count == 3);
  CHECK(res.profile == std::vector<ProfilePiece>{{0, Rational(2, 3), 4, Rational(-5, 2)},
                                                 {Rational(2, 3), Rational(3, 2), Rational(7, 3),
                                                  Rational(1, 2)},
                                                 {Rational(3, 2), 2, Rational(11, 4),
                                                  Rational(-3, 2)}});

  const std::vector<SweepEvent> schedule = matching_event_schedule(r, q, res.eps_max);
  const std::vector<SweepEvent> expected{
      {Rational(2, 3), EventKind::Type1, 1, 1, 0, 0, 3,
       {{{1, 1}, PairSet::APlus, false}, {{1, 1}, PairSet::AMinus, true}}},
      {Rational(3, 2), EventKind::Type2, 1, 0, 0, 0, -2,
       {{{1, 1}, PairSet::AMinus, false}, {{1, 0}, PairSet::APlus, true}}},
      {2, EventKind::Type1, 2, 1, 0, 0, 3,
       {{{2, 1}, PairSet::APlus, false}, {{2, 1}, PairSet::AMinus, true}}},
  };
  CHECK(schedule == expected);
}

TEST_CASE("matching sweep truncated by an explicit eps_max") {
  const PointMelody r = make_point_melody({{1, 0}, {3, 0}, {5, 0}});
  const PointMelody q = make_point_melody({{1, 0}, {2, 0}});
  const ScaleResult res = min_matching_scaling(r, q, Rational(1));
  CHECK(res.eps_max == 1);
  CHECK(res.best_epsilon == Rational(2, 3));
  CHECK(res.best_cost == Rational(7, 3));
  CHECK(res.event_count == 1);
  CHECK(res.profile == std::vector<ProfilePiece>{{0, Rational(2, 3), 4, Rational(-5, 2)},
                                                 {Rational(2, 3), 1, Rational(7, 3),
                                                  Rational(1, 2)}});
  CHECK(code_of([&] { min_matching_scaling(r, q, Rational(0)); }) == ErrorCode::BadEpsilon);
  CHECK(code_of([&] { min_matching_scaling(r, q, Rational(-1)); }) == ErrorCode::BadEpsilon);
}

TEST_CASE("matching sweep with a re-partnering jump") {
  // At eps = 5/2 the bisector of the scaled query notes reaches the first
  // reference note; its pair moves to the nearer, cheaper query note and the
  // cost drops from 67/4 to 11.
  const PointMelody r = make_point_melody({{3, 0}, {10, 0}});
  const PointMelody q = make_point_melody({{0, 0}, {1, 4}});
  REQUIRE(default_matching_eps_max(r, q) == 6);

  const ScaleResult res = min_matching_scaling(r, q);
  CHECK(res.eps_max == 6);
  CHECK(res.best_epsilon == 6);
  CHECK(res.best_cost == 4);
  CHECK(res.event_count == 4);
  REQUIRE(res.profile.size() == 3);
  CHECK(res.profile[0] == ProfilePiece{0, Rational(4, 3), 22, Rational(-7, 2)});
  CHECK(res.profile[1] == ProfilePiece{Rational(4, 3), Rational(5, 2), Rational(52, 3),
                                       Rational(-1, 2)});
  CHECK(res.profile[2] == ProfilePiece{Rational(5, 2), 6, 11, -2});
  CHECK(res.profile[1].value_at(Rational(5, 2)) == Rational(67, 4));
  CHECK(definitional_cost(r, q, Rational(5, 2)) == 11);

  const std::vector<SweepEvent> schedule = matching_event_schedule(r, q, res.eps_max);
  REQUIRE(schedule.size() == 4);
  CHECK(schedule[0] == SweepEvent{Rational(4, 3), EventKind::Type1, 0, 1, 0, 0, 3,
                                  {{{0, 1}, PairSet::APlus, false},
                                   {{0, 1}, PairSet::AMinus, true}}});
  // The leaving pair's query note keeps another partner and the reference
  // note's phase-2 pair is absorbed as the new phase-1 pair: one delta only.
  CHECK(schedule[1] == SweepEvent{Rational(5, 2), EventKind::Type2, 0, 0, 0, 0, Rational(-3, 2),
                                  {{{0, 1}, PairSet::AMinus, false}}});
  CHECK(schedule[2] == SweepEvent{6, EventKind::Type1, 0, 0, 0, 0, 1,
                                  {{{0, 0}, PairSet::APlus, false},
                                   {{0, 0}, PairSet::AMinus, true}}});
  CHECK(schedule[3] == SweepEvent{6, EventKind::Type1, 1, 1, 0, 0, 3,
                                  {{{1, 1}, PairSet::APlus, false},
                                   {{1, 1}, PairSet::AMinus, true}}});
}

TEST_CASE("matching sweep degenerates when the query ends at or beyond the reference") {
  const PointMelody r = make_point_melody({{1, 5}});
  const PointMelody q = make_point_melody({{0, 0}, {4, 7}});
  REQUIRE(default_matching_eps_max(r, q) < 0);

  const ScaleResult res = min_matching_scaling(r, q);
  CHECK(res.eps_max == 0);
  CHECK(res.best_epsilon == 0);
  CHECK(res.best_cost == 11);
  CHECK(res.profile == std::vector<ProfilePiece>{{0, 0, 11, 0}});

  // An explicit positive eps_max still sweeps such a pair.
  const ScaleResult wide = min_matching_scaling(r, q, Rational(2));
  CHECK(wide.eps_max == 2);
  CHECK(wide.profile.back().eps_hi == 2);
}

TEST_CASE("matching profile equals the definitional cost inside every piece") {
  testing::Rng rng(42);
  for (int iter = 0; iter < 120; ++iter) {
    const PointMelody r = testing::random_point_melody(rng, 6, 8);
    const PointMelody q = testing::random_point_melody(rng, 4, 8);
    const ScaleResult res = min_matching_scaling(r, q);
    REQUIRE(!res.profile.empty());
    CHECK(res.profile.front().eps_lo == 0);
    CHECK(res.profile.back().eps_hi == res.eps_max);
    for (std::size_t k = 0; k < res.profile.size(); ++k) {
      const ProfilePiece& piece = res.profile[k];
      if (k > 0) CHECK(piece.eps_lo == res.profile[k - 1].eps_hi);
      const Rational mid = (piece.eps_lo + piece.eps_hi) / 2;
      const Rational def = definitional_cost(r, q, mid);
      CHECK(piece.value_at(mid) == def);
      CHECK(res.best_cost <= def);
    }
  }
}

TEST_CASE("area profile equals the from-scratch area everywhere") {
  testing::Rng rng(43);
  for (int iter = 0; iter < 120; ++iter) {
    SegmentMelody r = testing::random_segment_melody(rng, 6, 12);
    SegmentMelody q = testing::random_segment_melody(rng, 4, 12);
    if (q.duration() > r.duration()) std::swap(r, q);
    const Rational end = r.duration();
    const auto area_at = [&](const Rational& eps) {
      return area_between(r, extend_query(scale_segment(q, eps), end));
    };

    const ScaleResult res = min_area_scaling(r, q);
    REQUIRE(!res.profile.empty());
    CHECK(res.profile.front().eps_lo == 0);
    CHECK(res.profile.back().eps_hi == res.eps_max);
    for (std::size_t k = 0; k < res.profile.size(); ++k) {
      const ProfilePiece& piece = res.profile[k];
      CHECK(piece.value_at(piece.eps_lo) == area_at(piece.eps_lo));
      CHECK(piece.value_at(piece.eps_hi) == area_at(piece.eps_hi));
      CHECK(piece.value_at((piece.eps_lo + piece.eps_hi) / 2) ==
            area_at((piece.eps_lo + piece.eps_hi) / 2));
      if (k > 0) {
        CHECK(piece.eps_lo == res.profile[k - 1].eps_hi);
        CHECK(piece.value_at_lo == res.profile[k - 1].value_at(piece.eps_lo));
      }
    }
    CHECK(res.best_cost == area_at(res.best_epsilon));
  }
}

TEST_CASE("equal-epsilon batches are order-independent") {
  const SweepOptions plain{};
  const std::vector<SweepOptions> shuffled{{1}, {2}, {3}};

  SUBCASE("on the frozen jump example") {
    const PointMelody r = make_point_melody({{3, 0}, {10, 0}});
    const PointMelody q = make_point_melody({{0, 0}, {1, 4}});
    const ScaleResult base = min_matching_scaling(r, q, {}, plain);
    for (const SweepOptions& opt : shuffled)
      CHECK(min_matching_scaling(r, q, {}, opt) == base);
  }

  SUBCASE("on random integer-time instances") {
    testing::Rng rng(44);
    for (int iter = 0; iter < 60; ++iter) {
      std::vector<Note> rn, qn;
      Rational t = testing::rand_int(rng, 0, 2);
      for (int i = testing::rand_int(rng, 1, 6); i > 0; --i) {
        rn.push_back({t, testing::rand_int(rng, 0, 4)});
        t += testing::rand_int(rng, 1, 3);
      }
      t = testing::rand_int(rng, 0, 2);
      for (int j = testing::rand_int(rng, 1, 4); j > 0; --j) {
        qn.push_back({t, testing::rand_int(rng, 0, 4)});
        t += testing::rand_int(rng, 1, 3);
      }
      const PointMelody r = make_point_melody(std::move(rn));
      const PointMelody q = make_point_melody(std::move(qn));
      const ScaleResult base = min_matching_scaling(r, q, {}, plain);
      for (const SweepOptions& opt : shuffled)
        CHECK(min_matching_scaling(r, q, {}, opt) == base);

      SegmentMelody rs = testing::random_segment_melody(rng, 5, 6);
      SegmentMelody qs = testing::random_segment_melody(rng, 4, 6);
      if (qs.duration() > rs.duration()) std::swap(rs, qs);
      const ScaleResult area_base = min_area_scaling(rs, qs, plain);
      for (const SweepOptions& opt : shuffled)
        CHECK(min_area_scaling(rs, qs, opt) == area_base);
    }
  }
}
