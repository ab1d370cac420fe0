#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "melogeo/compression.hpp"
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

PointMelody subset_melody(const PointMelody& r, const std::vector<std::size_t>& kept) {
  std::vector<Note> notes;
  for (const std::size_t i : kept) notes.push_back(r.notes[i]);
  return make_point_melody(std::move(notes));
}

std::vector<std::size_t> random_subset(testing::Rng& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(k);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

TEST_CASE("pairwise cost table on three notes") {
  const PointMelody r = make_point_melody({{0, 0}, {1, 0}, {2, 10}});
  const PairwiseCostTable table = build_pairwise_costs(r);
  REQUIRE(table.w.size() == 5);
  CHECK(table.w[0][1] == 0);
  CHECK(table.w[0][2] == 1);
  CHECK(table.w[0][3] == 23);
  CHECK(table.w[1][2] == 0);
  // the middle note sits exactly between its neighbors and takes the cheap side
  CHECK(table.w[1][3] == 1);
  CHECK(table.w[2][3] == 0);
  CHECK(table.w[1][4] == 13);
  CHECK(table.w[2][4] == 11);
  CHECK(table.w[3][4] == 0);
}

TEST_CASE("compress_points keeps the cheap notes") {
  const PointMelody r = make_point_melody({{0, 0}, {1, 0}, {2, 10}});

  const PointCompression two = compress_points(r, 2);
  CHECK(two.kept == std::vector<std::size_t>{0, 2});
  CHECK(two.cost == 1);
  CHECK(two.melody == make_point_melody({{0, 0}, {2, 10}}));

  const PointCompression one = compress_points(r, 1);
  CHECK(one.kept == std::vector<std::size_t>{1});
  CHECK(one.cost == 12);

  const PointCompression all = compress_points(r, 3);
  CHECK(all.kept == std::vector<std::size_t>{0, 1, 2});
  CHECK(all.cost == 0);
  CHECK(all.melody == r);

  CHECK(code_of([&] { compress_points(r, 0); }) == ErrorCode::BadK);
  CHECK(code_of([&] { compress_points(r, 4); }) == ErrorCode::BadK);
}

TEST_CASE("compress_points breaks cost ties towards earlier notes") {
  const PointMelody r = make_point_melody({{0, 0}, {1, 5}, {2, 0}});
  const PointCompression one = compress_points(r, 1);
  CHECK(one.kept == std::vector<std::size_t>{0});
  CHECK(one.cost == 8);
  CHECK(t_monotone_matching(r, subset_melody(r, {2})).cost == 8);
}

TEST_CASE("compress_points beats sampled subsets") {
  testing::Rng rng(45);
  for (int iter = 0; iter < 80; ++iter) {
    const PointMelody r = testing::random_point_melody(rng, 8, 10);
    const std::size_t n = r.size();
    for (std::size_t k = 1; k <= n; ++k) {
      const PointCompression res = compress_points(r, k);
      REQUIRE(res.kept.size() == k);
      CHECK(std::is_sorted(res.kept.begin(), res.kept.end()));
      CHECK(t_monotone_matching(r, res.melody).cost == res.cost);
      for (int probe = 0; probe < 6; ++probe) {
        const std::vector<std::size_t> other = random_subset(rng, n, k);
        const Rational other_cost = t_monotone_matching(r, subset_melody(r, other)).cost;
        CHECK(res.cost <= other_cost);
        if (other_cost == res.cost) CHECK(res.kept <= other);
      }
    }
  }
}

TEST_CASE("compress_segments merges the flat prefix") {
  const SegmentMelody r = make_segment_melody({0, 1, 2, 3}, {0, 0, 10});
  const SegmentCompression res = compress_segments(r, 2);
  CHECK(res.melody == make_segment_melody({0, 2, 3}, {0, 10}));
  CHECK(res.cost == 0);
}

TEST_CASE("compress_segments pays for an interior spike") {
  const SegmentMelody r = make_segment_melody({0, 1, 2, 3}, {0, 10, 0});

  const SegmentCompression two = compress_segments(r, 2);
  CHECK(two.cost == 10);
  // several minimizers; extends win ties and the smallest pitch wins
  CHECK(two.melody == make_segment_melody({0, 1, 3}, {0, 0}));

  const SegmentCompression one = compress_segments(r, 1);
  CHECK(one.cost == 10);
  CHECK(one.melody == make_segment_melody({0, 3}, {0}));

  const SegmentCompression all = compress_segments(r, 3);
  CHECK(all.cost == 0);
  CHECK(all.melody == r);

  CHECK(code_of([&] { compress_segments(r, 0); }) == ErrorCode::BadK);
  CHECK(code_of([&] { compress_segments(r, 4); }) == ErrorCode::BadK);
}

TEST_CASE("compress_segments cost falls as k grows") {
  testing::Rng rng(46);
  for (int iter = 0; iter < 80; ++iter) {
    const SegmentMelody r = testing::random_segment_melody(rng, 8, 10);
    const std::size_t n = r.segment_count();
    Rational prev_cost = -1;
    for (std::size_t k = 1; k <= n; ++k) {
      const SegmentCompression res = compress_segments(r, k);
      CHECK(res.melody.segment_count() == k);
      CHECK(res.melody.duration() == r.duration());
      CHECK(area_between(r, res.melody) == res.cost);
      for (const Rational& t : res.melody.times)
        CHECK(std::find(r.times.begin(), r.times.end(), t) != r.times.end());
      for (const Rational& p : res.melody.pitches)
        CHECK(std::find(r.pitches.begin(), r.pitches.end(), p) != r.pitches.end());
      if (k > 1) CHECK(res.cost <= prev_cost);
      prev_cost = res.cost;
    }
    CHECK(prev_cost == 0);
  }
}
