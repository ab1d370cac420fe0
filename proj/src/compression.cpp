#include "melogeo/compression.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace melogeo {

namespace {

constexpr std::size_t kMemoryBudgetBytes = 1'500'000'000;
constexpr std::size_t kBytesPerCell = 64;  // rough arbitrary-precision rational footprint

using Cell = std::optional<Rational>;

Cell lift(const Cell& c, const Rational& add) {
  if (!c) return std::nullopt;
  return *c + add;
}

void keep_min(Cell& dst, const Cell& v) {
  if (v && (!dst || *v < *dst)) dst = v;
}

}  // namespace

PairwiseCostTable build_pairwise_costs(const PointMelody& r) {
  validate(r);
  const std::size_t n = r.size();
  const std::size_t nn = n + 2;
  if (3 * nn * nn > kMemoryBudgetBytes / kBytesPerCell)
    fail(ErrorCode::TooLarge, "pairwise cost table for " + std::to_string(n) + " notes");

  // 1-based copies; index 0 stays unused.
  std::vector<Rational> time1(n + 1);
  for (std::size_t h = 1; h <= n; ++h) time1[h] = r.notes[h - 1].time;
  auto d1 = [&](std::size_t h, std::size_t c) {
    const Note& a = r.notes[h - 1];
    const Note& b = r.notes[c - 1];
    return abs(a.time - b.time) + abs(a.pitch - b.pitch);
  };

  // prefix[c][h] = sum of d1(h', c) over h' = 1..h
  std::vector<std::vector<Rational>> prefix(n + 1, std::vector<Rational>(n + 1));
  for (std::size_t c = 1; c <= n; ++c)
    for (std::size_t h = 1; h <= n; ++h) prefix[c][h] = prefix[c][h - 1] + d1(h, c);

  PairwiseCostTable table;
  table.w.assign(nn, std::vector<Rational>(nn));
  for (std::size_t b = 1; b <= n; ++b) table.w[0][b] = prefix[b][b - 1];
  for (std::size_t a = 1; a <= n; ++a) table.w[a][n + 1] = prefix[a][n] - prefix[a][a];
  for (std::size_t a = 1; a <= n; ++a) {
    for (std::size_t b = a + 2; b <= n; ++b) {
      const Rational mid = (time1[a] + time1[b]) / 2;
      const auto lo = time1.begin() + static_cast<std::ptrdiff_t>(a) + 1;
      const auto hi = time1.begin() + static_cast<std::ptrdiff_t>(b);
      const auto first_ge =
          static_cast<std::size_t>(std::lower_bound(lo, hi, mid) - time1.begin());
      const auto first_gt =
          static_cast<std::size_t>(std::upper_bound(lo, hi, mid) - time1.begin());
      Rational cost = (prefix[a][first_ge - 1] - prefix[a][a]) +
                      (prefix[b][b - 1] - prefix[b][first_gt - 1]);
      // at most one note sits exactly on the midpoint; it goes to the cheaper side
      if (first_ge < first_gt) cost += std::min(d1(first_ge, a), d1(first_ge, b));
      table.w[a][b] = std::move(cost);
    }
  }
  return table;
}

PointCompression compress_points(const PointMelody& r, std::size_t k) {
  validate(r);
  const std::size_t n = r.size();
  if (k == 0 || k > n)
    fail(ErrorCode::BadK, "k = " + std::to_string(k) + " with " + std::to_string(n) + " notes");
  const std::vector<std::vector<Rational>>& w = build_pairwise_costs(r).w;

  // best[j][i]: j notes kept, the last one i. suffix[j][i]: i kept, j more
  // kept after it, every note right of i covered.
  std::vector<std::vector<Cell>> best(k + 1, std::vector<Cell>(n + 1));
  for (std::size_t i = 1; i <= n; ++i) best[1][i] = w[0][i];
  for (std::size_t j = 2; j <= k; ++j)
    for (std::size_t i = j; i <= n; ++i)
      for (std::size_t l = j - 1; l < i; ++l) keep_min(best[j][i], lift(best[j - 1][l], w[l][i]));

  std::vector<std::vector<Cell>> suffix(k, std::vector<Cell>(n + 1));
  for (std::size_t i = 1; i <= n; ++i) suffix[0][i] = w[i][n + 1];
  for (std::size_t j = 1; j < k; ++j)
    for (std::size_t i = 1; i + j <= n; ++i)
      for (std::size_t l = i + 1; l + j <= n + 1; ++l)
        keep_min(suffix[j][i], lift(suffix[j - 1][l], w[i][l]));

  Cell forward;
  Cell backward;
  for (std::size_t i = k; i <= n; ++i) keep_min(forward, lift(best[k][i], w[i][n + 1]));
  for (std::size_t i = 1; i + k <= n + 1; ++i)
    keep_min(backward, lift(suffix[k - 1][i], w[0][i]));
  if (!forward || !backward || *forward != *backward)
    fail(ErrorCode::Internal, "prefix and suffix compressions disagree");

  PointCompression out;
  out.cost = *forward;
  // Forward greedy over the suffix table yields the lexicographically
  // smallest minimizer.
  Rational acc = 0;
  std::size_t prev = 0;
  for (std::size_t step = 1; step <= k; ++step) {
    const std::size_t rem = k - step;
    bool found = false;
    for (std::size_t l = prev + 1; l + rem <= n; ++l) {
      if (!suffix[rem][l]) continue;
      if (acc + w[prev][l] + *suffix[rem][l] != out.cost) continue;
      acc += w[prev][l];
      out.kept.push_back(l - 1);
      prev = l;
      found = true;
      break;
    }
    if (!found) fail(ErrorCode::Internal, "subset reconstruction lost the optimum");
  }

  std::vector<Note> notes;
  notes.reserve(k);
  for (const std::size_t i : out.kept) notes.push_back(r.notes[i]);
  out.melody = make_point_melody(std::move(notes));
  if (t_monotone_matching(r, out.melody).cost != out.cost)
    fail(ErrorCode::Internal, "subset cost disagrees with its matching");
  return out;
}

SegmentCompression compress_segments(const SegmentMelody& r, std::size_t k) {
  validate(r);
  const std::size_t n = r.segment_count();
  if (k == 0 || k > n)
    fail(ErrorCode::BadK, "k = " + std::to_string(k) + " with " + std::to_string(n) + " segments");

  std::vector<Rational> pitches = r.pitches;
  std::sort(pitches.begin(), pitches.end());
  pitches.erase(std::unique(pitches.begin(), pitches.end()), pitches.end());
  const std::size_t rho = pitches.size();
  if (n * (k + 1) * rho > kMemoryBudgetBytes)
    fail(ErrorCode::TooLarge, "branch table for " + std::to_string(n) + " segments");

  auto seg_cost = [&](std::size_t i, std::size_t p) {
    return abs(pitches[p] - r.pitches[i]) * (r.times[i + 1] - r.times[i]);
  };

  // reached[j][p]: segments left of boundary i covered by j query segments,
  // the last one still open with pitch p.
  std::vector<std::vector<Cell>> reached(k + 1, std::vector<Cell>(rho));
  for (std::size_t p = 0; p < rho; ++p) reached[1][p] = seg_cost(0, p);

  enum : std::uint8_t { kExtend = 0, kRestart = 1 };
  std::vector<std::uint8_t> branch(n * (k + 1) * rho, kExtend);
  std::vector<std::size_t> argmin(n * (k + 1), 0);
  auto branch_at = [&](std::size_t i, std::size_t j, std::size_t p) -> std::uint8_t& {
    return branch[(i * (k + 1) + j) * rho + p];
  };

  for (std::size_t i = 1; i < n; ++i) {
    // closed[j]: as reached[j] but with the last query segment closed at
    // boundary i; pitches ascend, so the first argmin is the smallest pitch.
    std::vector<Cell> closed(k + 1);
    for (std::size_t j = 1; j <= k; ++j) {
      for (std::size_t p = 0; p < rho; ++p) {
        const Cell& c = reached[j][p];
        if (c && (!closed[j] || *c < *closed[j])) {
          closed[j] = c;
          argmin[i * (k + 1) + j] = p;
        }
      }
    }
    for (std::size_t j = 1; j <= k; ++j) {
      const Cell restart = j >= 2 ? closed[j - 1] : Cell{};
      for (std::size_t p = 0; p < rho; ++p) {
        Cell base = reached[j][p];  // segment extends through boundary i
        if (restart && (!base || *restart < *base)) {
          base = restart;
          branch_at(i, j, p) = kRestart;
        }
        reached[j][p] = lift(base, seg_cost(i, p));
      }
    }
  }

  Cell total;
  std::size_t best_p = 0;
  for (std::size_t p = 0; p < rho; ++p) {
    const Cell& c = reached[k][p];
    if (c && (!total || *c < *total)) {
      total = c;
      best_p = p;
    }
  }
  if (!total) fail(ErrorCode::Internal, "no feasible segment compression");

  std::vector<Rational> out_times{r.duration()};
  std::vector<Rational> out_pitches;
  std::size_t j = k;
  std::size_t p = best_p;
  for (std::size_t i = n; i-- > 1;) {
    if (branch_at(i, j, p) == kRestart) {
      out_pitches.push_back(pitches[p]);
      out_times.push_back(r.times[i]);
      --j;
      p = argmin[i * (k + 1) + j];
    }
  }
  if (j != 1) fail(ErrorCode::Internal, "segment reconstruction lost the optimum");
  out_pitches.push_back(pitches[p]);
  out_times.push_back(0);
  std::reverse(out_times.begin(), out_times.end());
  std::reverse(out_pitches.begin(), out_pitches.end());

  SegmentCompression out;
  out.melody = make_segment_melody(std::move(out_times), std::move(out_pitches));
  out.cost = *total;
  if (area_between(r, out.melody) != out.cost)
    fail(ErrorCode::Internal, "segment compression cost disagrees with its area");
  return out;
}

}  // namespace melogeo
