#include "melogeo/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace melogeo::oracle {

namespace {

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt out = 1;
  for (std::size_t i = 0; i < k; ++i) {
    out *= BigInt(n - i);
    out /= BigInt(i + 1);
  }
  return out;
}

void guard_enumeration(std::size_t n, std::size_t k, const char* what) {
  if (binomial(n, k) > 10'000'000)
    fail(ErrorCode::TooLarge, std::string(what) + " needs more than 10^7 candidates");
}

/** Visits every k-subset of {0..n-1} in lexicographic order. */
void for_each_subset(std::size_t n, std::size_t k,
                     const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    bool advanced = false;
    for (std::size_t pos = k; pos-- > 0;) {
      if (idx[pos] + (k - pos) < n) {
        ++idx[pos];
        for (std::size_t t = pos + 1; t < k; ++t) idx[t] = idx[t - 1] + 1;
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
}

const Rational& pitch_at(const SegmentMelody& s, const Rational& t) {
  for (std::size_t i = 0; i + 1 < s.times.size(); ++i)
    if (s.times[i] <= t && t < s.times[i + 1]) return s.pitches[i];
  return s.pitches.back();
}

/** Integral of |p - r| over [a, b]. */
Rational band_cost(const SegmentMelody& r, const Rational& a, const Rational& b,
                   const Rational& p) {
  Rational total = 0;
  for (std::size_t i = 0; i < r.segment_count(); ++i) {
    const Rational lo = std::max(r.times[i], a);
    const Rational hi = std::min(r.times[i + 1], b);
    if (lo < hi) total += abs(p - r.pitches[i]) * (hi - lo);
  }
  return total;
}

std::vector<Rational> distinct_pitches(const SegmentMelody& r) {
  std::vector<Rational> out = r.pitches;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Rational area_between(const SegmentMelody& r, const SegmentMelody& q) {
  validate(r);
  validate(q);
  if (r.duration() != q.duration())
    fail(ErrorCode::DurationMismatch,
         "durations " + to_string(r.duration()) + " and " + to_string(q.duration()));
  std::vector<Rational> cuts = r.times;
  cuts.insert(cuts.end(), q.times.begin(), q.times.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Rational total = 0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const Rational mid = (cuts[c] + cuts[c + 1]) / 2;
    total += abs(pitch_at(r, mid) - pitch_at(q, mid)) * (cuts[c + 1] - cuts[c]);
  }
  return total;
}

Matching t_monotone_matching(const PointMelody& r, const PointMelody& q) {
  validate(r);
  validate(q);
  const std::vector<Note>& rn = r.notes;
  const std::vector<Note>& qn = q.notes;
  const std::size_t n = rn.size();
  const std::size_t m = qn.size();
  auto l1 = [&](std::size_t i, std::size_t j) {
    return abs(rn[i].time - qn[j].time) + abs(rn[i].pitch - qn[j].pitch);
  };

  std::vector<IndexPair> pairs;
  std::vector<bool> matched(m, false);
  for (std::size_t i = 0; i < n; ++i) {
    const Rational& x = rn[i].time;
    std::size_t j = m;
    if (x < qn.front().time) {
      j = 0;
    } else if (x > qn.back().time) {
      j = m - 1;
    } else {
      for (std::size_t c = 0; c < m && j == m; ++c)
        if (qn[c].time == x) j = c;
      for (std::size_t w = 0; w + 1 < m && j == m; ++w) {
        if (!(qn[w].time < x && x < qn[w + 1].time)) continue;
        const Rational mid = (qn[w].time + qn[w + 1].time) / 2;
        if (x < mid)
          j = w;
        else if (x > mid)
          j = w + 1;
        else
          j = l1(i, w) <= l1(i, w + 1) ? w : w + 1;
      }
    }
    if (j == m) fail(ErrorCode::Internal, "reference note escaped every query window");
    pairs.push_back({i, j});
    matched[j] = true;
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (matched[j]) continue;
    const Rational& t = qn[j].time;
    std::size_t i = n;
    if (t < rn.front().time) {
      i = 0;
    } else if (t > rn.back().time) {
      i = n - 1;
    } else {
      for (std::size_t c = 0; c < n && i == n; ++c)
        if (rn[c].time == t) i = c;
      for (std::size_t w = 0; w + 1 < n && i == n; ++w) {
        if (!(rn[w].time < t && t < rn[w + 1].time)) continue;
        const Rational mid = (rn[w].time + rn[w + 1].time) / 2;
        if (t < mid)
          i = w;
        else if (t > mid)
          i = w + 1;
        else
          i = l1(w, j) <= l1(w + 1, j) ? w : w + 1;
      }
    }
    if (i == n) fail(ErrorCode::Internal, "query note escaped every reference window");
    pairs.push_back({i, j});
  }

  std::sort(pairs.begin(), pairs.end());
  Matching out;
  out.cost = 0;
  for (const IndexPair& pr : pairs) {
    out.cost += l1(pr.first, pr.second);
    (rn[pr.first].time < qn[pr.second].time ? out.a_minus : out.a_plus).push_back(pr);
  }
  return out;
}

ScaleCheck min_area_scaling(const SegmentMelody& r, const SegmentMelody& q) {
  validate(r);
  validate(q);
  const Rational end = r.duration();
  if (q.duration() > end)
    fail(ErrorCode::QueryLongerThanReference,
         "query duration " + to_string(q.duration()) + " exceeds " + to_string(end));
  const std::size_t m = q.segment_count();
  const Rational eps_max = (end - q.duration()) / Rational(m);

  std::vector<Rational> cands{0, eps_max};
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t i = 1; i < r.segment_count(); ++i) {
      Rational e = (r.times[i] - q.times[j]) / Rational(j);
      if (e > 0 && e <= eps_max) cands.push_back(std::move(e));
    }
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  std::optional<ScaleCheck> best;
  for (const Rational& e : cands) {
    Rational cost = oracle::area_between(r, extend_query(scale_segment(q, e), end));
    if (!best || cost < best->best_cost) best = {e, std::move(cost)};
  }
  return *best;
}

ScaleCheck min_matching_scaling(const PointMelody& r, const PointMelody& q,
                                std::optional<Rational> eps_max_opt) {
  validate(r);
  validate(q);
  auto def = [&](const Rational& e) {
    return oracle::t_monotone_matching(r, scale_points(q, e)).cost;
  };

  Rational eps_max;
  if (eps_max_opt) {
    eps_max = *eps_max_opt;
    if (eps_max <= 0) fail(ErrorCode::BadEpsilon, "eps_max must be positive");
  } else {
    eps_max = default_matching_eps_max(r, q);
    if (eps_max <= 0) return {0, def(0)};
  }

  const std::vector<Note>& rn = r.notes;
  const std::vector<Note>& qn = q.notes;
  std::vector<Rational> sol{0, eps_max};
  auto admit = [&](Rational e) {
    if (e > 0 && e <= eps_max) sol.push_back(std::move(e));
  };
  for (std::size_t j = 0; j < qn.size(); ++j) {
    const Rational w = Rational(2 * j + 1);
    for (std::size_t i = 0; i < rn.size(); ++i) {
      admit((rn[i].time - qn[j].time) * 2 / w);
      if (i + 1 < rn.size()) admit(((rn[i].time + rn[i + 1].time) / 2 - qn[j].time) * 2 / w);
      if (j + 1 < qn.size())
        admit((rn[i].time - (qn[j].time + qn[j + 1].time) / 2) / Rational(j + 1));
    }
  }
  std::sort(sol.begin(), sol.end());
  sol.erase(std::unique(sol.begin(), sol.end()), sol.end());

  std::vector<Rational> evals = sol;
  for (std::size_t c = 0; c + 1 < sol.size(); ++c) evals.push_back((sol[c] + sol[c + 1]) / 2);
  std::sort(evals.begin(), evals.end());

  std::optional<ScaleCheck> best;
  for (const Rational& e : evals) {
    Rational cost = def(e);
    if (!best || cost < best->best_cost) best = {e, std::move(cost)};
  }
  return *best;
}

PointCompression compress_points(const PointMelody& r, std::size_t k) {
  validate(r);
  const std::size_t n = r.size();
  if (k == 0 || k > n)
    fail(ErrorCode::BadK, "k = " + std::to_string(k) + " with " + std::to_string(n) + " notes");
  guard_enumeration(n, k, "exhaustive subset search");

  PointCompression out;
  std::optional<Rational> best;
  for_each_subset(n, k, [&](const std::vector<std::size_t>& idx) {
    std::vector<Note> notes;
    notes.reserve(k);
    for (const std::size_t i : idx) notes.push_back(r.notes[i]);
    PointMelody melody = make_point_melody(std::move(notes));
    Rational cost = oracle::t_monotone_matching(r, melody).cost;
    if (!best || cost < *best) {
      best = std::move(cost);
      out.kept = idx;
      out.melody = std::move(melody);
    }
  });
  out.cost = *best;
  return out;
}

SegmentCompression compress_segments(const SegmentMelody& r, std::size_t k, PitchPool pool) {
  validate(r);
  const std::size_t n = r.segment_count();
  if (k == 0 || k > n)
    fail(ErrorCode::BadK, "k = " + std::to_string(k) + " with " + std::to_string(n) + " segments");
  guard_enumeration(n - 1, k - 1, "exhaustive boundary search");

  const std::vector<Rational> pitches = distinct_pitches(r);
  const std::size_t rho = pitches.size();
  // prefix[p][i]: area of reference segments 0..i-1 against pitch p
  std::vector<std::vector<Rational>> prefix(rho, std::vector<Rational>(n + 1));
  for (std::size_t p = 0; p < rho; ++p)
    for (std::size_t i = 0; i < n; ++i)
      prefix[p][i + 1] =
          prefix[p][i] + abs(pitches[p] - r.pitches[i]) * (r.times[i + 1] - r.times[i]);
  std::vector<std::size_t> pitch_index(n);
  for (std::size_t i = 0; i < n; ++i)
    pitch_index[i] = static_cast<std::size_t>(
        std::lower_bound(pitches.begin(), pitches.end(), r.pitches[i]) - pitches.begin());

  std::optional<Rational> best;
  std::vector<std::size_t> best_bounds;
  std::vector<Rational> best_pitches;
  std::vector<char> allowed(rho);
  for_each_subset(n - 1, k - 1, [&](const std::vector<std::size_t>& inner) {
    std::vector<std::size_t> bounds{0};
    for (const std::size_t b : inner) bounds.push_back(b + 1);
    bounds.push_back(n);

    Rational total = 0;
    std::vector<Rational> chosen;
    chosen.reserve(k);
    for (std::size_t l = 0; l + 1 < bounds.size(); ++l) {
      const std::size_t lo = bounds[l];
      const std::size_t hi = bounds[l + 1];
      if (pool == PitchPool::Contained) {
        std::fill(allowed.begin(), allowed.end(), 0);
        for (std::size_t i = lo; i < hi; ++i) allowed[pitch_index[i]] = 1;
      }
      std::optional<Rational> seg_best;
      std::size_t seg_pitch = 0;
      for (std::size_t p = 0; p < rho; ++p) {
        if (pool == PitchPool::Contained && !allowed[p]) continue;
        Rational c = prefix[p][hi] - prefix[p][lo];
        if (!seg_best || c < *seg_best) {
          seg_best = std::move(c);
          seg_pitch = p;
        }
      }
      total += *seg_best;
      chosen.push_back(pitches[seg_pitch]);
    }
    if (!best || total < *best) {
      best = std::move(total);
      best_bounds = std::move(bounds);
      best_pitches = std::move(chosen);
    }
  });

  std::vector<Rational> times;
  times.reserve(k + 1);
  for (const std::size_t b : best_bounds) times.push_back(r.times[b]);
  SegmentCompression out;
  out.melody = make_segment_melody(std::move(times), std::move(best_pitches));
  out.cost = *best;
  if (oracle::area_between(r, out.melody) != out.cost)
    fail(ErrorCode::Internal, "exhaustive segment cost disagrees with its area");
  return out;
}

Rational compress_segments_refined_cost(const SegmentMelody& r, std::size_t k) {
  validate(r);
  const std::size_t n = r.segment_count();
  if (k == 0 || k > n)
    fail(ErrorCode::BadK, "k = " + std::to_string(k) + " with " + std::to_string(n) + " segments");
  guard_enumeration(2 * n - 1, k - 1, "refined boundary search");

  std::vector<Rational> grid;
  grid.reserve(2 * n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    grid.push_back(r.times[i]);
    if (i < n) grid.push_back((r.times[i] + r.times[i + 1]) / 2);
  }
  const std::vector<Rational> pitches = distinct_pitches(r);

  std::optional<Rational> best;
  for_each_subset(2 * n - 1, k - 1, [&](const std::vector<std::size_t>& inner) {
    std::vector<Rational> bounds{grid.front()};
    for (const std::size_t b : inner) bounds.push_back(grid[b + 1]);
    bounds.push_back(grid.back());

    Rational total = 0;
    for (std::size_t l = 0; l + 1 < bounds.size(); ++l) {
      std::optional<Rational> seg_best;
      for (const Rational& p : pitches) {
        Rational c = band_cost(r, bounds[l], bounds[l + 1], p);
        if (!seg_best || c < *seg_best) seg_best = std::move(c);
      }
      total += *seg_best;
    }
    if (!best || total < *best) best = std::move(total);
  });
  return *best;
}

}  // namespace melogeo::oracle
