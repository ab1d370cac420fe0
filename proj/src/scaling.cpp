#include "melogeo/scaling.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace melogeo {

SegmentMelody scale_segment(const SegmentMelody& q, const Rational& eps) {
  validate(q);
  if (eps < 0) fail(ErrorCode::BadEpsilon, "negative scaling " + to_string(eps));
  SegmentMelody out = q;
  for (std::size_t j = 1; j < out.times.size(); ++j) out.times[j] += Rational(j) * eps;
  return out;
}

PointMelody scale_points(const PointMelody& q, const Rational& eps) {
  validate(q);
  if (eps < 0) fail(ErrorCode::BadEpsilon, "negative scaling " + to_string(eps));
  PointMelody out = q;
  for (std::size_t j = 0; j < out.notes.size(); ++j)
    out.notes[j].time += Rational(2 * j + 1) * eps / 2;
  return out;
}

Rational default_matching_eps_max(const PointMelody& r, const PointMelody& q) {
  validate(r);
  validate(q);
  return 2 * (r.notes.back().time - q.notes.back().time) / Rational(2 * q.size() - 1);
}

namespace {

struct Candidate {
  Rational eps;
  EventKind kind;
  std::size_t ref_index;
  std::size_t query_index;
};

// One cursor per pre-sorted candidate stream; the heap yields the canonical
// global order (eps, kind, query_index, ref_index).
struct StreamCursor {
  const std::vector<Candidate>* stream;
  std::size_t pos;
};

struct CursorAfter {
  bool operator()(const StreamCursor& a, const StreamCursor& b) const {
    const Candidate& x = (*a.stream)[a.pos];
    const Candidate& y = (*b.stream)[b.pos];
    if (x.eps != y.eps) return x.eps > y.eps;
    if (x.kind != y.kind) return x.kind > y.kind;
    if (x.query_index != y.query_index) return x.query_index > y.query_index;
    return x.ref_index > y.ref_index;
  }
};

class CandidateMerge {
 public:
  explicit CandidateMerge(const std::vector<std::vector<Candidate>>& streams) {
    for (const auto& s : streams)
      if (!s.empty()) heap_.push({&s, 0});
  }

  bool empty() const { return heap_.empty(); }

  const Rational& next_eps() const { return (*heap_.top().stream)[heap_.top().pos].eps; }

  Candidate pop() {
    StreamCursor top = heap_.top();
    heap_.pop();
    Candidate out = (*top.stream)[top.pos];
    if (++top.pos < top.stream->size()) heap_.push(top);
    return out;
  }

 private:
  std::priority_queue<StreamCursor, std::vector<StreamCursor>, CursorAfter> heap_;
};

struct SweepOutput {
  ScaleResult result;
  std::vector<SweepEvent> schedule;
};

SweepOutput run_area_sweep(const SegmentMelody& r, const SegmentMelody& q,
                           const SweepOptions& options) {
  validate(r);
  validate(q);
  const Rational& end = r.duration();
  if (q.duration() > end) {
    fail(ErrorCode::QueryLongerThanReference,
         "query duration " + to_string(q.duration()) + " exceeds " + to_string(end));
  }
  const std::size_t n = r.segment_count();
  const std::size_t m = q.segment_count();

  SweepOutput out;
  ScaleResult& res = out.result;
  res.eps_max = (end - q.duration()) / Rational(m);
  const Rational a0 = area_between(r, extend_query(q, end));
  res.best_epsilon = 0;
  res.best_cost = a0;
  if (res.eps_max == 0) {
    res.profile.push_back({0, 0, a0, 0});
    return out;
  }

  // Slope just right of eps = 0; a boundary sitting exactly on x_i belongs to
  // segment i because it moves right for every eps > 0.
  Rational slope = 0;
  for (std::size_t j = 1; j < m; ++j) {
    const std::size_t s =
        static_cast<std::size_t>(std::upper_bound(r.times.begin(), r.times.end(), q.times[j]) -
                                 r.times.begin()) -
        1;
    slope += Rational(j) * (abs(r.pitches[s] - q.pitches[j - 1]) - abs(r.pitches[s] - q.pitches[j]));
  }

  // One stream per interior query boundary; eps = (x_i - t_j) / j is
  // increasing in i, so each stream is generated sorted.
  std::vector<std::vector<Candidate>> streams;
  streams.reserve(m - 1);
  for (std::size_t j = 1; j < m; ++j) {
    std::vector<Candidate> stream;
    for (std::size_t i = 1; i < n; ++i) {
      Rational eps = (r.times[i] - q.times[j]) / Rational(j);
      if (eps <= 0) continue;
      if (eps > res.eps_max) break;
      stream.push_back({std::move(eps), EventKind::AreaBoundaryCross, i, j});
    }
    streams.push_back(std::move(stream));
  }

  CandidateMerge merge(streams);
  std::mt19937_64 rng(options.shuffle_seed.value_or(0));
  Rational cur_eps = 0;
  Rational cur_val = a0;
  auto consider = [&](const Rational& e, const Rational& v) {
    if (v < res.best_cost) {
      res.best_cost = v;
      res.best_epsilon = e;
    }
  };

  while (!merge.empty()) {
    std::vector<Candidate> batch;
    batch.push_back(merge.pop());
    while (!merge.empty() && merge.next_eps() == batch.front().eps) batch.push_back(merge.pop());
    const Rational e = batch.front().eps;

    res.profile.push_back({cur_eps, e, cur_val, slope});
    cur_val += slope * (e - cur_eps);
    cur_eps = e;
    consider(e, cur_val);

    if (options.shuffle_seed) std::shuffle(batch.begin(), batch.end(), rng);
    for (const Candidate& c : batch) {
      const std::size_t i = c.ref_index;
      const std::size_t j = c.query_index;
      SweepEvent ev;
      ev.epsilon = e;
      ev.kind = EventKind::AreaBoundaryCross;
      ev.ref_index = i;
      ev.query_index = j;
      ev.vanished_height = abs(r.pitches[i - 1] - q.pitches[j]);
      ev.created_height = abs(r.pitches[i] - q.pitches[j - 1]);
      ev.slope_delta =
          Rational(j) * ((abs(r.pitches[i] - q.pitches[j - 1]) - abs(r.pitches[i] - q.pitches[j])) -
                         (abs(r.pitches[i - 1] - q.pitches[j - 1]) -
                          abs(r.pitches[i - 1] - q.pitches[j])));
      slope += ev.slope_delta;
      out.schedule.push_back(std::move(ev));
    }
  }

  if (cur_eps < res.eps_max) {
    res.profile.push_back({cur_eps, res.eps_max, cur_val, slope});
    consider(res.eps_max, cur_val + slope * (res.eps_max - cur_eps));
  }
  res.event_count = out.schedule.size();
  return out;
}

SweepOutput run_matching_sweep(const PointMelody& r, const PointMelody& q,
                               const std::optional<Rational>& eps_max_opt,
                               const SweepOptions& options, bool want_schedule) {
  validate(r);
  validate(q);
  const std::vector<Note>& rn = r.notes;
  const std::vector<Note>& qn = q.notes;
  const std::size_t n = rn.size();
  const std::size_t m = qn.size();

  SweepOutput out;
  ScaleResult& res = out.result;

  Rational eps_max;
  if (eps_max_opt) {
    eps_max = *eps_max_opt;
    if (eps_max <= 0) fail(ErrorCode::BadEpsilon, "eps_max must be positive");
  } else {
    eps_max = default_matching_eps_max(r, q);
    if (eps_max <= 0) {
      // The last query note starts at or beyond the last reference note:
      // nothing to sweep, the only admissible scaling is eps = 0.
      const Rational cost = t_monotone_matching(r, q).cost;
      res.best_epsilon = 0;
      res.best_cost = cost;
      res.eps_max = 0;
      res.profile.push_back({0, 0, cost, 0});
      return out;
    }
  }
  res.eps_max = eps_max;

  auto weight = [](std::size_t j) { return Rational(2 * j + 1); };
  auto t_at = [&](std::size_t j, const Rational& e) { return qn[j].time + weight(j) * e / 2; };
  auto pair_l1 = [&](std::size_t i, std::size_t j, const Rational& e) {
    return abs(rn[i].time - t_at(j, e)) + abs(rn[i].pitch - qn[j].pitch);
  };

  std::vector<Rational> bis0(m >= 1 ? m - 1 : 0);
  for (std::size_t j = 0; j + 1 < m; ++j) bis0[j] = (qn[j].time + qn[j + 1].time) / 2;
  std::vector<Rational> rmid(n >= 1 ? n - 1 : 0);
  for (std::size_t i = 0; i + 1 < n; ++i) rmid[i] = (rn[i].time + rn[i + 1].time) / 2;

  // Matching state just right of the current eps. r_partner/r_sign describe
  // the phase-1 pair of each reference note; q_partner/q_sign the phase-2
  // pair of each query note, valid only while q_count == 0.
  std::vector<std::size_t> r_partner(n);
  std::vector<PairSet> r_sign(n, PairSet::APlus);
  std::vector<std::size_t> q_count(m, 0);
  std::vector<std::size_t> q_partner(m, n);
  std::vector<PairSet> q_sign(m, PairSet::APlus);
  Rational s_minus = 0;
  Rational s_plus = 0;
  Rational phi = 0;

  // Perturbed matching at 0+: every bisector sits just right of bis0, so a
  // reference note exactly on a bisector belongs to the left query note.
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = std::lower_bound(bis0.begin(), bis0.end(), rn[i].time);
    const std::size_t j = it == bis0.end() ? m - 1 : static_cast<std::size_t>(it - bis0.begin());
    r_partner[i] = j;
    r_sign[i] = rn[i].time <= qn[j].time ? PairSet::AMinus : PairSet::APlus;
    (r_sign[i] == PairSet::AMinus ? s_minus : s_plus) += weight(j);
    phi += pair_l1(i, j, 0);
    ++q_count[j];
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (q_count[j] > 0) continue;
    const auto it = std::upper_bound(rmid.begin(), rmid.end(), qn[j].time);
    const std::size_t i = it == rmid.end() ? n - 1 : static_cast<std::size_t>(it - rmid.begin());
    q_partner[j] = i;
    q_sign[j] = rn[i].time <= qn[j].time ? PairSet::AMinus : PairSet::APlus;
    (q_sign[j] == PairSet::AMinus ? s_minus : s_plus) += weight(j);
    phi += pair_l1(i, j, 0);
  }

  res.best_epsilon = 0;
  res.best_cost = t_monotone_matching(r, q).cost;
  auto consider = [&](const Rational& e, const Rational& v) {
    if (v < res.best_cost) {
      res.best_cost = v;
      res.best_epsilon = e;
    }
  };
  consider(0, phi);

  // Phase-2 pair cost of an unmatched query note at exactly e: the
  // time-nearest reference note, an exact midpoint resolved to the smaller
  // pitch leg and then to the earlier reference note.
  auto phase2_cost = [&](std::size_t j, const Rational& e) {
    const Rational t = t_at(j, e);
    std::size_t i;
    if (t < rn.front().time) {
      i = 0;
    } else if (t > rn.back().time) {
      i = n - 1;
    } else {
      const auto it = std::upper_bound(rmid.begin(), rmid.end(), t);
      i = it == rmid.end() ? n - 1 : static_cast<std::size_t>(it - rmid.begin());
      if (i > 0 && rmid[i - 1] == t &&
          abs(qn[j].pitch - rn[i - 1].pitch) <= abs(qn[j].pitch - rn[i].pitch))
        --i;
    }
    return pair_l1(i, j, e);
  };

  // 2m-1 sorted candidate streams: per query note the interleaved Type1/Type3
  // positions x_0 < mid_0 < x_1 < ... < x_{n-1}, per bisector the Type2
  // positions.
  std::vector<std::vector<Candidate>> streams;
  streams.reserve(2 * m - 1);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<Candidate> stream;
    const Rational rate = 2 / weight(j);
    for (std::size_t i = 0; i < n; ++i) {
      Rational e1 = (rn[i].time - qn[j].time) * rate;
      if (e1 > eps_max) break;
      if (e1 > 0) stream.push_back({std::move(e1), EventKind::Type1, i, j});
      if (i + 1 < n) {
        Rational e3 = (rmid[i] - qn[j].time) * rate;
        if (e3 > eps_max) break;
        if (e3 > 0) stream.push_back({std::move(e3), EventKind::Type3, i, j});
      }
    }
    streams.push_back(std::move(stream));
  }
  for (std::size_t j = 0; j + 1 < m; ++j) {
    std::vector<Candidate> stream;
    for (std::size_t i = 0; i < n; ++i) {
      Rational e2 = (rn[i].time - bis0[j]) / Rational(j + 1);
      if (e2 > eps_max) break;
      if (e2 > 0) stream.push_back({std::move(e2), EventKind::Type2, i, j});
    }
    streams.push_back(std::move(stream));
  }

  CandidateMerge merge(streams);
  std::mt19937_64 rng(options.shuffle_seed.value_or(0));
  Rational piece_lo = 0;
  Rational piece_val = phi;

  while (!merge.empty()) {
    std::vector<Candidate> batch;
    batch.push_back(merge.pop());
    while (!merge.empty() && merge.next_eps() == batch.front().eps) batch.push_back(merge.pop());
    const Rational e = batch.front().eps;
    const Rational sl = (s_minus - s_plus) / 2;

    phi = piece_val + sl * (e - piece_lo);
    consider(e, phi);  // left-sided value

    std::size_t choices = 0;
    for (const Candidate& c : batch)
      if (c.kind != EventKind::Type1) ++choices;

    // With several simultaneous re-partnering choices the definitional
    // matching can mix sides and undercut both one-sided values. It differs
    // from the left-sided matching only around the batch: a reference note
    // sitting on a bisector takes its smaller pitch leg (the time legs are
    // equal there), which can flip the matched state of the two query notes
    // next to it.
    std::optional<Rational> def_at_e;
    if (choices >= 2) {
      Rational delta = 0;
      std::map<std::size_t, int> count_change;
      for (const Candidate& c : batch) {
        if (c.kind != EventKind::Type2) continue;
        const Rational dl = abs(rn[c.ref_index].pitch - qn[c.query_index].pitch);
        const Rational dr = abs(rn[c.ref_index].pitch - qn[c.query_index + 1].pitch);
        if (dl <= dr) {  // equal legs resolve to the earlier query note
          delta += dl - dr;
          ++count_change[c.query_index];
          --count_change[c.query_index + 1];
        }
      }
      std::set<std::size_t> touched;
      for (const auto& entry : count_change) touched.insert(entry.first);
      for (const Candidate& c : batch)
        if (c.kind == EventKind::Type3) touched.insert(c.query_index);
      for (const std::size_t j : touched) {
        const auto moved = count_change.find(j);
        const int shift = moved == count_change.end() ? 0 : moved->second;
        const bool matched_left = q_count[j] > 0;
        const bool matched_def = static_cast<int>(q_count[j]) + shift > 0;
        if (matched_left && matched_def) continue;
        if (!matched_def) delta += phase2_cost(j, e);
        if (!matched_left) delta -= pair_l1(q_partner[j], j, e);
      }
      def_at_e = phi + delta;
    }

    if (options.shuffle_seed) std::shuffle(batch.begin(), batch.end(), rng);
    std::size_t admitted = 0;
    for (const Candidate& c : batch) {
      const std::size_t i = c.ref_index;
      const std::size_t j = c.query_index;
      SweepEvent ev;
      ev.epsilon = e;
      ev.kind = c.kind;
      ev.ref_index = i;
      ev.query_index = j;
      const Rational before = s_minus - s_plus;
      auto leave = [&](std::size_t pi, std::size_t pj, PairSet set) {
        phi -= pair_l1(pi, pj, e);
        (set == PairSet::AMinus ? s_minus : s_plus) -= weight(pj);
        if (want_schedule) ev.pair_deltas.push_back({{pi, pj}, set, false});
      };
      auto enter = [&](std::size_t pi, std::size_t pj, PairSet set) {
        phi += pair_l1(pi, pj, e);
        (set == PairSet::AMinus ? s_minus : s_plus) += weight(pj);
        if (want_schedule) ev.pair_deltas.push_back({{pi, pj}, set, true});
      };

      switch (c.kind) {
        case EventKind::Type1: {
          // t_j(e) reaches x_i: the pair crosses from A+ to A-, cost intact.
          if (r_partner[i] != j || r_sign[i] != PairSet::APlus)
            fail(ErrorCode::Internal, "type-1 event against foreign pair");
          r_sign[i] = PairSet::AMinus;
          leave(i, j, PairSet::APlus);
          enter(i, j, PairSet::AMinus);
          break;
        }
        case EventKind::Type2: {
          // Bisector j reaches x_i: the reference re-partners j+1 -> j.
          if (r_partner[i] != j + 1 || r_sign[i] != PairSet::AMinus)
            fail(ErrorCode::Internal, "type-2 event against foreign pair");
          if (rn[i].time <= t_at(j, e)) fail(ErrorCode::Internal, "bisector left of its query note");
          leave(i, j + 1, PairSet::AMinus);
          --q_count[j + 1];
          bool absorbed = false;
          if (q_count[j] == 0) {
            const std::size_t b = q_partner[j];
            if (b == i) {
              if (q_sign[j] != PairSet::APlus)
                fail(ErrorCode::Internal, "absorbed pair was left of its query note");
              absorbed = true;  // the phase-2 pair (i, j) continues as the phase-1 pair
            } else {
              leave(b, j, q_sign[j]);
            }
          }
          r_partner[i] = j;
          r_sign[i] = PairSet::APlus;
          ++q_count[j];
          if (!absorbed) enter(i, j, PairSet::APlus);
          if (q_count[j + 1] == 0) {
            const Rational tj1 = t_at(j + 1, e);
            const auto it = std::upper_bound(rmid.begin(), rmid.end(), tj1);
            const std::size_t b2 =
                it == rmid.end() ? n - 1 : static_cast<std::size_t>(it - rmid.begin());
            q_partner[j + 1] = b2;
            q_sign[j + 1] = rn[b2].time <= tj1 ? PairSet::AMinus : PairSet::APlus;
            enter(b2, j + 1, q_sign[j + 1]);
          }
          break;
        }
        case EventKind::Type3: {
          // t_j(e) crosses the midpoint of x_i, x_{i+1} while Q_j is unmatched.
          if (q_count[j] != 0) continue;          // matched meanwhile: no event
          if (q_partner[j] != i) continue;        // superseded inside this batch
          if (q_sign[j] != PairSet::AMinus)
            fail(ErrorCode::Internal, "type-3 pair right of its query note");
          leave(i, j, PairSet::AMinus);
          q_partner[j] = i + 1;
          q_sign[j] = PairSet::APlus;
          enter(i + 1, j, PairSet::APlus);
          break;
        }
        case EventKind::AreaBoundaryCross:
          fail(ErrorCode::Internal, "area event in matching sweep");
      }
      ++admitted;
      ev.slope_delta = ((s_minus - s_plus) - before) / 2;
      if (want_schedule) out.schedule.push_back(std::move(ev));
    }

    if (admitted > 0) {
      res.profile.push_back({piece_lo, e, piece_val, sl});
      piece_lo = e;
      piece_val = phi;
      consider(e, phi);  // right-sided value
    }
    res.event_count += admitted;
    if (def_at_e) consider(e, *def_at_e);
  }

  if (piece_lo < eps_max) {
    const Rational sl = (s_minus - s_plus) / 2;
    res.profile.push_back({piece_lo, eps_max, piece_val, sl});
    consider(eps_max, piece_val + sl * (eps_max - piece_lo));
  }
  return out;
}

}  // namespace

std::vector<SweepEvent> area_event_schedule(const SegmentMelody& r, const SegmentMelody& q) {
  return run_area_sweep(r, q, {}).schedule;
}

ScaleResult min_area_scaling(const SegmentMelody& r, const SegmentMelody& q,
                             const SweepOptions& options) {
  return run_area_sweep(r, q, options).result;
}

std::vector<SweepEvent> matching_event_schedule(const PointMelody& r, const PointMelody& q,
                                                const Rational& eps_max) {
  return run_matching_sweep(r, q, eps_max, {}, true).schedule;
}

ScaleResult min_matching_scaling(const PointMelody& r, const PointMelody& q,
                                 std::optional<Rational> eps_max, const SweepOptions& options) {
  return run_matching_sweep(r, q, eps_max, options, false).result;
}

std::vector<ProfilePiece> cost_profile(const SegmentMelody& r, const SegmentMelody& q) {
  return min_area_scaling(r, q).profile;
}

std::vector<ProfilePiece> cost_profile(const PointMelody& r, const PointMelody& q,
                                       std::optional<Rational> eps_max) {
  return min_matching_scaling(r, q, std::move(eps_max)).profile;
}

}  // namespace melogeo
