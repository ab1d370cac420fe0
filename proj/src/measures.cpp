#include "melogeo/measures.hpp"

#include <algorithm>

namespace melogeo {

SegmentMelody extend_query(const SegmentMelody& query, const Rational& end) {
  validate(query);
  if (query.duration() > end) {
    fail(ErrorCode::QueryLongerThanReference,
         "query ends at " + to_string(query.duration()) + ", after " + to_string(end));
  }
  if (query.duration() == end) return query;
  SegmentMelody out = query;
  out.times.back() = end;
  return out;
}

Rational area_between(const SegmentMelody& reference, const SegmentMelody& query) {
  validate(reference);
  validate(query);
  if (reference.duration() != query.duration()) {
    fail(ErrorCode::DurationMismatch, "durations differ: " + to_string(reference.duration()) +
                                          " vs " + to_string(query.duration()));
  }
  // Walk the merged partition; each atomic interval has one pitch per melody.
  Rational area = 0;
  std::size_t ir = 0;
  std::size_t iq = 0;
  Rational lo = 0;
  const Rational& end = reference.duration();
  while (lo < end) {
    const Rational& r_hi = reference.times[ir + 1];
    const Rational& q_hi = query.times[iq + 1];
    const Rational& hi = r_hi < q_hi ? r_hi : q_hi;
    area += abs(reference.pitches[ir] - query.pitches[iq]) * (hi - lo);
    if (r_hi == hi) ++ir;
    if (q_hi == hi) ++iq;
    lo = hi;
  }
  return area;
}

namespace {

Rational l1(const Note& a, const Note& b) {
  return abs(a.time - b.time) + abs(a.pitch - b.pitch);
}

}  // namespace

Matching t_monotone_matching(const PointMelody& reference, const PointMelody& query) {
  validate(reference);
  validate(query);
  const std::vector<Note>& r = reference.notes;
  const std::vector<Note>& q = query.notes;
  const std::size_t n = r.size();
  const std::size_t m = q.size();

  std::vector<IndexPair> pairs;
  pairs.reserve(n + m);
  std::vector<std::size_t> match_count(m, 0);

  // Phase 1: every reference note to its time-nearest query note.
  std::size_t j = 0;  // largest index with q[j].time <= r[i].time, if any
  for (std::size_t i = 0; i < n; ++i) {
    const Note& note = r[i];
    std::size_t partner;
    if (note.time < q[0].time) {
      partner = 0;
    } else {
      while (j + 1 < m && q[j + 1].time <= note.time) ++j;
      if (j + 1 == m || note.time == q[j].time) {
        partner = j;
      } else {
        Rational mid = (q[j].time + q[j + 1].time) / 2;
        if (note.time < mid) {
          partner = j;
        } else if (note.time > mid) {
          partner = j + 1;
        } else {
          // Exact midpoint: l1-nearest, earlier query note on a tie.
          partner = abs(note.pitch - q[j].pitch) <= abs(note.pitch - q[j + 1].pitch) ? j : j + 1;
        }
      }
    }
    pairs.emplace_back(i, partner);
    ++match_count[partner];
  }

  // Phase 2: every unmatched query note to its time-nearest reference note.
  std::vector<IndexPair> late;
  late.reserve(m);
  std::size_t i = 0;  // largest index with r[i].time <= q[j].time, if any
  for (std::size_t jj = 0; jj < m; ++jj) {
    const Note& note = q[jj];
    if (!(note.time < r[0].time)) {
      while (i + 1 < n && r[i + 1].time <= note.time) ++i;
    }
    if (match_count[jj] > 0) continue;
    std::size_t partner;
    if (note.time < r[0].time) {
      partner = 0;
    } else if (i + 1 == n || note.time == r[i].time) {
      partner = i;
    } else {
      Rational mid = (r[i].time + r[i + 1].time) / 2;
      if (note.time < mid) {
        partner = i;
      } else if (note.time > mid) {
        partner = i + 1;
      } else {
        partner = abs(note.pitch - r[i].pitch) <= abs(note.pitch - r[i + 1].pitch) ? i : i + 1;
      }
    }
    late.emplace_back(partner, jj);
  }

  // Both lists are lexicographically sorted already; merge and split by sign.
  Matching out;
  out.cost = 0;
  std::vector<IndexPair> merged(pairs.size() + late.size());
  std::merge(pairs.begin(), pairs.end(), late.begin(), late.end(), merged.begin());
  for (const IndexPair& pr : merged) {
    const Note& rn = r[pr.first];
    const Note& qn = q[pr.second];
    out.cost += l1(rn, qn);
    if (rn.time < qn.time) {
      out.a_minus.push_back(pr);
    } else {
      out.a_plus.push_back(pr);
    }
  }
  return out;
}

}  // namespace melogeo
