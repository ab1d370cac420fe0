#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "melogeo/compression.hpp"
#include "melogeo/io.hpp"
#include "melogeo/measures.hpp"
#include "melogeo/melody.hpp"
#include "melogeo/oracle.hpp"
#include "melogeo/scaling.hpp"

namespace {

using namespace melogeo;
using nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitParse = 3;
constexpr int kExitMismatch = 4;

/** Decimal rendering with the exact form appended when they differ. */
std::string show(const Rational& v) {
  const std::string dec = to_decimal_string(v);
  const std::string exact = to_string(v);
  return dec == exact ? dec : dec + " (" + exact + ")";
}

const SegmentMelody& require_segments(const MelodyDocument& doc, const std::string& role) {
  if (const SegmentMelody* s = std::get_if<SegmentMelody>(&doc.melody)) return *s;
  fail(ErrorCode::SchemaViolation,
       role + " must be a segment melody; the area measure has no point form");
}

PointMelody as_points(const MelodyDocument& doc) {
  if (const SegmentMelody* s = std::get_if<SegmentMelody>(&doc.melody))
    return segment_to_point(*s);
  return std::get<PointMelody>(doc.melody);
}

void emit(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) fail(ErrorCode::MalformedJson, "cannot write " + output_path);
  out << text;
}

unsigned thread_budget(std::size_t jobs) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("MELOGEO_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, jobs));
}

/**
 * A sweep minimum strictly below the sampled definitional minimum is only
 * legitimate when it is a one-sided limit the cost approaches but never
 * attains: the definitional cost at best_epsilon must jump above it.
 */
bool unattained_limit_certificate(const ScaleResult& res, const PointMelody& r,
                                  const PointMelody& q) {
  const Rational def = t_monotone_matching(r, scale_points(q, res.best_epsilon)).cost;
  if (def <= res.best_cost) return false;
  for (const ProfilePiece& piece : res.profile) {
    if (piece.eps_lo == res.best_epsilon && piece.value_at_lo == res.best_cost) return true;
    if (piece.eps_hi == res.best_epsilon && piece.value_at(piece.eps_hi) == res.best_cost)
      return true;
  }
  return false;
}

struct CommonArgs {
  std::string metric;
  bool json = false;
  bool check = false;
};

int run_measure(const CommonArgs& c, const std::string& reference, const std::string& query,
                const std::string& epsilon) {
  const MelodyDocument rdoc = read_melody_file(reference);
  const MelodyDocument qdoc = read_melody_file(query);
  Rational cost;
  if (c.metric == "area") {
    const SegmentMelody& r = require_segments(rdoc, "--reference");
    SegmentMelody q = require_segments(qdoc, "--query");
    if (!epsilon.empty()) q = scale_segment(q, parse_rational(epsilon));
    q = extend_query(q, r.duration());
    cost = area_between(r, q);
    if (c.check && oracle::area_between(r, q) != cost) {
      std::cerr << "check failed: oracle area disagrees\n";
      return kExitMismatch;
    }
  } else {
    const PointMelody r = as_points(rdoc);
    PointMelody q = as_points(qdoc);
    if (!epsilon.empty()) q = scale_points(q, parse_rational(epsilon));
    cost = t_monotone_matching(r, q).cost;
    if (c.check && oracle::t_monotone_matching(r, q).cost != cost) {
      std::cerr << "check failed: oracle matching disagrees\n";
      return kExitMismatch;
    }
  }
  if (c.json) {
    ordered_json j;
    j["metric"] = c.metric;
    j["cost"] = rational_to_json(cost);
    if (c.check) j["check"] = "ok";
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "cost = " << show(cost) << "\n";
  }
  return 0;
}

/** Outcome of one scale run plus the --check verdict for it. */
struct ScaleOutcome {
  ScaleResult result;
  std::string check;  // empty, "ok", "unattained_limit", or "mismatch"
};

ScaleOutcome scale_one(const CommonArgs& c, const SegmentMelody& rseg, const PointMelody& rpts,
                       const MelodyDocument& qdoc, const std::optional<Rational>& eps_max) {
  ScaleOutcome out;
  if (c.metric == "area") {
    const SegmentMelody& q = require_segments(qdoc, "--query");
    out.result = min_area_scaling(rseg, q);
    if (c.check) {
      const oracle::ScaleCheck chk = oracle::min_area_scaling(rseg, q);
      const bool agree =
          chk.best_cost == out.result.best_cost && chk.best_epsilon == out.result.best_epsilon;
      out.check = agree ? "ok" : "mismatch";
    }
  } else {
    const PointMelody q = as_points(qdoc);
    out.result = min_matching_scaling(rpts, q, eps_max);
    if (c.check) {
      const oracle::ScaleCheck chk = oracle::min_matching_scaling(rpts, q, eps_max);
      if (out.result.best_cost == chk.best_cost && out.result.best_epsilon == chk.best_epsilon) {
        out.check = "ok";
      } else if (out.result.best_cost < chk.best_cost &&
                 unattained_limit_certificate(out.result, rpts, q)) {
        out.check = "unattained_limit";
      } else {
        out.check = "mismatch";
      }
    }
  }
  return out;
}

int run_scale(const CommonArgs& c, const std::string& reference, const std::string& query,
              const std::string& query_dir, const std::string& eps_max_text,
              const std::string& profile_path) {
  const MelodyDocument rdoc = read_melody_file(reference);
  SegmentMelody rseg;
  PointMelody rpts;
  if (c.metric == "area") {
    rseg = require_segments(rdoc, "--reference");
  } else {
    rpts = as_points(rdoc);
  }
  std::optional<Rational> eps_max;
  if (!eps_max_text.empty()) eps_max = parse_rational(eps_max_text);

  if (query_dir.empty()) {
    const ScaleOutcome out = scale_one(c, rseg, rpts, read_melody_file(query), eps_max);
    if (out.check == "mismatch") {
      std::cerr << "check failed: the oracle minimum disagrees with the sweep\n";
      return kExitMismatch;
    }
    if (!profile_path.empty()) emit(profile_to_csv(out.result.profile), profile_path);
    if (c.json) {
      ordered_json j = scale_result_to_json(out.result);
      j["metric"] = c.metric;
      if (!out.check.empty()) j["check"] = out.check;
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "eps_max = " << show(out.result.eps_max) << "\n"
                << "events = " << out.result.event_count << "\n"
                << "best_epsilon = " << show(out.result.best_epsilon) << "\n"
                << "best_cost = " << show(out.result.best_cost) << "\n";
      if (!out.check.empty()) std::cout << "check = " << out.check << "\n";
    }
    return 0;
  }

  // Batch ranking: every melody file in the directory is an independent query.
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(query_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext == ".json" || ext == ".mid" || ext == ".midi") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) fail(ErrorCode::MalformedJson, "no melody files in " + query_dir);

  struct Row {
    std::string name;
    ScaleOutcome outcome;
    std::string error;
  };
  std::vector<Row> rows(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < files.size(); i = next.fetch_add(1)) {
      rows[i].name = files[i].filename().string();
      try {
        rows[i].outcome = scale_one(c, rseg, rpts, read_melody_file(files[i]), eps_max);
      } catch (const Error& e) {
        rows[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned budget = thread_budget(files.size());
  for (unsigned i = 1; i < budget; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  bool mismatch = false;
  bool failed = false;
  std::vector<const Row*> ranked;
  for (const Row& row : rows) {
    if (!row.error.empty()) {
      std::cerr << row.name << ": " << row.error << "\n";
      failed = true;
    } else if (row.outcome.check == "mismatch") {
      std::cerr << row.name << ": check failed: the oracle minimum disagrees with the sweep\n";
      mismatch = true;
    } else {
      ranked.push_back(&row);
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const Row* a, const Row* b) {
    if (a->outcome.result.best_cost != b->outcome.result.best_cost)
      return a->outcome.result.best_cost < b->outcome.result.best_cost;
    return a->name < b->name;
  });

  if (c.json) {
    ordered_json j;
    j["metric"] = c.metric;
    j["reference"] = std::filesystem::path(reference).filename().string();
    ordered_json list = ordered_json::array();
    for (const Row* row : ranked) {
      ordered_json o;
      o["query"] = row->name;
      o["best_cost"] = rational_to_json(row->outcome.result.best_cost);
      o["best_epsilon"] = rational_to_json(row->outcome.result.best_epsilon);
      if (!row->outcome.check.empty()) o["check"] = row->outcome.check;
      list.push_back(std::move(o));
    }
    j["rankings"] = std::move(list);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "best_cost\tbest_epsilon\tquery\n";
    for (const Row* row : ranked) {
      std::cout << to_decimal_string(row->outcome.result.best_cost) << '\t'
                << to_decimal_string(row->outcome.result.best_epsilon) << '\t' << row->name
                << "\n";
    }
  }
  if (mismatch) return kExitMismatch;
  return failed ? kExitParse : 0;
}

int run_compress(const CommonArgs& c, const std::string& input, std::size_t k,
                 const std::string& output) {
  const MelodyDocument doc = read_melody_file(input);
  MelodyDocument result;
  result.time_unit = doc.time_unit;
  Rational cost;
  if (c.metric == "area") {
    const SegmentMelody& r = require_segments(doc, "--input");
    const SegmentCompression best = compress_segments(r, k);
    cost = best.cost;
    result.melody = best.melody;
    if (c.check) {
      const SegmentCompression slow = oracle::compress_segments(r, k, oracle::PitchPool::Contained);
      if (slow.cost != best.cost) {
        std::cerr << "check failed: oracle cost " << to_string(slow.cost) << " vs "
                  << to_string(best.cost) << "\n";
        return kExitMismatch;
      }
    }
  } else {
    const PointMelody r = as_points(doc);
    const PointCompression best = compress_points(r, k);
    cost = best.cost;
    result.melody = best.melody;
    if (c.check) {
      const PointCompression slow = oracle::compress_points(r, k);
      if (!(slow == best)) {
        std::cerr << "check failed: oracle kept a different subset or cost\n";
        return kExitMismatch;
      }
    }
  }
  if (c.json) {
    ordered_json j;
    j["metric"] = c.metric;
    j["k"] = k;
    j["cost"] = rational_to_json(cost);
    j["melody"] = ordered_json::parse(melody_to_json_text(result));
    if (c.check) j["check"] = "ok";
    emit(j.dump(2) + "\n", output);
  } else {
    std::cout << "cost = " << show(cost) << "\n";
    emit(melody_to_json_text(result), output);
  }
  return 0;
}

int run_convert(const std::string& input, const std::string& from, const std::string& to,
                const std::string& output) {
  MelodyDocument doc;
  if (from.empty()) {
    doc = read_melody_file(input);
  } else {
    std::ifstream in(input, std::ios::binary);
    if (!in) {
      fail(from == "midi" ? ErrorCode::NotMidi : ErrorCode::MalformedJson,
           "cannot read " + input);
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    doc = from == "midi" ? melody_from_midi_bytes(bytes)
                         : melody_from_json_text(std::string(bytes.begin(), bytes.end()));
  }
  if (to == "point") {
    if (const SegmentMelody* s = std::get_if<SegmentMelody>(&doc.melody))
      doc.melody = segment_to_point(*s);
  }
  emit(melody_to_json_text(doc), output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric melodic similarity: scaling, matching, and compression"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read option defaults from a key=value file");

  CommonArgs measure_args, scale_args, compress_args;
  std::string measure_ref, measure_query, measure_epsilon;
  std::string scale_ref, scale_query, scale_query_dir, scale_eps_max, scale_profile;
  std::string compress_input, compress_output;
  std::size_t compress_k = 0;
  std::string convert_input, convert_from, convert_to = "json", convert_output;

  const auto metric_check = CLI::IsMember({"area", "match"});

  CLI::App* measure = app.add_subcommand("measure", "Cost of one query against one reference");
  measure->add_option("--metric", measure_args.metric, "area or match")
      ->required()
      ->check(metric_check);
  measure->add_option("-r,--reference", measure_ref, "Reference melody file")->required();
  measure->add_option("-q,--query", measure_query, "Query melody file")->required();
  measure->add_option("--epsilon", measure_epsilon, "Scale the query by this rational first");
  measure->add_flag("--json", measure_args.json, "Machine-readable output");
  measure->add_flag("--check", measure_args.check, "Cross-validate against the oracle");

  CLI::App* scale = app.add_subcommand("scale", "Optimal query scaling against a reference");
  scale->add_option("--metric", scale_args.metric, "area or match")
      ->required()
      ->check(metric_check);
  scale->add_option("-r,--reference", scale_ref, "Reference melody file")->required();
  CLI::Option* q_opt = scale->add_option("-q,--query", scale_query, "Query melody file");
  CLI::Option* dir_opt =
      scale->add_option("--query-dir", scale_query_dir, "Rank every melody in a directory");
  q_opt->excludes(dir_opt);
  scale->add_option("--eps-max", scale_eps_max,
                    "Upper bound of the matching sweep (match metric only)");
  scale->add_option("--profile", scale_profile, "Write the cost profile as CSV to this path");
  scale->add_flag("--json", scale_args.json, "Machine-readable output");
  scale->add_flag("--check", scale_args.check, "Cross-validate against the oracle");

  CLI::App* compress = app.add_subcommand("compress", "Optimal k-unit summary of a melody");
  compress->add_option("--metric", compress_args.metric, "area or match")
      ->required()
      ->check(metric_check);
  compress->add_option("-i,--input", compress_input, "Melody file to compress")->required();
  compress->add_option("-k", compress_k, "Units kept (notes for match, segments for area)")
      ->required();
  compress->add_option("-o,--output", compress_output, "Write the compressed melody here");
  compress->add_flag("--json", compress_args.json, "Machine-readable output");
  compress->add_flag("--check", compress_args.check, "Cross-validate against the oracle");

  CLI::App* convert = app.add_subcommand("convert", "Re-encode a melody file as JSON");
  convert->add_option("-i,--input", convert_input, "Melody file to convert")->required();
  convert->add_option("--from", convert_from, "Force the input format")
      ->check(CLI::IsMember({"midi", "json"}));
  convert->add_option("--to", convert_to, "json keeps the representation, point converts")
      ->check(CLI::IsMember({"json", "point"}));
  convert->add_option("-o,--output", convert_output, "Write here instead of stdout");

  try {
    app.parse(argc, argv);
    if (scale->parsed()) {
      if (scale_query.empty() && scale_query_dir.empty())
        throw CLI::RequiredError("--query or --query-dir");
      if (!scale_eps_max.empty() && scale_args.metric == "area")
        throw CLI::ValidationError("--eps-max", "applies to --metric match only");
      if (!scale_profile.empty() && !scale_query_dir.empty())
        throw CLI::ValidationError("--profile", "needs a single --query");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (measure->parsed())
      return run_measure(measure_args, measure_ref, measure_query, measure_epsilon);
    if (scale->parsed())
      return run_scale(scale_args, scale_ref, scale_query, scale_query_dir, scale_eps_max,
                       scale_profile);
    if (compress->parsed())
      return run_compress(compress_args, compress_input, compress_k, compress_output);
    return run_convert(convert_input, convert_from, convert_to, convert_output);
  } catch (const melogeo::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitParse;
  }
}
