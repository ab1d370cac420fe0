#include "melogeo/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace melogeo {

using nlohmann::ordered_json;

nlohmann::ordered_json rational_to_json(const Rational& v) {
  if (boost::multiprecision::denominator(v) == 1) {
    const BigInt num = boost::multiprecision::numerator(v);
    static const BigInt kExactInDouble("9007199254740992");  // 2^53
    if (num >= -kExactInDouble && num <= kExactInDouble)
      return num.convert_to<std::int64_t>();
  }
  return to_string(v);
}

Rational rational_from_json(const nlohmann::ordered_json& v) {
  if (v.is_number_float())
    fail(ErrorCode::SchemaViolation, "floating point values are inexact; use \"num/den\" strings");
  if (v.is_number_unsigned()) return Rational(BigInt(v.get<std::uint64_t>()));
  if (v.is_number_integer()) return Rational(BigInt(v.get<std::int64_t>()));
  if (v.is_string()) return parse_rational(v.get<std::string>());
  fail(ErrorCode::SchemaViolation, "expected an integer or a \"num/den\" string");
}

namespace {

void check_keys(const ordered_json& j, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return it.key() == a; }))
      fail(ErrorCode::SchemaViolation, "unexpected key \"" + it.key() + "\"");
  }
}

const ordered_json& require_array(const ordered_json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array())
    fail(ErrorCode::SchemaViolation, std::string("\"") + key + "\" must be an array");
  return j[key];
}

}  // namespace

MelodyDocument melody_from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::MalformedJson, e.what());
  }
  if (!j.is_object()) fail(ErrorCode::SchemaViolation, "top level must be an object");
  if (!j.contains("representation") || !j["representation"].is_string())
    fail(ErrorCode::SchemaViolation, "\"representation\" must be \"segment\" or \"point\"");

  MelodyDocument doc;
  if (j.contains("time_unit")) {
    if (!j["time_unit"].is_string())
      fail(ErrorCode::SchemaViolation, "\"time_unit\" must be a string");
    doc.time_unit = j["time_unit"].get<std::string>();
  }

  const std::string rep = j["representation"].get<std::string>();
  if (rep == "segment") {
    check_keys(j, {"representation", "time_unit", "times", "pitches"});
    std::vector<Rational> times;
    for (const ordered_json& v : require_array(j, "times")) times.push_back(rational_from_json(v));
    std::vector<Pitch> pitches;
    for (const ordered_json& v : require_array(j, "pitches"))
      pitches.push_back(rational_from_json(v));
    doc.melody = make_segment_melody(std::move(times), std::move(pitches));
  } else if (rep == "point") {
    check_keys(j, {"representation", "time_unit", "notes"});
    std::vector<Note> notes;
    for (const ordered_json& v : require_array(j, "notes")) {
      if (!v.is_array() || v.size() != 2)
        fail(ErrorCode::SchemaViolation, "each note must be a [time, pitch] pair");
      notes.push_back({rational_from_json(v[0]), rational_from_json(v[1])});
    }
    doc.melody = make_point_melody(std::move(notes));
  } else {
    fail(ErrorCode::SchemaViolation, "\"representation\" must be \"segment\" or \"point\"");
  }
  return doc;
}

std::string melody_to_json_text(const MelodyDocument& doc) {
  ordered_json j;
  if (const SegmentMelody* s = std::get_if<SegmentMelody>(&doc.melody)) {
    j["representation"] = "segment";
    j["time_unit"] = doc.time_unit;
    ordered_json times = ordered_json::array();
    for (const Rational& t : s->times) times.push_back(rational_to_json(t));
    ordered_json pitches = ordered_json::array();
    for (const Pitch& p : s->pitches) pitches.push_back(rational_to_json(p));
    j["times"] = std::move(times);
    j["pitches"] = std::move(pitches);
  } else {
    const PointMelody& p = std::get<PointMelody>(doc.melody);
    j["representation"] = "point";
    j["time_unit"] = doc.time_unit;
    ordered_json notes = ordered_json::array();
    for (const Note& note : p.notes)
      notes.push_back(ordered_json::array({rational_to_json(note.time),
                                           rational_to_json(note.pitch)}));
    j["notes"] = std::move(notes);
  }
  return j.dump(2) + "\n";
}

namespace {

struct ByteReader {
  const std::vector<std::uint8_t>& data;
  std::size_t pos = 0;

  std::uint8_t u8() {
    if (pos >= data.size()) fail(ErrorCode::NotMidi, "truncated file");
    return data[pos++];
  }
  std::uint8_t peek() const {
    if (pos >= data.size()) fail(ErrorCode::NotMidi, "truncated file");
    return data[pos];
  }
  std::uint16_t u16() {
    const std::uint16_t hi = u8();
    return static_cast<std::uint16_t>(hi << 8 | u8());
  }
  std::uint32_t u32() {
    const std::uint32_t hi = u16();
    return hi << 16 | u16();
  }
  std::uint32_t vlq() {
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) {
      const std::uint8_t b = u8();
      value = value << 7 | (b & 0x7f);
      if (!(b & 0x80)) return value;
    }
    fail(ErrorCode::NotMidi, "overlong variable-length quantity");
  }
  void skip(std::size_t n) {
    if (data.size() - pos < n) fail(ErrorCode::NotMidi, "truncated file");
    pos += n;
  }
};

struct MidiNote {
  std::uint32_t onset;
  std::uint32_t offset;
  std::uint8_t pitch;
};

std::vector<MidiNote> read_track(ByteReader& in, std::uint32_t length) {
  const std::size_t end = in.pos + length;
  std::vector<MidiNote> notes;
  std::uint32_t tick = 0;
  std::uint8_t running = 0;
  std::optional<MidiNote> active;

  auto close_active = [&](std::uint32_t at) {
    active->offset = at;
    notes.push_back(*active);
    active.reset();
  };

  while (in.pos < end) {
    tick += in.vlq();
    std::uint8_t status = in.peek();
    if (status & 0x80) {
      in.u8();
    } else if (running != 0) {
      status = running;
    } else {
      fail(ErrorCode::NotMidi, "data byte without a status byte");
    }

    if (status == 0xff) {
      running = 0;
      in.u8();  // meta type
      in.skip(in.vlq());
    } else if (status == 0xf0 || status == 0xf7) {
      running = 0;
      in.skip(in.vlq());
    } else if (status >= 0xf0) {
      fail(ErrorCode::NotMidi, "unexpected system message in track");
    } else {
      running = status;
      const std::uint8_t kind = status >> 4;
      const std::uint8_t data1 = in.u8();
      std::uint8_t data2 = 0;
      if (kind != 0xc && kind != 0xd) data2 = in.u8();
      const bool note_on = kind == 0x9 && data2 > 0;
      const bool note_off = kind == 0x8 || (kind == 0x9 && data2 == 0);
      if (note_on) {
        if (active)
          throw Error(ErrorCode::PolyphonyDetected,
                      "second note starts while one is sounding", tick);
        active = MidiNote{tick, tick, data1};
      } else if (note_off && active && active->pitch == data1) {
        close_active(tick);
      }
    }
  }
  if (active) close_active(tick);  // unclosed final note ends with the track
  in.pos = end;
  return notes;
}

}  // namespace

MelodyDocument melody_from_midi_bytes(const std::vector<std::uint8_t>& bytes) {
  ByteReader in{bytes};
  if (bytes.size() < 4 || bytes[0] != 'M' || bytes[1] != 'T' || bytes[2] != 'h' ||
      bytes[3] != 'd')
    fail(ErrorCode::NotMidi, "missing MThd header");
  in.pos = 4;
  const std::uint32_t header_length = in.u32();
  if (header_length < 6) fail(ErrorCode::NotMidi, "short MThd header");
  const std::uint16_t format = in.u16();
  const std::uint16_t track_count = in.u16();
  in.u16();  // division; times stay in ticks
  in.skip(header_length - 6);
  if (format > 1) fail(ErrorCode::UnsupportedFormat, "format " + std::to_string(format));

  std::vector<MidiNote> melodic;
  bool found_melodic = false;
  // Alien chunks are legal between tracks and do not count toward track_count.
  for (std::uint16_t tracks_seen = 0; tracks_seen < track_count;) {
    const std::array<std::uint8_t, 4> id{in.u8(), in.u8(), in.u8(), in.u8()};
    const std::uint32_t length = in.u32();
    if (id != std::array<std::uint8_t, 4>{'M', 'T', 'r', 'k'}) {
      in.skip(length);
      continue;
    }
    ++tracks_seen;
    std::vector<MidiNote> notes = read_track(in, length);
    if (notes.empty()) continue;
    if (found_melodic)
      fail(ErrorCode::UnsupportedFormat, "more than one track carries notes");
    melodic = std::move(notes);
    found_melodic = true;
  }
  if (!found_melodic) fail(ErrorCode::EmptyTrack, "no notes in any track");

  // One segment per note, from its onset to the next onset (rests absorbed);
  // the last segment ends where its note does.
  const std::uint32_t origin = melodic.front().onset;
  std::vector<Rational> times;
  std::vector<Pitch> pitches;
  for (const MidiNote& note : melodic) {
    times.push_back(Rational(note.onset - origin));
    pitches.push_back(Rational(note.pitch));
  }
  times.push_back(Rational(melodic.back().offset - origin));

  MelodyDocument doc;
  doc.time_unit = "ticks";
  doc.melody = make_segment_melody(std::move(times), std::move(pitches));
  return doc;
}

namespace {

bool has_midi_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".mid" || ext == ".midi";
}

}  // namespace

MelodyDocument read_melody_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(has_midi_extension(path) ? ErrorCode::NotMidi : ErrorCode::MalformedJson,
         "cannot read " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (has_midi_extension(path)) return melody_from_midi_bytes(bytes);
  return melody_from_json_text(std::string(bytes.begin(), bytes.end()));
}

void write_melody_file(const std::filesystem::path& path, const MelodyDocument& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::MalformedJson, "cannot write " + path.string());
  out << melody_to_json_text(doc);
}

std::string profile_to_csv(const std::vector<ProfilePiece>& profile) {
  std::string out =
      "eps_lo,eps_hi,value_at_lo,slope,eps_lo_exact,eps_hi_exact,value_at_lo_exact,slope_exact\n";
  for (const ProfilePiece& p : profile) {
    out += to_decimal_string(p.eps_lo, 12) + ',' + to_decimal_string(p.eps_hi, 12) + ',' +
           to_decimal_string(p.value_at_lo, 12) + ',' + to_decimal_string(p.slope, 12) + ',' +
           to_string(p.eps_lo) + ',' + to_string(p.eps_hi) + ',' + to_string(p.value_at_lo) +
           ',' + to_string(p.slope) + '\n';
  }
  return out;
}

nlohmann::ordered_json scale_result_to_json(const ScaleResult& res) {
  ordered_json j;
  j["best_epsilon"] = rational_to_json(res.best_epsilon);
  j["best_cost"] = rational_to_json(res.best_cost);
  j["eps_max"] = rational_to_json(res.eps_max);
  j["event_count"] = res.event_count;
  ordered_json pieces = ordered_json::array();
  for (const ProfilePiece& p : res.profile) {
    ordered_json o;
    o["eps_lo"] = rational_to_json(p.eps_lo);
    o["eps_hi"] = rational_to_json(p.eps_hi);
    o["value_at_lo"] = rational_to_json(p.value_at_lo);
    o["slope"] = rational_to_json(p.slope);
    pieces.push_back(std::move(o));
  }
  j["profile"] = std::move(pieces);
  return j;
}

}  // namespace melogeo
