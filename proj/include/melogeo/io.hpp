#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "melogeo/melody.hpp"
#include "melogeo/scaling.hpp"

namespace melogeo {

/** A melody in either representation plus the unit its times are measured in. */
struct MelodyDocument {
  std::variant<SegmentMelody, PointMelody> melody;
  std::string time_unit = "unitless";

  bool operator==(const MelodyDocument&) const = default;
};

/** Integer when the value is a small whole number, "num/den" string otherwise. */
nlohmann::ordered_json rational_to_json(const Rational& v);

/** Accepts integers and "num/den" strings; floats are rejected as inexact. */
Rational rational_from_json(const nlohmann::ordered_json& v);

/**
 * Parses the strict melody schema: an object with "representation"
 * ("segment" or "point"), optional "time_unit" (default "unitless"), and
 * either "times" + "pitches" or "notes" as [[time, pitch], ...]. Unknown keys
 * are SchemaViolation, unparsable text MalformedJson.
 */
MelodyDocument melody_from_json_text(const std::string& text);

std::string melody_to_json_text(const MelodyDocument& doc);

/**
 * Decodes a monophonic SMF file into a segment melody in ticks: one segment
 * per note, rests absorbed into the preceding note, leading silence dropped,
 * an unclosed final note closed at end of track. Accepts format 0 and
 * format 1 with exactly one note-carrying track; simultaneous notes raise
 * PolyphonyDetected with the offending tick.
 */
MelodyDocument melody_from_midi_bytes(const std::vector<std::uint8_t>& bytes);

/** Dispatches on the extension: .mid/.midi decode as SMF, anything else as JSON. */
MelodyDocument read_melody_file(const std::filesystem::path& path);

/** Writes the JSON form. */
void write_melody_file(const std::filesystem::path& path, const MelodyDocument& doc);

/**
 * One row per piece: eps_lo, eps_hi, value_at_lo, slope as 12-digit decimals
 * followed by the same four values exactly.
 */
std::string profile_to_csv(const std::vector<ProfilePiece>& profile);

nlohmann::ordered_json scale_result_to_json(const ScaleResult& res);

}  // namespace melogeo
