#include "sentaudit/records.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

namespace sentaudit {

std::string_view to_string(Lang lang) noexcept {
  return lang == Lang::bn ? "bn" : "en";
}

std::string_view to_string(Dialect dialect) noexcept {
  return dialect == Dialect::sadhu ? "sadhu" : "cholito";
}

std::string_view to_string(Stratum stratum) noexcept {
  switch (stratum) {
    case Stratum::all: return "all";
    case Stratum::sadhu: return "sadhu";
    case Stratum::cholito: return "cholito";
  }
  return "all";
}

std::string_view to_string(ValidationMode mode) noexcept {
  return mode == ValidationMode::strict ? "strict" : "lenient";
}

std::optional<Lang> parse_lang(std::string_view token) noexcept {
  if (token == "bn") return Lang::bn;
  if (token == "en") return Lang::en;
  return std::nullopt;
}

std::optional<Dialect> parse_dialect(std::string_view token) noexcept {
  if (token == "sadhu") return Dialect::sadhu;
  if (token == "cholito") return Dialect::cholito;
  return std::nullopt;
}

std::optional<ValidationMode> parse_validation_mode(std::string_view token) noexcept {
  if (token == "strict") return ValidationMode::strict;
  if (token == "lenient") return ValidationMode::lenient;
  return std::nullopt;
}

DataError::DataError(const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(line ? "line " + std::to_string(*line) + ": " + message : message),
      line_(line) {}

DuplicateRecordError::DuplicateRecordError(const std::string& pair_id, Lang lang)
    : DataError("duplicate record for pair_id '" + pair_id + "' lang " +
                std::string(to_string(lang))) {}

PredictionRecord validate_record(const RawRecord& raw, ValidationMode mode,
                                 std::vector<std::string>* warnings) {
  if (raw.pair_id.empty()) throw DataError("empty pair_id");
  const auto lang = parse_lang(raw.lang);
  if (!lang) throw DataError("unknown lang '" + raw.lang + "' (expected bn or en)");
  const auto dialect = parse_dialect(raw.dialect);
  if (!dialect) {
    throw DataError("unknown dialect '" + raw.dialect + "' (expected sadhu or cholito)");
  }
  if (std::isnan(raw.score)) throw DataError("score is NaN");

  double score = raw.score;
  if (score < 0.0 || score > 1.0) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "score out of range [0,1]: " << raw.score;
    if (mode == ValidationMode::strict) throw DataError(msg.str());
    score = std::clamp(score, 0.0, 1.0);
    if (warnings) {
      msg << " (clamped to " << score << ", pair_id '" << raw.pair_id << "')";
      warnings->push_back(msg.str());
    }
  }

  return PredictionRecord{raw.pair_id, *lang,  *dialect, raw.model_id,
                          raw.label,   score, raw.text};
}

void check_unique(const std::vector<PredictionRecord>& records) {
  std::map<std::pair<std::string, Lang>, std::size_t> seen;
  for (const auto& r : records) ++seen[{r.pair_id, r.lang}];
  for (const auto& [key, count] : seen) {
    if (count > 1) throw DuplicateRecordError(key.first, key.second);
  }
}

PairedObservation make_observation(std::string pair_id, Dialect dialect,
                                   double s_bengali, double s_english) {
  const auto in_range = [](double s) { return s >= -1.0 && s <= 1.0; };
  if (!in_range(s_bengali) || !in_range(s_english)) {
    throw DataError("normalized score outside [-1,1] for pair_id '" + pair_id + "'");
  }
  return PairedObservation{std::move(pair_id), dialect, s_bengali, s_english};
}

}  // namespace sentaudit
