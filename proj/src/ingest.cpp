#include "sentaudit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "sentaudit/csv.hpp"

namespace sentaudit {

using nlohmann::json;

std::optional<InputFormat> parse_input_format(std::string_view token) noexcept {
  if (token == "jsonl") return InputFormat::jsonl;
  if (token == "csv") return InputFormat::csv;
  return std::nullopt;
}

InputFormat format_from_path(const std::filesystem::path& path) noexcept {
  return path.extension() == ".csv" ? InputFormat::csv : InputFormat::jsonl;
}

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

std::string required_string(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing field '") + key + "'");
  if (!it->is_string()) throw DataError(std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

RawRecord raw_from_json_line(const std::string& line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) throw DataError("line is not a JSON object");

  RawRecord raw;
  raw.pair_id = required_string(obj, "pair_id");
  raw.lang = required_string(obj, "lang");
  raw.dialect = required_string(obj, "dialect");
  raw.model_id = required_string(obj, "model");
  raw.label = required_string(obj, "label");
  const auto score = obj.find("score");
  if (score == obj.end()) throw DataError("missing field 'score'");
  if (!score->is_number()) throw DataError("field 'score' is not a number");
  raw.score = score->get<double>();
  if (const auto text = obj.find("text"); text != obj.end() && !text->is_null()) {
    if (!text->is_string()) throw DataError("field 'text' is not a string");
    raw.text = text->get<std::string>();
  }
  return raw;
}

double parse_score(const std::string& token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw DataError("score '" + token + "' is not a number");
  }
  return value;
}

RawRecord raw_from_csv_row(const csv::Row& row) {
  if (row.fields.size() != 7) {
    throw DataError("expected 7 columns, found " + std::to_string(row.fields.size()));
  }
  RawRecord raw;
  raw.pair_id = row.fields[0];
  raw.lang = row.fields[1];
  raw.dialect = row.fields[2];
  raw.model_id = row.fields[3];
  raw.label = row.fields[4];
  raw.score = parse_score(row.fields[5]);
  if (!row.fields[6].empty()) raw.text = row.fields[6];
  return raw;
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

// Accepts or rejects one parsed line according to the validation mode.
void admit(LoadResult& result, std::size_t line, ValidationMode mode,
           const std::function<RawRecord()>& parse) {
  try {
    std::vector<std::string> warnings;
    auto record = validate_record(parse(), mode, &warnings);
    for (auto& w : warnings) result.warnings.push_back("line " + std::to_string(line) + ": " + w);
    result.records.push_back(std::move(record));
    result.lines.push_back(line);
  } catch (const DataError& e) {
    if (mode == ValidationMode::strict) throw DataError(e.what(), line);
    result.rejections.push_back({line, e.what()});
  }
}

}  // namespace

LoadResult load_predictions(std::istream& in, InputFormat format, ValidationMode mode) {
  LoadResult result;
  if (format == InputFormat::jsonl) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (is_blank(line)) continue;
      admit(result, number, mode, [&] { return raw_from_json_line(line); });
    }
    return result;
  }

  csv::Reader reader(in);
  std::optional<csv::Row> header;
  try {
    header = reader.next();
  } catch (const DataError& e) {
    throw DataError(std::string("unreadable CSV header: ") + e.what(), 1);
  }
  if (!header) return result;
  std::ostringstream joined;
  for (std::size_t i = 0; i < header->fields.size(); ++i) {
    joined << (i ? "," : "") << header->fields[i];
  }
  std::string header_text = joined.str();
  if (!header_text.empty() && header_text.back() == '\r') header_text.pop_back();
  if (header_text != kCsvHeader) {
    throw DataError("CSV header must be '" + std::string(kCsvHeader) + "'", header->line);
  }

  for (;;) {
    std::optional<csv::Row> row;
    try {
      row = reader.next();
    } catch (const DataError& e) {
      if (mode == ValidationMode::strict) throw;
      result.rejections.push_back({e.line().value_or(0), e.what()});
      continue;
    }
    if (!row) break;
    if (row->fields.size() == 1 && is_blank(row->fields[0])) continue;
    admit(result, row->line, mode, [&] { return raw_from_csv_row(*row); });
  }
  return result;
}

LoadResult load_predictions(const std::filesystem::path& path, InputFormat format,
                            ValidationMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open prediction file '" + path.string() + "'");
  return load_predictions(in, format, mode);
}

std::string to_jsonl(const PredictionRecord& record) {
  // Insertion order is fixed so serialized lines are byte-stable.
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  obj["pair_id"] = record.pair_id;
  obj["lang"] = std::string(to_string(record.lang));
  obj["dialect"] = std::string(to_string(record.dialect));
  obj["model"] = record.model_id;
  obj["label"] = record.label;
  obj["score"] = record.score;
  if (record.text) obj["text"] = *record.text;
  return obj.dump();
}

std::string to_csv_row(const PredictionRecord& record) {
  std::ostringstream out;
  csv::write_row(out, {record.pair_id, std::string(to_string(record.lang)),
                       std::string(to_string(record.dialect)), record.model_id, record.label,
                       format_double(record.score), record.text.value_or("")});
  return out.str();
}

bool PairingReport::balanced() const noexcept {
  return paired_count * 2 + orphaned_bn + orphaned_en + duplicates_rejected +
             dialect_conflicts * 2 ==
         total_records;
}

bool PairingReport::clean() const noexcept {
  return orphaned_bn == 0 && orphaned_en == 0 && dialect_conflicts == 0 &&
         duplicates_rejected == 0;
}

PairingReport& PairingReport::operator+=(const PairingReport& other) {
  total_records += other.total_records;
  paired_count += other.paired_count;
  orphaned_bn += other.orphaned_bn;
  orphaned_en += other.orphaned_en;
  dialect_conflicts += other.dialect_conflicts;
  duplicates_rejected += other.duplicates_rejected;
  const auto append = [](std::vector<std::string>& into, const std::vector<std::string>& from) {
    into.insert(into.end(), from.begin(), from.end());
    std::sort(into.begin(), into.end());
  };
  append(conflict_pair_ids, other.conflict_pair_ids);
  append(duplicate_pair_ids, other.duplicate_pair_ids);
  append(orphan_pair_ids, other.orphan_pair_ids);
  return *this;
}

PairingResult pair_streams(const std::vector<PredictionRecord>& records) {
  PairingResult result;
  auto& report = result.report;
  report.total_records = records.size();
  if (records.empty()) return result;

  const std::string& model = records.front().model_id;
  for (const auto& r : records) {
    if (r.model_id != model) {
      throw DataError("records span multiple models ('" + model + "', '" + r.model_id + "')");
    }
  }

  struct Slot {
    std::vector<const PredictionRecord*> bn;
    std::vector<const PredictionRecord*> en;
  };
  std::map<std::string, Slot> by_id;  // ordered: lexicographic pair_id
  for (const auto& r : records) {
    auto& slot = by_id[r.pair_id];
    (r.lang == Lang::bn ? slot.bn : slot.en).push_back(&r);
  }

  for (auto& [id, slot] : by_id) {
    bool duplicated = false;
    for (auto* stream : {&slot.bn, &slot.en}) {
      if (stream->size() > 1) {
        report.duplicates_rejected += stream->size();
        stream->clear();
        duplicated = true;
      }
    }
    if (duplicated) report.duplicate_pair_ids.push_back(id);

    if (slot.bn.empty() || slot.en.empty()) {
      if (!slot.bn.empty()) ++report.orphaned_bn;
      if (!slot.en.empty()) ++report.orphaned_en;
      if (!slot.bn.empty() || !slot.en.empty()) report.orphan_pair_ids.push_back(id);
      continue;
    }
    const auto& bn = *slot.bn.front();
    const auto& en = *slot.en.front();
    if (bn.dialect != en.dialect) {
      ++report.dialect_conflicts;
      report.conflict_pair_ids.push_back(id);
      continue;
    }
    result.pairs.push_back({bn, en});
  }
  report.paired_count = result.pairs.size();
  return result;
}

namespace {

template <typename Pair, typename DialectOf>
Strata<Pair> split(const std::vector<Pair>& pairs, DialectOf dialect_of) {
  Strata<Pair> strata;
  for (const auto& p : pairs) {
    (dialect_of(p) == Dialect::sadhu ? strata.sadhu : strata.cholito).push_back(p);
  }
  return strata;
}

}  // namespace

Strata<RecordPair> stratify(const std::vector<RecordPair>& pairs) {
  return split(pairs, [](const RecordPair& p) { return p.bengali.dialect; });
}

Strata<PairedObservation> stratify(const std::vector<PairedObservation>& pairs) {
  return split(pairs, [](const PairedObservation& p) { return p.dialect; });
}

}  // namespace sentaudit
