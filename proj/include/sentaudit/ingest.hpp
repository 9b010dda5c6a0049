#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sentaudit/records.hpp"

namespace sentaudit {

enum class InputFormat { jsonl, csv };

std::optional<InputFormat> parse_input_format(std::string_view token) noexcept;

/// Picks csv for a ".csv" extension and jsonl otherwise.
InputFormat format_from_path(const std::filesystem::path& path) noexcept;

struct Rejection {
  std::size_t line = 0;
  std::string reason;
};

struct LoadResult {
  std::vector<PredictionRecord> records;
  std::vector<std::size_t> lines;  // source line of records[i]
  std::vector<Rejection> rejections;
  std::vector<std::string> warnings;
};

/// Header required on CSV prediction files, in this order.
inline constexpr std::string_view kCsvHeader = "pair_id,lang,dialect,model,label,score,text";

/// Parses predictions in file order. Strict mode throws DataError (with the
/// line number) on the first malformed or invalid line; lenient mode skips
/// such lines and logs them in `rejections`.
LoadResult load_predictions(std::istream& in, InputFormat format, ValidationMode mode);
LoadResult load_predictions(const std::filesystem::path& path, InputFormat format,
                            ValidationMode mode);

std::string to_jsonl(const PredictionRecord& record);
std::string to_csv_row(const PredictionRecord& record);

struct PairingReport {
  std::size_t total_records = 0;
  std::size_t paired_count = 0;
  std::size_t orphaned_bn = 0;
  std::size_t orphaned_en = 0;
  std::size_t dialect_conflicts = 0;
  std::size_t duplicates_rejected = 0;
  std::vector<std::string> conflict_pair_ids;   // ascending
  std::vector<std::string> duplicate_pair_ids;  // ascending, one entry per key
  std::vector<std::string> orphan_pair_ids;     // ascending

  /// paired*2 + orphans + duplicates + 2*conflicts == total
  [[nodiscard]] bool balanced() const noexcept;
  [[nodiscard]] bool clean() const noexcept;

  PairingReport& operator+=(const PairingReport& other);
};

struct RecordPair {
  PredictionRecord bengali;
  PredictionRecord english;
};

struct PairingResult {
  std::vector<RecordPair> pairs;  // ascending pair_id
  PairingReport report;
};

/// Joins the Bengali and English streams of one model on pair_id.
/// Orphans, duplicate keys and dialect disagreements are excluded and
/// counted; every record of a duplicated key is rejected, so the result does
/// not depend on input order. Throws DataError if the records span more than
/// one model_id.
PairingResult pair_streams(const std::vector<PredictionRecord>& records);

template <typename Pair>
struct Strata {
  std::vector<Pair> sadhu;
  std::vector<Pair> cholito;
};

/// Exhaustive, disjoint split by dialect, preserving input order.
Strata<RecordPair> stratify(const std::vector<RecordPair>& pairs);
Strata<PairedObservation> stratify(const std::vector<PairedObservation>& pairs);

}  // namespace sentaudit
