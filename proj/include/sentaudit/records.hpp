#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sentaudit {

enum class Lang { bn, en };
enum class Dialect { sadhu, cholito };
enum class Stratum { all, sadhu, cholito };
enum class ValidationMode { strict, lenient };

std::string_view to_string(Lang lang) noexcept;
std::string_view to_string(Dialect dialect) noexcept;
std::string_view to_string(Stratum stratum) noexcept;
std::string_view to_string(ValidationMode mode) noexcept;

std::optional<Lang> parse_lang(std::string_view token) noexcept;
std::optional<Dialect> parse_dialect(std::string_view token) noexcept;
std::optional<ValidationMode> parse_validation_mode(std::string_view token) noexcept;

/// Input data violated a contract. Carries an optional 1-based line number
/// so callers can report "file:line" context.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& message,
                     std::optional<std::size_t> line = std::nullopt);

  [[nodiscard]] std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  std::optional<std::size_t> line_;
};

/// Two records share the same (pair_id, lang) key within one model.
class DuplicateRecordError : public DataError {
 public:
  DuplicateRecordError(const std::string& pair_id, Lang lang);
};

/// One classifier output for one sentence in one language stream.
/// The label is kept verbatim; the normalizer interprets it.
struct PredictionRecord {
  std::string pair_id;
  Lang lang = Lang::bn;
  Dialect dialect = Dialect::cholito;
  std::string model_id;
  std::string label;
  double score = 0.0;
  std::optional<std::string> text;

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

/// Fields as they come off the wire, before any invariant is checked.
struct RawRecord {
  std::string pair_id;
  std::string lang;
  std::string dialect;
  std::string model_id;
  std::string label;
  double score = 0.0;
  std::optional<std::string> text;
};

/// Checks every PredictionRecord invariant. In lenient mode an out-of-range
/// score is clamped into [0, 1] and a message is appended to `warnings`;
/// every other violation throws DataError in both modes.
PredictionRecord validate_record(const RawRecord& raw, ValidationMode mode,
                                 std::vector<std::string>* warnings = nullptr);

/// Throws DuplicateRecordError if any (pair_id, lang) key repeats. The
/// reported key is the lexicographically smallest duplicate, so the error is
/// the same for every ordering of the input.
void check_unique(const std::vector<PredictionRecord>& records);

/// Bengali and English scores of one pair after normalization, each in [-1, 1].
struct PairedObservation {
  std::string pair_id;
  Dialect dialect = Dialect::cholito;
  double s_bengali = 0.0;
  double s_english = 0.0;
};

/// Throws DataError unless both scores lie in [-1, 1].
PairedObservation make_observation(std::string pair_id, Dialect dialect,
                                   double s_bengali, double s_english);

struct PairMetrics {
  std::string pair_id;
  Dialect dialect = Dialect::cholito;
  double divergence = 0.0;
  double bias = 0.0;
  bool inverted = false;
};

/// Finalized population statistics for one stratum of one model.
/// Percentages are kept unrounded.
struct FinalStats {
  std::string model_id;
  Stratum stratum = Stratum::all;
  std::size_t n = 0;
  double mean_divergence = 0.0;
  std::optional<double> std_divergence;  // absent when n < 2
  std::size_t robust_count = 0;
  double robustness_pct = 0.0;
  std::size_t inversion_count = 0;
  double inversion_rate_pct = 0.0;
  double mean_bias = 0.0;
};

struct DialectGapReport {
  std::string model_id;
  double sadhu_mean_divergence = 0.0;
  double cholito_mean_divergence = 0.0;
  double gap = 0.0;
  std::optional<double> gap_pct;  // absent when the cholito mean is 0
};

}  // namespace sentaudit
