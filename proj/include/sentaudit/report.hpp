#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sentaudit/ingest.hpp"
#include "sentaudit/metrics.hpp"
#include "sentaudit/records.hpp"

namespace sentaudit {

/// Everything the report knows about one model.
struct ModelBlock {
  std::string model_id;
  std::optional<FinalStats> all;
  std::optional<FinalStats> sadhu;
  std::optional<FinalStats> cholito;
  std::optional<DialectGapReport> gap;
  PairingReport integrity;
  std::vector<std::string> warnings;
};

/// Fills the gap from the strata when both exist and records a warning for
/// every missing stratum.
ModelBlock make_model_block(std::string model_id, std::optional<FinalStats> all,
                            std::optional<FinalStats> sadhu, std::optional<FinalStats> cholito,
                            PairingReport integrity = {});

enum class RowFormat { score, percent, count };

struct MetricRow {
  std::string_view label;
  std::optional<double> value;
  RowFormat format = RowFormat::score;
};

inline constexpr std::size_t kMetricRowCount = 10;

/// The ten per-model rows in table order: Mean Div., Std Dev., Sadhu Div.,
/// Cholito Div., Dialect Gap, Sadhu Err. Inc. (%), Robustness (%),
/// Inversions, Inv. Rate (%), Dir. Bias (En-Bn). Missing inputs give nullopt.
std::array<MetricRow, kMetricRowCount> render_model_block(const ModelBlock& block);

/// Decimal text of `value` rounded half away from zero.
std::string round_half_away(double value, int decimals);

/// 3 decimals for scores, 1 for percentages, integer for counts, "null" when
/// the value is absent.
std::string format_row_value(const MetricRow& row);

struct ReportBundle {
  MetricConfig config;
  std::vector<ModelBlock> models;
  PairingReport integrity;
  std::vector<std::string> histograms;  // paths of emitted histogram files
  std::optional<std::vector<std::pair<std::string, double>>> inversion_series;
};

enum class ReportFormat { json, csv, md };

std::optional<ReportFormat> parse_report_format(std::string_view token) noexcept;

/// Deterministic rendering: identical bundles give identical bytes. Throws
/// std::invalid_argument when the bundle has no model blocks.
std::string render_audit(const ReportBundle& bundle, ReportFormat format);

/// Inverse of the JSON rendering. Throws DataError on schema violations.
ReportBundle parse_report_json(std::string_view document);

}  // namespace sentaudit
