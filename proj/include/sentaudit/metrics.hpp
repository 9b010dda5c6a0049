#pragma once

#include <ostream>
#include <string>

#include "sentaudit/records.hpp"

namespace sentaudit {

/// Thresholds for the inversion test and the robustness count. They share a
/// default but are independent settings.
struct MetricConfig {
  double tau = 0.1;
  double robust_threshold = 0.1;

  /// Throws std::invalid_argument unless 0 <= tau < 1 and
  /// 0 < robust_threshold <= 2.
  void validate() const;

  friend bool operator==(const MetricConfig&, const MetricConfig&) = default;
};

/// |S_B - S_E|, in [0, 2].
double divergence(const PairedObservation& obs) noexcept;

/// S_E - S_B, in [-2, 2]. Positive when the English stream scores higher.
double directional_bias(const PairedObservation& obs) noexcept;

/// Opposite polarity with both magnitudes strictly beyond tau.
bool is_inversion(const PairedObservation& obs, double tau) noexcept;

PairMetrics compute_pair_metrics(const PairedObservation& obs, const MetricConfig& config);

/// One line of the per-pair dump:
/// {"pair_id","dialect","divergence","bias","inverted"}
std::string to_jsonl(const PairMetrics& metrics);

}  // namespace sentaudit
