#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "sentaudit/metrics.hpp"
#include "sentaudit/records.hpp"

namespace sentaudit {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  void add(const CompensatedSum& other) noexcept;
  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Thrown when statistics are requested for a stratum with no pairs.
class EmptyStratumError : public std::runtime_error {
 public:
  explicit EmptyStratumError(const std::string& what) : std::runtime_error(what) {}
};

/// Mergeable population statistics for one stratum of one model.
///
/// Divergence variance uses the Welford/Chan update (running mean plus sum of
/// squared deviations), so shards can be folded independently and combined
/// with merge(). Plain sums of divergence and bias are Neumaier-compensated.
class AuditSummary {
 public:
  AuditSummary() = default;
  AuditSummary(std::string model_id, Stratum stratum, MetricConfig config);

  /// Adds one pair. Throws std::invalid_argument if the pair's dialect does
  /// not belong to this stratum.
  void fold(const PairMetrics& pm);

  /// Combines another shard of the same model, stratum and config.
  /// Throws std::invalid_argument on mismatch.
  void merge(const AuditSummary& other);

  /// Throws EmptyStratumError when n == 0. The standard deviation uses the
  /// n-1 divisor and is absent when n == 1.
  [[nodiscard]] FinalStats finalize() const;

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t robust_count() const noexcept { return robust_count_; }
  [[nodiscard]] std::size_t inversion_count() const noexcept { return inversion_count_; }
  [[nodiscard]] const std::string& model_id() const noexcept { return model_id_; }
  [[nodiscard]] Stratum stratum() const noexcept { return stratum_; }
  [[nodiscard]] const MetricConfig& config() const noexcept { return config_; }

 private:
  std::string model_id_;
  Stratum stratum_ = Stratum::all;
  MetricConfig config_;

  std::size_t n_ = 0;
  CompensatedSum divergence_sum_;
  CompensatedSum bias_sum_;
  double running_mean_ = 0.0;
  CompensatedSum squared_deviations_;
  std::size_t robust_count_ = 0;
  std::size_t inversion_count_ = 0;
};

/// Free-function forms.
AuditSummary fold(AuditSummary summary, const PairMetrics& pm);
AuditSummary merge(AuditSummary a, const AuditSummary& b);
FinalStats finalize(const AuditSummary& summary);

/// The all/sadhu/cholito summaries of one model, folded together.
struct StratifiedSummary {
  AuditSummary all;
  AuditSummary sadhu;
  AuditSummary cholito;

  StratifiedSummary(const std::string& model_id, const MetricConfig& config);

  void fold(const PairMetrics& pm);
  void merge(const StratifiedSummary& other);

  /// Finalized stats per stratum; empty strata yield nullopt.
  [[nodiscard]] std::optional<FinalStats> finalize(Stratum stratum) const;
};

/// gap = mean(sadhu) - mean(cholito); gap_pct = gap / mean(cholito) * 100,
/// absent when the cholito mean is 0.
DialectGapReport dialect_gap(const FinalStats& sadhu, const FinalStats& cholito);

}  // namespace sentaudit
