#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sentaudit/records.hpp"

namespace sentaudit {

enum class HistogramMetric { divergence, bias };

std::string_view to_string(HistogramMetric metric) noexcept;

/// Uniform-width histogram. Bins are half-open [edge_k, edge_k+1) except
/// the last, which is closed at the upper edge.
struct Histogram {
  HistogramMetric metric = HistogramMetric::divergence;
  std::vector<double> edges;          // bins + 1 strictly ascending values
  std::vector<std::size_t> counts;    // one per bin
  std::size_t n_total = 0;
  std::size_t underflow = 0;
  std::size_t overflow = 0;

  [[nodiscard]] std::size_t bins() const noexcept { return counts.size(); }

  /// Bin-wise addition. Throws std::invalid_argument unless metric and edges
  /// match exactly.
  Histogram& operator+=(const Histogram& other);

  friend bool operator==(const Histogram&, const Histogram&) = default;
};

struct HistogramSpec {
  double lo = 0.0;
  double hi = 2.0;
  std::size_t bins = 40;
};

inline constexpr HistogramSpec kDefaultDivergenceBins{0.0, 2.0, 40};
inline constexpr HistogramSpec kDefaultBiasBins{-2.0, 2.0, 80};

/// Edges lo + (hi - lo) * k / bins, with the last edge pinned to hi.
std::vector<double> uniform_edges(const HistogramSpec& spec);

/// Throws std::invalid_argument unless bins >= 1 and lo < hi.
Histogram histogram(std::span<const double> values, const HistogramSpec& spec,
                    HistogramMetric metric = HistogramMetric::divergence);

Histogram divergence_histogram(std::span<const PairMetrics> pairs,
                               const HistogramSpec& spec = kDefaultDivergenceBins);
Histogram bias_histogram(std::span<const PairMetrics> pairs,
                         const HistogramSpec& spec = kDefaultBiasBins);

/// {"metric", "edges", "counts", "n"}
std::string histogram_to_json(const Histogram& h);
/// edge_lo,edge_hi,count with a header line.
std::string histogram_to_csv(const Histogram& h);

/// Inversion rate per model (stratum all), ascending by rate; equal rates are
/// ordered by model_id.
std::vector<std::pair<std::string, double>> inversion_series(std::span<const FinalStats> stats);

}  // namespace sentaudit
