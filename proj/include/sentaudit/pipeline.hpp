#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sentaudit/aggregate.hpp"
#include "sentaudit/distributions.hpp"
#include "sentaudit/ingest.hpp"
#include "sentaudit/metrics.hpp"
#include "sentaudit/normalize.hpp"
#include "sentaudit/report.hpp"

namespace sentaudit {

struct AuditOptions {
  MetricConfig config;
  HistogramSpec divergence_bins = kDefaultDivergenceBins;
  HistogramSpec bias_bins = kDefaultBiasBins;
  std::size_t workers = 1;
};

/// Pairs are processed in shards of this size regardless of the worker count
/// and reduced in shard order, so results are bit-identical for any number
/// of workers.
inline constexpr std::size_t kShardSize = 2048;

struct ModelAudit {
  std::string model_id;
  std::vector<PairMetrics> pair_metrics;  // ascending pair_id
  StratifiedSummary summary;
  Histogram divergence_histogram;
  Histogram bias_histogram;
  PairingReport integrity;

  [[nodiscard]] ModelBlock block() const;
};

/// Applies the scheme to both streams of every pair. Throws DataError naming
/// the pair and stream when a label does not resolve.
std::vector<PairedObservation> observe(const std::vector<RecordPair>& pairs,
                                       const LabelScheme& scheme);

ModelAudit audit_observations(const std::string& model_id,
                              const std::vector<PairedObservation>& observations,
                              const AuditOptions& options, PairingReport integrity = {});

}  // namespace sentaudit
