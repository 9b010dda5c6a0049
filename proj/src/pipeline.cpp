#include "sentaudit/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace sentaudit {

ModelBlock ModelAudit::block() const {
  return make_model_block(model_id, summary.finalize(Stratum::all),
                          summary.finalize(Stratum::sadhu), summary.finalize(Stratum::cholito),
                          integrity);
}

std::vector<PairedObservation> observe(const std::vector<RecordPair>& pairs,
                                       const LabelScheme& scheme) {
  std::vector<PairedObservation> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    out.push_back(make_observation(p.bengali.pair_id, p.bengali.dialect,
                                   normalize(p.bengali, scheme), normalize(p.english, scheme)));
  }
  return out;
}

namespace {

struct Shard {
  StratifiedSummary summary;
  Histogram divergence;
  Histogram bias;
};

}  // namespace

ModelAudit audit_observations(const std::string& model_id,
                              const std::vector<PairedObservation>& observations,
                              const AuditOptions& options, PairingReport integrity) {
  options.config.validate();
  const std::size_t n = observations.size();

  ModelAudit audit{model_id,
                   std::vector<PairMetrics>(n),
                   StratifiedSummary(model_id, options.config),
                   histogram({}, options.divergence_bins, HistogramMetric::divergence),
                   histogram({}, options.bias_bins, HistogramMetric::bias),
                   std::move(integrity)};

  const std::size_t shard_count = (n + kShardSize - 1) / kShardSize;
  std::vector<Shard> shards;
  shards.reserve(shard_count);
  for (std::size_t s = 0; s < shard_count; ++s) {
    shards.push_back({StratifiedSummary(model_id, options.config), audit.divergence_histogram,
                      audit.bias_histogram});
  }

  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t s = next++; s < shard_count; s = next++) {
      const std::size_t begin = s * kShardSize;
      const std::size_t end = std::min(n, begin + kShardSize);
      auto& shard = shards[s];
      for (std::size_t i = begin; i < end; ++i) {
        audit.pair_metrics[i] = compute_pair_metrics(observations[i], options.config);
        shard.summary.fold(audit.pair_metrics[i]);
      }
      const std::span<const PairMetrics> slice(audit.pair_metrics.data() + begin, end - begin);
      shard.divergence = divergence_histogram(slice, options.divergence_bins);
      shard.bias = bias_histogram(slice, options.bias_bins);
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(1, shard_count));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (const auto& shard : shards) {
    audit.summary.merge(shard.summary);
    audit.divergence_histogram += shard.divergence;
    audit.bias_histogram += shard.bias;
  }
  return audit;
}

}  // namespace sentaudit
