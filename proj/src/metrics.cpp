#include "sentaudit/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace sentaudit {

void MetricConfig::validate() const {
  if (!(tau >= 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in [0, 1)");
  if (!(robust_threshold > 0.0 && robust_threshold <= 2.0)) {
    throw std::invalid_argument("robust threshold must lie in (0, 2]");
  }
}

double divergence(const PairedObservation& obs) noexcept {
  return std::fabs(obs.s_bengali - obs.s_english);
}

double directional_bias(const PairedObservation& obs) noexcept {
  return obs.s_english - obs.s_bengali;
}

bool is_inversion(const PairedObservation& obs, double tau) noexcept {
  const double b = obs.s_bengali;
  const double e = obs.s_english;
  return (b > tau && e < -tau) || (b < -tau && e > tau);
}

PairMetrics compute_pair_metrics(const PairedObservation& obs, const MetricConfig& config) {
  return PairMetrics{obs.pair_id, obs.dialect, divergence(obs), directional_bias(obs),
                     is_inversion(obs, config.tau)};
}

std::string to_jsonl(const PairMetrics& metrics) {
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  obj["pair_id"] = metrics.pair_id;
  obj["dialect"] = std::string(to_string(metrics.dialect));
  obj["divergence"] = metrics.divergence;
  obj["bias"] = metrics.bias;
  obj["inverted"] = metrics.inverted;
  return obj.dump();
}

}  // namespace sentaudit
