#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sentaudit/metrics.hpp"
#include "sentaudit/records.hpp"

namespace sentaudit::oracle {

// Reference implementation of the metric pipeline. Everything here is
// written with direct loops and two-pass formulas and calls nothing from the
// metrics, aggregate or distributions modules, so a defect has to be made
// twice to go unnoticed.

struct OracleAudit {
  std::optional<FinalStats> all;
  std::optional<FinalStats> sadhu;
  std::optional<FinalStats> cholito;
};

OracleAudit oracle_audit(const std::vector<PairedObservation>& pairs, const MetricConfig& config,
                         const std::string& model_id = "oracle");

/// Bin counts by linear scan; [e_k, e_k+1) with the last bin closed.
/// Out-of-range values are ignored.
std::vector<std::size_t> oracle_histogram(const std::vector<double>& values, double lo, double hi,
                                          std::size_t bins);

/// Divergence and bias of every pair, computed directly from the scores.
std::vector<double> oracle_divergences(const std::vector<PairedObservation>& pairs);
std::vector<double> oracle_biases(const std::vector<PairedObservation>& pairs);

struct SynthPlan {
  std::size_t pairs = 100;
  std::size_t inversions = 0;    // exact count of inverted pairs
  std::size_t robust_pairs = 0;  // exact count of pairs with D < robust threshold
  double sadhu_fraction = 0.5;   // sadhu pairs = round(fraction * pairs)
  double mean_bias_target = 0.0; // steered, not exact
  std::uint64_t seed = 0;
  MetricConfig config;
  std::string model_id = "synth";
};

/// Deterministic synthetic corpus with planted ground truth, as 3class
/// prediction records (bn and en per pair, ascending pair_id).
///
/// Inversions are (+a, -b) score pairs with a, b uniform in (tau + 0.05, 1];
/// robust and remaining pairs share one sign so they can never invert, and
/// the remaining pairs sit at least 0.05 above the robust threshold.
/// Throws std::invalid_argument for an infeasible plan.
std::vector<PredictionRecord> synth_corpus(const SynthPlan& plan);

/// synth_corpus serialized as prediction JSONL.
std::string synth_jsonl(const SynthPlan& plan);

}  // namespace sentaudit::oracle
