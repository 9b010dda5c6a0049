#include "sentaudit/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sentaudit {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

void CompensatedSum::add(const CompensatedSum& other) noexcept {
  add(other.sum_);
  add(other.compensation_);
}

AuditSummary::AuditSummary(std::string model_id, Stratum stratum, MetricConfig config)
    : model_id_(std::move(model_id)), stratum_(stratum), config_(config) {}

void AuditSummary::fold(const PairMetrics& pm) {
  if (stratum_ == Stratum::sadhu && pm.dialect != Dialect::sadhu) {
    throw std::invalid_argument("cholito pair folded into the sadhu stratum");
  }
  if (stratum_ == Stratum::cholito && pm.dialect != Dialect::cholito) {
    throw std::invalid_argument("sadhu pair folded into the cholito stratum");
  }
  ++n_;
  divergence_sum_.add(pm.divergence);
  bias_sum_.add(pm.bias);

  const double delta = pm.divergence - running_mean_;
  running_mean_ += delta / static_cast<double>(n_);
  squared_deviations_.add(delta * (pm.divergence - running_mean_));

  if (pm.divergence < config_.robust_threshold) ++robust_count_;
  if (pm.inverted) ++inversion_count_;
}

void AuditSummary::merge(const AuditSummary& other) {
  if (other.model_id_ != model_id_ || other.stratum_ != stratum_ || !(other.config_ == config_)) {
    throw std::invalid_argument("cannot merge summaries with different model, stratum or config");
  }
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double total = na + nb;
  const double delta = other.running_mean_ - running_mean_;

  squared_deviations_.add(other.squared_deviations_);
  squared_deviations_.add(delta * delta * (na * nb / total));
  running_mean_ = (na * running_mean_ + nb * other.running_mean_) / total;

  n_ += other.n_;
  divergence_sum_.add(other.divergence_sum_);
  bias_sum_.add(other.bias_sum_);
  robust_count_ += other.robust_count_;
  inversion_count_ += other.inversion_count_;
}

FinalStats AuditSummary::finalize() const {
  if (n_ == 0) {
    throw EmptyStratumError("empty stratum '" + std::string(to_string(stratum_)) +
                            "' for model '" + model_id_ + "'");
  }
  const double n = static_cast<double>(n_);
  FinalStats out;
  out.model_id = model_id_;
  out.stratum = stratum_;
  out.n = n_;
  out.mean_divergence = divergence_sum_.value() / n;
  if (n_ >= 2) {
    out.std_divergence = std::sqrt(std::max(0.0, squared_deviations_.value()) / (n - 1.0));
  }
  out.robust_count = robust_count_;
  out.robustness_pct = static_cast<double>(robust_count_) / n * 100.0;
  out.inversion_count = inversion_count_;
  out.inversion_rate_pct = static_cast<double>(inversion_count_) / n * 100.0;
  out.mean_bias = bias_sum_.value() / n;
  return out;
}

AuditSummary fold(AuditSummary summary, const PairMetrics& pm) {
  summary.fold(pm);
  return summary;
}

AuditSummary merge(AuditSummary a, const AuditSummary& b) {
  a.merge(b);
  return a;
}

FinalStats finalize(const AuditSummary& summary) { return summary.finalize(); }

StratifiedSummary::StratifiedSummary(const std::string& model_id, const MetricConfig& config)
    : all(model_id, Stratum::all, config),
      sadhu(model_id, Stratum::sadhu, config),
      cholito(model_id, Stratum::cholito, config) {}

void StratifiedSummary::fold(const PairMetrics& pm) {
  all.fold(pm);
  (pm.dialect == Dialect::sadhu ? sadhu : cholito).fold(pm);
}

void StratifiedSummary::merge(const StratifiedSummary& other) {
  all.merge(other.all);
  sadhu.merge(other.sadhu);
  cholito.merge(other.cholito);
}

std::optional<FinalStats> StratifiedSummary::finalize(Stratum stratum) const {
  const AuditSummary& s =
      stratum == Stratum::all ? all : (stratum == Stratum::sadhu ? sadhu : cholito);
  if (s.n() == 0) return std::nullopt;
  return s.finalize();
}

DialectGapReport dialect_gap(const FinalStats& sadhu, const FinalStats& cholito) {
  DialectGapReport report;
  report.model_id = sadhu.model_id;
  report.sadhu_mean_divergence = sadhu.mean_divergence;
  report.cholito_mean_divergence = cholito.mean_divergence;
  report.gap = sadhu.mean_divergence - cholito.mean_divergence;
  if (cholito.mean_divergence > 0.0) {
    report.gap_pct = report.gap / cholito.mean_divergence * 100.0;
  }
  return report;
}

}  // namespace sentaudit
