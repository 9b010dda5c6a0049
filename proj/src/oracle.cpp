#include "sentaudit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sentaudit/ingest.hpp"

namespace sentaudit::oracle {

namespace {

std::optional<FinalStats> naive_stats(const std::vector<PairedObservation>& pairs,
                                      const MetricConfig& config, const std::string& model_id,
                                      Stratum stratum) {
  std::vector<const PairedObservation*> members;
  for (const auto& p : pairs) {
    if (stratum == Stratum::all || (stratum == Stratum::sadhu) == (p.dialect == Dialect::sadhu)) {
      members.push_back(&p);
    }
  }
  if (members.empty()) return std::nullopt;

  const double n = static_cast<double>(members.size());
  double d_total = 0.0;
  double b_total = 0.0;
  std::size_t robust = 0;
  std::size_t inverted = 0;
  for (const auto* p : members) {
    const double d = p->s_bengali > p->s_english ? p->s_bengali - p->s_english
                                                 : p->s_english - p->s_bengali;
    d_total += d;
    b_total += p->s_english - p->s_bengali;
    if (d < config.robust_threshold) ++robust;
    const bool bn_pos = p->s_bengali > config.tau;
    const bool bn_neg = p->s_bengali < -config.tau;
    const bool en_pos = p->s_english > config.tau;
    const bool en_neg = p->s_english < -config.tau;
    if ((bn_pos && en_neg) || (bn_neg && en_pos)) ++inverted;
  }

  FinalStats s;
  s.model_id = model_id;
  s.stratum = stratum;
  s.n = members.size();
  s.mean_divergence = d_total / n;
  if (members.size() >= 2) {
    double squares = 0.0;
    for (const auto* p : members) {
      const double d = p->s_bengali > p->s_english ? p->s_bengali - p->s_english
                                                   : p->s_english - p->s_bengali;
      squares += (d - s.mean_divergence) * (d - s.mean_divergence);
    }
    s.std_divergence = std::sqrt(squares / (n - 1.0));
  }
  s.robust_count = robust;
  s.robustness_pct = 100.0 * static_cast<double>(robust) / n;
  s.inversion_count = inverted;
  s.inversion_rate_pct = 100.0 * static_cast<double>(inverted) / n;
  s.mean_bias = b_total / n;
  return s;
}

}  // namespace

OracleAudit oracle_audit(const std::vector<PairedObservation>& pairs, const MetricConfig& config,
                         const std::string& model_id) {
  return OracleAudit{naive_stats(pairs, config, model_id, Stratum::all),
                     naive_stats(pairs, config, model_id, Stratum::sadhu),
                     naive_stats(pairs, config, model_id, Stratum::cholito)};
}

std::vector<std::size_t> oracle_histogram(const std::vector<double>& values, double lo, double hi,
                                          std::size_t bins) {
  std::vector<double> edges;
  for (std::size_t k = 0; k < bins; ++k) {
    edges.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins));
  }
  edges.push_back(hi);

  std::vector<std::size_t> counts(bins, 0);
  for (const double x : values) {
    for (std::size_t k = 0; k < bins; ++k) {
      const bool last = k + 1 == bins;
      if (x >= edges[k] && (x < edges[k + 1] || (last && x == edges[k + 1]))) {
        ++counts[k];
        break;
      }
    }
  }
  return counts;
}

std::vector<double> oracle_divergences(const std::vector<PairedObservation>& pairs) {
  std::vector<double> out;
  for (const auto& p : pairs) {
    out.push_back(p.s_bengali > p.s_english ? p.s_bengali - p.s_english
                                            : p.s_english - p.s_bengali);
  }
  return out;
}

std::vector<double> oracle_biases(const std::vector<PairedObservation>& pairs) {
  std::vector<double> out;
  for (const auto& p : pairs) out.push_back(p.s_english - p.s_bengali);
  return out;
}

namespace {

// mt19937_64 is fully specified by the standard; the conversions below are
// spelled out because the std distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // [0, 1)
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // [0, bound)
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

enum class Kind { inversion, robust, other };

constexpr double kMargin = 0.05;

PredictionRecord emit(const SynthPlan& plan, const std::string& id, Lang lang, Dialect dialect,
                      double score) {
  PredictionRecord r;
  r.pair_id = id;
  r.lang = lang;
  r.dialect = dialect;
  r.model_id = plan.model_id;
  r.label = score < 0.0 ? "negative" : "positive";
  r.score = std::fabs(score);
  return r;
}

}  // namespace

std::vector<PredictionRecord> synth_corpus(const SynthPlan& plan) {
  plan.config.validate();
  const std::size_t n = plan.pairs;
  const double tau = plan.config.tau;
  const double rt = plan.config.robust_threshold;
  if (plan.inversions + plan.robust_pairs > n) {
    throw std::invalid_argument("planted inversions + robust pairs exceed the corpus size");
  }
  if (!(plan.sadhu_fraction >= 0.0 && plan.sadhu_fraction <= 1.0)) {
    throw std::invalid_argument("sadhu fraction must lie in [0, 1]");
  }
  if (plan.inversions > 0 && tau + kMargin >= 1.0) {
    throw std::invalid_argument("tau too large to plant inversions with a 0.05 margin");
  }
  if (plan.inversions > 0 && rt > 2.0 - kMargin) {
    throw std::invalid_argument("robust threshold too large to keep inversions non-robust");
  }
  const std::size_t others = n - plan.inversions - plan.robust_pairs;
  if (others > 0 && rt + kMargin > 1.0) {
    throw std::invalid_argument(
        "robust threshold too large to plant non-robust, non-inverted pairs");
  }

  Rng rng(plan.seed);
  std::vector<Kind> kinds;
  kinds.insert(kinds.end(), plan.inversions, Kind::inversion);
  kinds.insert(kinds.end(), plan.robust_pairs, Kind::robust);
  kinds.insert(kinds.end(), others, Kind::other);
  rng.shuffle(kinds);

  const auto sadhu_count =
      static_cast<std::size_t>(std::llround(plan.sadhu_fraction * static_cast<double>(n)));
  std::vector<Dialect> dialects(n, Dialect::cholito);
  std::fill_n(dialects.begin(), sadhu_count, Dialect::sadhu);
  rng.shuffle(dialects);

  std::size_t width = 6;
  for (std::size_t v = n; v >= 1000000; v /= 10) ++width;

  std::vector<PredictionRecord> out;
  out.reserve(2 * n);
  double bias_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double first = 0.0;   // one stream's score
    double second = 0.0;  // the other stream's score
    switch (kinds[i]) {
      case Kind::inversion: {
        const double lo = tau + kMargin;
        double a = 0.0;
        double b = 0.0;
        for (int attempt = 0;; ++attempt) {
          if (attempt == 100000) throw std::invalid_argument("cannot plant a non-robust inversion");
          a = lo + (1.0 - lo) * (1.0 - rng.unit());
          b = lo + (1.0 - lo) * (1.0 - rng.unit());
          if (a + b >= rt) break;
        }
        first = a;
        second = -b;
        break;
      }
      case Kind::robust: {
        const double sign = rng.below(2) ? 1.0 : -1.0;
        const double x = rng.unit();
        const double y = std::clamp(x + (2.0 * rng.unit() - 1.0) * 0.5 * rt, 0.0, 1.0);
        first = sign * x;
        second = sign * y;
        break;
      }
      case Kind::other: {
        const double sign = rng.below(2) ? 1.0 : -1.0;
        const double d = rt + kMargin + (1.0 - rt - kMargin) * rng.unit();
        const double x = (1.0 - d) * rng.unit();
        first = sign * x;
        second = sign * (x + d);
        break;
      }
    }
    // Orientation: which stream carries `first`. Pick the one that keeps the
    // running mean bias closest to the target.
    const double target = plan.mean_bias_target * static_cast<double>(i + 1);
    const double bias_if_bn_first = second - first;
    const bool bn_first = std::fabs(bias_total + bias_if_bn_first - target) <=
                          std::fabs(bias_total - bias_if_bn_first - target);
    const double s_bn = bn_first ? first : second;
    const double s_en = bn_first ? second : first;
    bias_total += s_en - s_bn;

    std::string id = std::to_string(i + 1);
    id = "p" + std::string(width - std::min(width, id.size()), '0') + id;
    out.push_back(emit(plan, id, Lang::bn, dialects[i], s_bn));
    out.push_back(emit(plan, id, Lang::en, dialects[i], s_en));
  }
  return out;
}

std::string synth_jsonl(const SynthPlan& plan) {
  std::string text;
  for (const auto& r : synth_corpus(plan)) {
    text += to_jsonl(r);
    text += '\n';
  }
  return text;
}

}  // namespace sentaudit::oracle
