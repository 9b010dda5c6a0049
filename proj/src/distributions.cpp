#include "sentaudit/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sentaudit/csv.hpp"

namespace sentaudit {

std::string_view to_string(HistogramMetric metric) noexcept {
  return metric == HistogramMetric::divergence ? "divergence" : "bias";
}

Histogram& Histogram::operator+=(const Histogram& other) {
  if (metric != other.metric || edges != other.edges) {
    throw std::invalid_argument("histograms with different metric or edges cannot be merged");
  }
  for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += other.counts[k];
  n_total += other.n_total;
  underflow += other.underflow;
  overflow += other.overflow;
  return *this;
}

std::vector<double> uniform_edges(const HistogramSpec& spec) {
  if (spec.bins < 1) throw std::invalid_argument("histogram needs at least one bin");
  if (!(spec.lo < spec.hi)) throw std::invalid_argument("histogram range needs lo < hi");
  std::vector<double> edges(spec.bins + 1);
  const double width = spec.hi - spec.lo;
  for (std::size_t k = 0; k < spec.bins; ++k) {
    edges[k] = spec.lo + width * static_cast<double>(k) / static_cast<double>(spec.bins);
  }
  edges[spec.bins] = spec.hi;
  return edges;
}

Histogram histogram(std::span<const double> values, const HistogramSpec& spec,
                    HistogramMetric metric) {
  Histogram h;
  h.metric = metric;
  h.edges = uniform_edges(spec);
  h.counts.assign(spec.bins, 0);
  for (const double x : values) {
    ++h.n_total;
    if (x < spec.lo) {
      ++h.underflow;
    } else if (x > spec.hi || std::isnan(x)) {
      ++h.overflow;
    } else if (x == spec.hi) {
      ++h.counts.back();
    } else {
      // First edge strictly greater than x closes x's bin.
      const auto it = std::upper_bound(h.edges.begin(), h.edges.end(), x);
      ++h.counts[static_cast<std::size_t>(it - h.edges.begin()) - 1];
    }
  }
  return h;
}

Histogram divergence_histogram(std::span<const PairMetrics> pairs, const HistogramSpec& spec) {
  std::vector<double> values;
  values.reserve(pairs.size());
  for (const auto& p : pairs) values.push_back(p.divergence);
  return histogram(values, spec, HistogramMetric::divergence);
}

Histogram bias_histogram(std::span<const PairMetrics> pairs, const HistogramSpec& spec) {
  std::vector<double> values;
  values.reserve(pairs.size());
  for (const auto& p : pairs) values.push_back(p.bias);
  return histogram(values, spec, HistogramMetric::bias);
}

std::string histogram_to_json(const Histogram& h) {
  nlohmann::ordered_json doc;
  doc["metric"] = std::string(to_string(h.metric));
  doc["edges"] = h.edges;
  doc["counts"] = h.counts;
  doc["n"] = h.n_total;
  return doc.dump(2) + "\n";
}

std::string histogram_to_csv(const Histogram& h) {
  std::ostringstream out;
  out << "edge_lo,edge_hi,count\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    // nlohmann's number formatting gives the shortest round-trip text.
    csv::write_row(out, {nlohmann::json(h.edges[k]).dump(), nlohmann::json(h.edges[k + 1]).dump(),
                         std::to_string(h.counts[k])});
  }
  return out.str();
}

std::vector<std::pair<std::string, double>> inversion_series(std::span<const FinalStats> stats) {
  std::vector<std::pair<std::string, double>> series;
  series.reserve(stats.size());
  for (const auto& s : stats) {
    if (s.stratum != Stratum::all) {
      throw std::invalid_argument("inversion series needs stratum 'all' statistics");
    }
    series.emplace_back(s.model_id, s.inversion_rate_pct);
  }
  std::sort(series.begin(), series.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  });
  return series;
}

}  // namespace sentaudit
