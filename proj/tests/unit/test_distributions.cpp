#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "random_corpus.hpp"
#include "sentaudit/distributions.hpp"
#include "sentaudit/oracle.hpp"

using namespace sentaudit;

TEST_CASE("edge handling: right edge closed only on the last bin") {
  const std::vector<double> values{0.0, 0.5, 1.0, 2.0};
  const auto h = histogram(values, {0.0, 2.0, 4});
  CHECK(h.counts == std::vector<std::size_t>{1, 1, 1, 1});
  const auto two = histogram(values, {0.0, 2.0, 2});
  CHECK(two.counts == std::vector<std::size_t>{2, 2});
}

TEST_CASE("documented examples") {
  const std::vector<double> a{0.0, 0.5, 2.0};
  CHECK(histogram(a, {0.0, 2.0, 4}).counts == std::vector<std::size_t>{1, 1, 0, 1});
  const std::vector<double> b{-2.0, 2.0};
  CHECK(histogram(b, {-2.0, 2.0, 2}, HistogramMetric::bias).counts == std::vector<std::size_t>{1, 1});
  const auto empty = histogram({}, {0.0, 2.0, 4});
  CHECK(empty.counts == std::vector<std::size_t>{0, 0, 0, 0});
  CHECK(empty.n_total == 0);
}

TEST_CASE("out-of-range values are tracked, not binned") {
  const std::vector<double> values{-0.1, 0.3, 2.5, std::nan("")};
  const auto h = histogram(values, {0.0, 2.0, 4});
  CHECK(h.n_total == 4);
  CHECK(h.underflow == 1);
  CHECK(h.overflow == 2);
  CHECK(h.counts == std::vector<std::size_t>{1, 0, 0, 0});
}

TEST_CASE("edges are uniform and pinned") {
  const auto edges = uniform_edges({-2.0, 2.0, 80});
  REQUIRE(edges.size() == 81);
  CHECK(edges.front() == -2.0);
  CHECK(edges.back() == 2.0);
  CHECK(edges[40] == 0.0);
  CHECK(std::is_sorted(edges.begin(), edges.end()));
  CHECK_THROWS_AS(uniform_edges({0.0, 2.0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(uniform_edges({1.0, 1.0, 4}), std::invalid_argument);
}

TEST_CASE("mass is conserved and binning matches the oracle") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const auto pairs = fixtures::random_observations(rng, 1 + trial * 5, 0.1);
    std::vector<PairMetrics> pm;
    for (const auto& p : pairs) pm.push_back(compute_pair_metrics(p, MetricConfig{}));
    const std::size_t bins = 1 + static_cast<std::size_t>(trial % 50);
    const auto div = divergence_histogram(pm, {0.0, 2.0, bins});
    const auto bias = bias_histogram(pm, {-2.0, 2.0, 2 * bins});
    std::size_t sum_div = 0;
    std::size_t sum_bias = 0;
    for (auto c : div.counts) sum_div += c;
    for (auto c : bias.counts) sum_bias += c;
    CHECK(sum_div == pairs.size());
    CHECK(sum_bias == pairs.size());
    CHECK(div.counts == oracle::oracle_histogram(oracle::oracle_divergences(pairs), 0.0, 2.0, bins));
    CHECK(bias.counts ==
          oracle::oracle_histogram(oracle::oracle_biases(pairs), -2.0, 2.0, 2 * bins));
  }
}

TEST_CASE("swapping languages mirrors the bias histogram") {
  std::mt19937_64 rng(43);
  const auto pairs = fixtures::continuous_observations(rng, 2000);
  std::vector<PairMetrics> forward;
  std::vector<PairMetrics> swapped;
  for (const auto& p : pairs) {
    forward.push_back(compute_pair_metrics(p, MetricConfig{}));
    swapped.push_back(
        compute_pair_metrics({p.pair_id, p.dialect, p.s_english, p.s_bengali}, MetricConfig{}));
  }
  auto a = bias_histogram(forward).counts;
  const auto b = bias_histogram(swapped).counts;
  std::reverse(a.begin(), a.end());
  CHECK(a == b);
}

TEST_CASE("histograms add when their edges agree") {
  const std::vector<double> left{0.1, 0.2};
  const std::vector<double> right{1.9, 2.0};
  auto h = histogram(left, {0.0, 2.0, 4});
  h += histogram(right, {0.0, 2.0, 4});
  CHECK(h.counts == std::vector<std::size_t>{2, 0, 0, 2});
  CHECK(h.n_total == 4);
  CHECK_THROWS_AS(h += histogram(right, {0.0, 2.0, 5}), std::invalid_argument);
}

TEST_CASE("serialization") {
  const std::vector<double> values{0.25, 1.75};
  const auto h = histogram(values, {0.0, 2.0, 2});
  CHECK(histogram_to_csv(h) == "edge_lo,edge_hi,count\n0.0,1.0,1\n1.0,2.0,1\n");
  const auto json = histogram_to_json(h);
  CHECK(json.find("\"metric\": \"divergence\"") != std::string::npos);
  CHECK(json.find("\"n\": 2") != std::string::npos);
}

namespace {
FinalStats rate(std::string model, double pct) {
  FinalStats s;
  s.model_id = std::move(model);
  s.inversion_rate_pct = pct;
  return s;
}
}  // namespace

TEST_CASE("inversion series is ascending by rate") {
  const std::vector<FinalStats> stats{rate("mDistilBERT", 28.7), rate("Tabularis", 8.6),
                                      rate("IndicBERT", 20.0), rate("XLM-R", 3.6)};
  const auto series = inversion_series(stats);
  REQUIRE(series.size() == 4);
  CHECK(series[0].first == "XLM-R");
  CHECK(series[1].first == "Tabularis");
  CHECK(series[2].first == "IndicBERT");
  CHECK(series[3].first == "mDistilBERT");
}

TEST_CASE("inversion series ties break by model id") {
  const std::vector<FinalStats> stats{rate("b", 5.0), rate("a", 5.0), rate("c", 1.0)};
  const auto series = inversion_series(stats);
  CHECK(series[0].first == "c");
  CHECK(series[1].first == "a");
  CHECK(series[2].first == "b");

  auto sadhu = rate("x", 1.0);
  sadhu.stratum = Stratum::sadhu;
  const std::vector<FinalStats> wrong{sadhu};
  CHECK_THROWS_AS(inversion_series(wrong), std::invalid_argument);
}
