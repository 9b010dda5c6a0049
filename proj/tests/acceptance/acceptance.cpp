// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <unistd.h>

#include "json.hpp"
#include "random_corpus.hpp"
#include "sentaudit/cli.hpp"
#include "sentaudit/ingest.hpp"
#include "sentaudit/normalize.hpp"
#include "sentaudit/oracle.hpp"
#include "sentaudit/pipeline.hpp"
#include "sentaudit/report.hpp"
#include "reference_columns.hpp"

namespace fs = std::filesystem;
using namespace sentaudit;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

bool close(double a, double b) {
  return std::fabs(a - b) <= 1e-10 * std::max({std::fabs(a), std::fabs(b), 1.0});
}

void compare_stats(const std::optional<FinalStats>& got, const std::optional<FinalStats>& want,
                   const std::string& where, Outcome& o) {
  if (got.has_value() != want.has_value()) return o.fail(where + ": stratum presence differs");
  if (!got) return;
  if (got->n != want->n) o.fail(where + ": n");
  if (got->robust_count != want->robust_count) o.fail(where + ": robust count");
  if (got->inversion_count != want->inversion_count) o.fail(where + ": inversion count");
  if (!close(got->mean_divergence, want->mean_divergence)) o.fail(where + ": mean divergence");
  if (!close(got->robustness_pct, want->robustness_pct)) o.fail(where + ": robustness");
  if (!close(got->inversion_rate_pct, want->inversion_rate_pct)) o.fail(where + ": inversion rate");
  if (!close(got->mean_bias, want->mean_bias)) o.fail(where + ": mean bias");
  if (got->std_divergence.has_value() != want->std_divergence.has_value()) {
    o.fail(where + ": std presence");
  } else if (got->std_divergence && !close(*got->std_divergence, *want->std_divergence)) {
    o.fail(where + ": std divergence");
  }
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  for (int corpus = 0; corpus < 1000; ++corpus) {
    const std::size_t n = 1 + rng() % 500;
    const double tau = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    const auto pairs = fixtures::random_observations(rng, n, tau);
    AuditOptions options;
    options.config.tau = tau;
    const auto audit = audit_observations("oracle", pairs, options);
    const auto want = oracle::oracle_audit(pairs, options.config, "oracle");
    const std::string tag = "corpus " + std::to_string(corpus);
    compare_stats(audit.summary.finalize(Stratum::all), want.all, tag + " all", o);
    compare_stats(audit.summary.finalize(Stratum::sadhu), want.sadhu, tag + " sadhu", o);
    compare_stats(audit.summary.finalize(Stratum::cholito), want.cholito, tag + " cholito", o);
    if (audit.divergence_histogram.counts !=
        oracle::oracle_histogram(oracle::oracle_divergences(pairs), 0.0, 2.0, 40)) {
      o.fail(tag + ": divergence histogram");
    }
    if (audit.bias_histogram.counts !=
        oracle::oracle_histogram(oracle::oracle_biases(pairs), -2.0, 2.0, 80)) {
      o.fail(tag + ": bias histogram");
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (seconds >= 60.0) o.fail("runtime " + std::to_string(seconds) + " s");
  if (o.pass) o.detail = "1000 corpora in " + round_half_away(seconds, 2) + " s";
  return o;
}

Outcome reference_columns() {
  Outcome o;
  const auto registry = builtin_schemes();
  for (const auto& column : fixtures::kReferenceColumns) {
    const std::string model(column.model);
    const auto pairs = fixtures::build_reference_pairs(column);
    const auto paired = pair_streams(fixtures::to_records(pairs, model));
    if (paired.report.paired_count != fixtures::kReferencePairs || !paired.report.clean()) {
      o.fail(model + ": fixture does not pair cleanly");
      continue;
    }
    const auto observations = observe(paired.pairs, registry.lookup("3class"));
    const auto block = audit_observations(model, observations, AuditOptions{}).block();
    const auto rows = render_model_block(block);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto text = format_row_value(rows[i]);
      if (text != column.printed[i]) {
        o.fail(model + " " + std::string(rows[i].label) + ": rendered " + text + ", printed " +
               std::string(column.printed[i]));
      }
    }

    // (a) inversion counts against printed rates
    const double rate = static_cast<double>(column.inversions()) / 7350.0 * 100.0;
    if (std::fabs(rate - column.inv_rate()) > 0.05) o.fail(model + ": count/7350 vs printed rate");
    // (b) printed gap from printed strata means, at 3 decimals
    if (round_half_away(column.sadhu_div() - column.cholito_div(), 3) != column.printed[4]) {
      o.fail(model + ": printed gap is not sadhu - cholito");
    }
    // (c) percentage recomputed from the printed means
    const double pct = (column.sadhu_div() - column.cholito_div()) / column.cholito_div() * 100.0;
    if (std::fabs(pct - column.sadhu_err_inc()) > 0.3) {
      o.fail(model + ": recomputed percentage off by more than 0.3 pp");
    }
  }
  if (o.pass) o.detail = "4 models, 10 rows each";
  return o;
}

Outcome normalizer_conformance() {
  struct Case {
    const char* scheme;
    const char* label;
    double score;
    double expected;
  };
  const Case cases[] = {
      {"3class", "positive", 0.93, 0.93},    {"3class", "neutral", 0.77, 0.0},
      {"3class", "negative", 0.71, -0.71},   {"3class", "LABEL_2", 0.5, 0.5},
      {"3class", "neu", 0.01, 0.0},          {"2class", "positive", 0.88, 0.88},
      {"2class", "negative", 0.64, -0.64},   {"2class", "LABEL_0", 1.0, -1.0},
      {"5class", "positive", 0.8, 0.4},      {"5class", "very positive", 0.9, 0.9},
      {"5class", "neutral", 0.6, 0.0},       {"5class", "negative", 0.5, -0.25},
      {"5class", "very negative", 0.7, -0.7}, {"5class", "Very_Negative", 0.2, -0.2},
      {"5class", "LABEL_1", 0.3, -0.15},
  };
  Outcome o;
  const auto registry = builtin_schemes();
  for (const auto& c : cases) {
    const PredictionRecord r{"g", Lang::bn, Dialect::sadhu, "m", c.label, c.score, std::nullopt};
    const double got = normalize(r, registry.lookup(c.scheme));
    if (got != c.expected) {
      o.fail(std::string(c.scheme) + " '" + c.label + "': got " + std::to_string(got));
    }
  }
  if (o.pass) o.detail = std::to_string(std::size(cases)) + " cases, 3 schemes";
  return o;
}

Outcome inversion_boundaries() {
  Outcome o;
  std::size_t checks = 0;
  const auto expect = [&](double bn, double en, double tau, bool want) {
    ++checks;
    const PairedObservation p{"b", Dialect::sadhu, bn, en};
    const PairedObservation neg{"b", Dialect::sadhu, -bn, -en};
    const PairedObservation swapped{"b", Dialect::sadhu, en, bn};
    if (is_inversion(p, tau) != want || is_inversion(neg, tau) != want ||
        is_inversion(swapped, tau) != want) {
      o.fail("bn=" + std::to_string(bn) + " en=" + std::to_string(en) + " tau=" +
             std::to_string(tau));
    }
  };
  for (double tau : {0.0, 0.05, 0.1, 0.25, 0.4, 0.499}) {
    expect(tau, -0.9, tau, false);
    expect(0.9, -tau, tau, false);
    expect(tau, -tau, tau, false);
    expect(tau + 1e-9, -0.9, tau, true);
    expect(0.9, -(tau + 1e-9), tau, true);
    expect(tau + 1e-9, -(tau + 1e-9), tau, true);
    expect(tau - 1e-9, -0.9, tau, false);
    expect(0.9, -(tau - 1e-9), tau, false);
    expect(0.9, 0.9, tau, false);
    expect(0.0, 0.0, tau, false);
  }
  if (o.pass) o.detail = std::to_string(checks) + " boundary cases x 3 symmetries";
  return o;
}

class Scratch {
 public:
  Scratch() : root_(fs::temp_directory_path() / ("sentaudit_acceptance_" + std::to_string(::getpid()))) {
    fs::create_directories(root_);
  }
  ~Scratch() { fs::remove_all(root_); }
  std::string path(const std::string& name) const { return (root_ / name).string(); }

 private:
  fs::path root_;
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome planted_recovery(const Scratch& scratch) {
  Outcome o;
  std::mt19937_64 rng(777);
  for (int config = 0; config < 50; ++config) {
    const std::size_t n = 1 + rng() % 2000;
    const std::size_t k = rng() % (n + 1);
    const std::size_t m = rng() % (n - k + 1);
    const double f = static_cast<double>(rng() % 21) / 20.0;
    const double tau = static_cast<double>(rng() % 40) / 100.0;
    const double rt = 0.05 + static_cast<double>(rng() % 30) / 100.0;
    const std::string corpus = scratch.path("planted_" + std::to_string(config) + ".jsonl");
    const auto number = [](double v) { return nlohmann::json(v).dump(); };
    const auto synth = cli({"synth", "--pairs", std::to_string(n), "--inversions",
                            std::to_string(k), "--robust", std::to_string(m), "--sadhu-fraction",
                            number(f), "--tau", number(tau), "--robust-threshold", number(rt),
                            "--seed", std::to_string(rng()), "--model", "synth", "--out", corpus});
    const std::string tag = "config " + std::to_string(config);
    if (synth.code != 0) {
      o.fail(tag + ": synth exited " + std::to_string(synth.code) + ": " + synth.err);
      continue;
    }
    const auto audit = cli({"audit", "--predictions", corpus, "--scheme", "2class", "--tau",
                            number(tau), "--robust-threshold", number(rt)});
    if (audit.code != 0) {
      o.fail(tag + ": audit exited " + std::to_string(audit.code) + ": " + audit.err);
      continue;
    }
    const auto doc = nlohmann::json::parse(audit.out);
    const auto& model = doc["models"][0];
    const auto sadhu_expected =
        static_cast<std::size_t>(std::llround(f * static_cast<double>(n)));
    const std::size_t sadhu_got =
        model["sadhu"].is_null() ? 0 : model["sadhu"]["n"].get<std::size_t>();
    if (model["all"]["n"].get<std::size_t>() != n) o.fail(tag + ": pair count");
    if (model["all"]["inversion_count"].get<std::size_t>() != k) o.fail(tag + ": inversions");
    if (model["all"]["robust_count"].get<std::size_t>() != m) o.fail(tag + ": robust pairs");
    if (sadhu_got != sadhu_expected) o.fail(tag + ": sadhu fraction");
    fs::remove(corpus);
  }
  if (o.pass) o.detail = "50 configurations recovered exactly";
  return o;
}

Outcome determinism(const Scratch& scratch) {
  Outcome o;
  const auto a = scratch.path("det_a.jsonl");
  const auto b = scratch.path("det_b.jsonl");
  for (const auto& [path, model, seed] :
       {std::tuple{a, "XLM-R", "11"}, std::tuple{b, "Tabularis", "12"}}) {
    const auto r = cli({"synth", "--pairs", "10000", "--inversions", "1800", "--robust", "3000",
                        "--sadhu-fraction", "0.5", "--mean-bias", "0.05", "--seed", seed,
                        "--model", model, "--out", path});
    if (r.code != 0) {
      o.fail("synth failed: " + r.err);
      return o;
    }
  }

  const auto outputs = [&](const std::vector<std::string>& base, const std::string& workers) {
    std::vector<std::string> args = base;
    args.insert(args.end(), {"--workers", workers, "--dump-pairs", scratch.path("pairs.jsonl"),
                             "--hist-out", scratch.path("hist_")});
    const auto r = cli(args);
    std::string all = std::to_string(r.code) + "\n" + r.out + r.err;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(scratch.path(""))) {
      const auto name = entry.path().filename().string();
      if (name.rfind("pairs", 0) == 0 || name.rfind("hist_", 0) == 0) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      all += "\n== " + f.filename().string() + "\n" + slurp(f.string());
      fs::remove(f);
    }
    return all;
  };

  std::size_t runs = 0;
  for (const auto& command :
       {std::vector<std::string>{"audit", "--predictions", a},
        std::vector<std::string>{"audit", "--predictions", a, "--format", "md"},
        std::vector<std::string>{"compare", "--predictions", a, "--predictions", b},
        std::vector<std::string>{"compare", "--predictions", b, "--predictions", a, "--format",
                                 "csv"}}) {
    const auto reference = outputs(command, "1");
    if (reference.rfind("0\n", 0) != 0) {
      o.fail(command[0] + " did not succeed");
      continue;
    }
    for (const auto* workers : {"1", "2", "4", "8", "1", "8"}) {
      ++runs;
      if (outputs(command, workers) != reference) {
        o.fail(command[0] + " output differs with --workers " + workers);
      }
    }
  }
  if (o.pass) o.detail = std::to_string(runs) + " repeated runs byte-identical";
  return o;
}

}  // namespace

int main() {
  Scratch scratch;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle_equivalence", oracle_equivalence},
      {"reference_columns", reference_columns},
      {"normalizer_conformance", normalizer_conformance},
      {"inversion_boundaries", inversion_boundaries},
      {"planted_recovery", [&] { return planted_recovery(scratch); }},
      {"determinism", [&] { return determinism(scratch); }},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome.fail(std::string("exception: ") + e.what());
    }
    std::cout << (outcome.pass ? "PASS " : "FAIL ") << name;
    if (!outcome.detail.empty()) std::cout << " (" << outcome.detail << ")";
    std::cout << std::endl;
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
