#include "sentaudit/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "sentaudit/oracle.hpp"
#include "sentaudit/pipeline.hpp"

namespace sentaudit::cli {

namespace {

namespace fs = std::filesystem;

/// Bad flags or flag combinations; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AuditFlags {
  std::vector<std::string> predictions;
  std::string input_format;
  std::string scheme;
  std::string scheme_map;
  double tau = 0.1;
  double robust_threshold = 0.1;
  std::string format = "json";
  std::string out;
  std::string dump_pairs;
  std::string hist_out;
  std::size_t bins_div = 40;
  std::size_t bins_bias = 80;
  std::string mode = "strict";
  std::size_t workers = 1;
};

struct SynthFlags {
  std::size_t pairs = 100;
  std::size_t inversions = 0;
  std::size_t robust = 0;
  double sadhu_fraction = 0.5;
  double mean_bias = 0.0;
  std::uint64_t seed = 0;
  double tau = 0.1;
  double robust_threshold = 0.1;
  std::string model = "synth";
  std::string output_format = "jsonl";
  std::string out;
};

struct ValidateFlags {
  std::vector<std::string> files;
  std::string input_format;
  std::string mode = "strict";
};

void add_audit_flags(CLI::App& cmd, AuditFlags& f) {
  cmd.add_option("--predictions", f.predictions, "Prediction file (JSONL or CSV); repeatable")
      ->required();
  cmd.add_option("--input-format", f.input_format,
                 "jsonl or csv (default: from file extension)");
  cmd.add_option("--scheme", f.scheme, "Label scheme id or scheme file applied to every model");
  cmd.add_option("--scheme-map", f.scheme_map, "JSON file mapping model ids to schemes");
  cmd.add_option("--tau", f.tau, "Inversion noise threshold")->capture_default_str();
  cmd.add_option("--robust-threshold", f.robust_threshold, "Robustness divergence threshold")
      ->capture_default_str();
  cmd.add_option("--format", f.format, "Report format: json, csv or md")->capture_default_str();
  cmd.add_option("--out", f.out, "Report path (default: stdout)");
  cmd.add_option("--dump-pairs", f.dump_pairs, "Write per-pair metrics JSONL here");
  cmd.add_option("--hist-out", f.hist_out, "Path prefix for histogram JSON/CSV files");
  cmd.add_option("--hist-bins-div", f.bins_div, "Divergence histogram bins over [0,2]")
      ->capture_default_str();
  cmd.add_option("--hist-bins-bias", f.bins_bias, "Bias histogram bins over [-2,2]")
      ->capture_default_str();
  cmd.add_option("--mode", f.mode, "Validation mode: strict or lenient")->capture_default_str();
  cmd.add_option("--workers", f.workers, "Worker threads for metric aggregation")
      ->capture_default_str();
}

std::string safe_file_part(std::string_view s) {
  std::string out;
  for (const char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_';
    out += ok ? c : '_';
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw DataError("cannot write '" + path.string() + "'");
  file << content;
  if (!file) throw DataError("failed writing '" + path.string() + "'");
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    write_file(path, content);
  }
}

MetricConfig checked_config(double tau, double robust_threshold) {
  MetricConfig config{tau, robust_threshold};
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return config;
}

ValidationMode checked_mode(const std::string& token) {
  const auto mode = parse_validation_mode(token);
  if (!mode) throw UsageError("--mode must be strict or lenient");
  return *mode;
}

InputFormat input_format_for(const std::string& flag, const fs::path& path) {
  if (flag.empty()) return format_from_path(path);
  const auto format = parse_input_format(flag);
  if (!format) throw UsageError("--input-format must be jsonl or csv");
  return *format;
}

struct SourcedRecords {
  std::vector<PredictionRecord> records;
  std::map<std::pair<std::string, Lang>, std::string> origin;  // key -> "file:line"
};

/// Loads one file, reporting rejections and warnings on `err`.
LoadResult load_file(const std::string& path, const std::string& format_flag, ValidationMode mode,
                     std::ostream& err) {
  const auto format = input_format_for(format_flag, path);
  LoadResult loaded;
  try {
    loaded = load_predictions(fs::path(path), format, mode);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
  for (const auto& w : loaded.warnings) err << "warning: " << path << ": " << w << "\n";
  for (const auto& r : loaded.rejections) {
    err << "warning: " << path << ": rejected " << r.reason << "\n";
  }
  return loaded;
}

std::string join(const std::vector<std::string>& items, std::size_t limit = 20) {
  std::string s;
  for (std::size_t i = 0; i < items.size() && i < limit; ++i) {
    s += (i ? ", " : "") + items[i];
  }
  if (items.size() > limit) s += ", ... (" + std::to_string(items.size() - limit) + " more)";
  return s;
}

/// Prints integrity problems. Returns true when they are fatal in `mode`.
bool report_pairing(const std::string& model, const PairingReport& r, ValidationMode mode,
                    std::ostream& err) {
  const bool strict = mode == ValidationMode::strict;
  const char* severity = strict ? "error" : "warning";
  if (r.dialect_conflicts) {
    err << severity << ": model '" << model << "': " << r.dialect_conflicts
        << " dialect conflict(s): " << join(r.conflict_pair_ids) << "\n";
  }
  if (r.duplicates_rejected) {
    err << severity << ": model '" << model << "': " << r.duplicates_rejected
        << " duplicate record(s) for pair_id(s): " << join(r.duplicate_pair_ids) << "\n";
  }
  if (r.orphaned_bn || r.orphaned_en) {
    err << "warning: model '" << model << "': dropped " << r.orphaned_bn + r.orphaned_en
        << " orphaned record(s) (bn " << r.orphaned_bn << ", en " << r.orphaned_en
        << "): " << join(r.orphan_pair_ids) << "\n";
  }
  return strict && (r.dialect_conflicts || r.duplicates_rejected);
}

int cmd_audit(const AuditFlags& f, bool compare, std::ostream& out, std::ostream& err) {
  const MetricConfig config = checked_config(f.tau, f.robust_threshold);
  const ValidationMode mode = checked_mode(f.mode);
  const auto format = parse_report_format(f.format);
  if (!format) throw UsageError("--format must be json, csv or md");
  if (f.bins_div < 1 || f.bins_bias < 1) throw UsageError("histogram bin counts must be >= 1");
  if (f.workers < 1) throw UsageError("--workers must be >= 1");
  if (compare && f.predictions.size() < 2) {
    throw UsageError("compare needs at least two --predictions files");
  }

  SchemeRegistry registry = builtin_schemes();
  if (!f.scheme_map.empty()) apply_scheme_map(registry, f.scheme_map);
  const LabelScheme* forced = nullptr;
  std::optional<LabelScheme> forced_storage;
  if (!f.scheme.empty()) {
    forced = registry.find(f.scheme);
    if (!forced) {
      if (!fs::exists(f.scheme)) {
        throw UsageError("--scheme '" + f.scheme + "' is neither a known scheme id nor a file");
      }
      forced_storage = load_scheme_file(f.scheme);
      forced = &*forced_storage;
    }
  }

  // model_id -> records, plus where each record came from.
  std::map<std::string, SourcedRecords> by_model;
  std::map<std::string, std::string> model_file;
  for (const auto& path : f.predictions) {
    LoadResult loaded = load_file(path, f.input_format, mode, err);
    std::vector<std::string> models_in_file;
    for (std::size_t i = 0; i < loaded.records.size(); ++i) {
      auto& rec = loaded.records[i];
      auto& bucket = by_model[rec.model_id];
      bucket.origin.try_emplace({rec.pair_id, rec.lang},
                                path + ":" + std::to_string(loaded.lines[i]));
      if (std::find(models_in_file.begin(), models_in_file.end(), rec.model_id) ==
          models_in_file.end()) {
        models_in_file.push_back(rec.model_id);
      }
      bucket.records.push_back(std::move(rec));
    }
    if (compare) {
      if (models_in_file.size() != 1) {
        throw DataError(path + ": compare expects exactly one model per file, found " +
                        std::to_string(models_in_file.size()));
      }
      const auto [it, inserted] = model_file.emplace(models_in_file.front(), path);
      if (!inserted) {
        throw DataError("model '" + it->first + "' appears in both '" + it->second + "' and '" +
                        path + "'");
      }
    }
  }
  if (by_model.empty()) throw DataError("no valid prediction records");

  AuditOptions options;
  options.config = config;
  options.divergence_bins = {0.0, 2.0, f.bins_div};
  options.bias_bins = {-2.0, 2.0, f.bins_bias};
  options.workers = f.workers;

  ReportBundle bundle;
  bundle.config = config;
  std::vector<FinalStats> overall;
  bool fatal = false;

  for (const auto& [model, sourced] : by_model) {
    const LabelScheme* scheme = forced;
    if (!scheme) {
      try {
        scheme = &registry.for_model(model);
      } catch (const DataError& e) {
        throw UsageError(std::string(e.what()) + "; pass --scheme or --scheme-map");
      }
    }

    PairingResult paired = pair_streams(sourced.records);
    fatal |= report_pairing(model, paired.report, mode, err);
    if (fatal) continue;

    std::vector<PairedObservation> observations;
    observations.reserve(paired.pairs.size());
    for (const auto& p : paired.pairs) {
      const auto score = [&](const PredictionRecord& r) {
        try {
          return normalize(r, *scheme);
        } catch (const DataError& e) {
          const auto where = sourced.origin.find({r.pair_id, r.lang});
          throw DataError((where != sourced.origin.end() ? where->second + ": " : "") + e.what());
        }
      };
      observations.push_back(
          make_observation(p.bengali.pair_id, p.bengali.dialect, score(p.bengali), score(p.english)));
    }

    ModelAudit audit = audit_observations(model, observations, options, paired.report);
    ModelBlock block = audit.block();
    for (const auto& w : block.warnings) err << "warning: model '" << model << "': " << w << "\n";
    if (block.all) overall.push_back(*block.all);
    bundle.integrity += audit.integrity;

    const bool many = by_model.size() > 1;
    if (!f.dump_pairs.empty()) {
      fs::path path(f.dump_pairs);
      if (many) {
        path = path.parent_path() /
               (path.stem().string() + "." + safe_file_part(model) + path.extension().string());
      }
      std::string text;
      for (const auto& pm : audit.pair_metrics) text += to_jsonl(pm) + "\n";
      write_file(path, text);
    }
    if (!f.hist_out.empty()) {
      const std::string base = f.hist_out + safe_file_part(model);
      for (const auto* h : {&audit.divergence_histogram, &audit.bias_histogram}) {
        const std::string stem = base + "." + std::string(to_string(h->metric));
        write_file(stem + ".json", histogram_to_json(*h));
        write_file(stem + ".csv", histogram_to_csv(*h));
        bundle.histograms.push_back(stem + ".json");
        bundle.histograms.push_back(stem + ".csv");
      }
    }
    bundle.models.push_back(std::move(block));
  }
  if (fatal) return kDataError;

  if (compare) bundle.inversion_series = inversion_series(overall);
  emit(f.out, render_audit(bundle, *format), out);
  return kSuccess;
}

int cmd_synth(const SynthFlags& f, std::ostream& out) {
  oracle::SynthPlan plan;
  plan.pairs = f.pairs;
  plan.inversions = f.inversions;
  plan.robust_pairs = f.robust;
  plan.sadhu_fraction = f.sadhu_fraction;
  plan.mean_bias_target = f.mean_bias;
  plan.seed = f.seed;
  plan.config = checked_config(f.tau, f.robust_threshold);
  plan.model_id = f.model;
  if (f.output_format != "jsonl" && f.output_format != "csv") {
    throw UsageError("--output-format must be jsonl or csv");
  }

  std::vector<PredictionRecord> records;
  try {
    records = oracle::synth_corpus(plan);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("infeasible plan: ") + e.what());
  }
  std::string text;
  if (f.output_format == "csv") {
    text = std::string(kCsvHeader) + "\n";
    for (const auto& r : records) text += to_csv_row(r);
  } else {
    for (const auto& r : records) text += to_jsonl(r) + "\n";
  }
  emit(f.out, text, out);
  return kSuccess;
}

int cmd_validate(const ValidateFlags& f, std::ostream& out, std::ostream& err) {
  const ValidationMode mode = checked_mode(f.mode);
  bool clean = true;
  for (const auto& path : f.files) {
    LoadResult loaded = load_file(path, f.input_format, mode, err);
    out << path << ": " << loaded.records.size() << " record(s) accepted, "
        << loaded.rejections.size() << " rejected\n";
    clean &= loaded.rejections.empty();

    std::map<std::string, std::vector<PredictionRecord>> by_model;
    for (auto& r : loaded.records) by_model[r.model_id].push_back(std::move(r));
    for (const auto& [model, records] : by_model) {
      const auto paired = pair_streams(records);
      const auto& r = paired.report;
      out << "  model " << model << ": " << r.paired_count << " pair(s); orphaned bn "
          << r.orphaned_bn << ", en " << r.orphaned_en << "; dialect conflicts "
          << r.dialect_conflicts << "; duplicates rejected " << r.duplicates_rejected << "\n";
      if (r.dialect_conflicts) out << "    conflicting pair_ids: " << join(r.conflict_pair_ids) << "\n";
      if (r.duplicates_rejected) {
        out << "    duplicated pair_ids: " << join(r.duplicate_pair_ids) << "\n";
      }
      if (!r.orphan_pair_ids.empty()) out << "    orphaned pair_ids: " << join(r.orphan_pair_ids) << "\n";
      clean &= r.clean();
    }
  }
  out << (clean ? "OK" : "FAILED") << "\n";
  return clean ? kSuccess : kDataError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-lingual sentiment alignment auditing", "sentaudit"};
  app.require_subcommand(1);

  AuditFlags audit_flags;
  auto* audit = app.add_subcommand("audit", "Audit one or more models' paired predictions");
  add_audit_flags(*audit, audit_flags);

  AuditFlags compare_flags;
  auto* compare =
      app.add_subcommand("compare", "Audit several models side by side with an inversion series");
  add_audit_flags(*compare, compare_flags);

  SynthFlags synth_flags;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with planted metrics");
  synth->add_option("--pairs", synth_flags.pairs, "Number of pairs")->capture_default_str();
  synth->add_option("--inversions", synth_flags.inversions, "Planted inversions")
      ->capture_default_str();
  synth->add_option("--robust", synth_flags.robust, "Planted robust pairs")->capture_default_str();
  synth->add_option("--sadhu-fraction", synth_flags.sadhu_fraction, "Fraction of sadhu pairs")
      ->capture_default_str();
  synth->add_option("--mean-bias", synth_flags.mean_bias, "Target mean directional bias")
      ->capture_default_str();
  synth->add_option("--seed", synth_flags.seed, "Random seed")->capture_default_str();
  synth->add_option("--tau", synth_flags.tau, "Inversion noise threshold")->capture_default_str();
  synth->add_option("--robust-threshold", synth_flags.robust_threshold,
                    "Robustness divergence threshold")
      ->capture_default_str();
  synth->add_option("--model", synth_flags.model, "Model id written into records")
      ->capture_default_str();
  synth->add_option("--output-format", synth_flags.output_format, "jsonl or csv")
      ->capture_default_str();
  synth->add_option("--out", synth_flags.out, "Output path (default: stdout)");

  ValidateFlags validate_flags;
  auto* validate = app.add_subcommand("validate", "Check prediction files and stream pairing");
  validate->add_option("files", validate_flags.files, "Prediction files")->required();
  validate->add_option("--input-format", validate_flags.input_format,
                       "jsonl or csv (default: from file extension)");
  validate->add_option("--mode", validate_flags.mode, "strict or lenient")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto parsed = app.get_subcommands();
    out << (parsed.empty() ? app.help() : parsed.front()->help());
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (audit->parsed()) return cmd_audit(audit_flags, false, out, err);
    if (compare->parsed()) return cmd_audit(compare_flags, true, out, err);
    if (synth->parsed()) return cmd_synth(synth_flags, out);
    if (validate->parsed()) return cmd_validate(validate_flags, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

}  // namespace sentaudit::cli
