#include "sentaudit/report.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sentaudit/aggregate.hpp"
#include "sentaudit/csv.hpp"

namespace sentaudit {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::string_view kGapFootnote =
    "Sadhu Err. Inc. (%) is computed from the unrounded dialect gap and cholito mean; "
    "recomputing it from the rounded values shown may differ by a few tenths of a point.";

}  // namespace

ModelBlock make_model_block(std::string model_id, std::optional<FinalStats> all,
                            std::optional<FinalStats> sadhu, std::optional<FinalStats> cholito,
                            PairingReport integrity) {
  ModelBlock block;
  block.model_id = std::move(model_id);
  block.all = std::move(all);
  block.sadhu = std::move(sadhu);
  block.cholito = std::move(cholito);
  block.integrity = std::move(integrity);
  if (!block.all) block.warnings.push_back("no complete pairs: all rows are null");
  if (!block.sadhu) block.warnings.push_back("sadhu stratum is empty: sadhu rows and gap are null");
  if (!block.cholito) {
    block.warnings.push_back("cholito stratum is empty: cholito rows and gap are null");
  }
  if (block.sadhu && block.cholito) {
    block.gap = dialect_gap(*block.sadhu, *block.cholito);
    block.gap->model_id = block.model_id;
    if (!block.gap->gap_pct) {
      block.warnings.push_back("cholito mean divergence is 0: Sadhu Err. Inc. is undefined");
    }
  }
  return block;
}

std::array<MetricRow, kMetricRowCount> render_model_block(const ModelBlock& b) {
  const auto from_all = [&](auto field) -> std::optional<double> {
    if (!b.all) return std::nullopt;
    return field(*b.all);
  };
  std::optional<double> gap;
  std::optional<double> gap_pct;
  if (b.gap) {
    gap = b.gap->gap;
    gap_pct = b.gap->gap_pct;
  }
  return {{
      {"Mean Div.", from_all([](const FinalStats& s) { return s.mean_divergence; }),
       RowFormat::score},
      {"Std Dev.", b.all ? b.all->std_divergence : std::nullopt, RowFormat::score},
      {"Sadhu Div.", b.sadhu ? std::optional(b.sadhu->mean_divergence) : std::nullopt,
       RowFormat::score},
      {"Cholito Div.", b.cholito ? std::optional(b.cholito->mean_divergence) : std::nullopt,
       RowFormat::score},
      {"Dialect Gap", gap, RowFormat::score},
      {"Sadhu Err. Inc. (%)", gap_pct, RowFormat::percent},
      {"Robustness (%)", from_all([](const FinalStats& s) { return s.robustness_pct; }),
       RowFormat::percent},
      {"Inversions",
       from_all([](const FinalStats& s) { return static_cast<double>(s.inversion_count); }),
       RowFormat::count},
      {"Inv. Rate (%)", from_all([](const FinalStats& s) { return s.inversion_rate_pct; }),
       RowFormat::percent},
      {"Dir. Bias (En-Bn)", from_all([](const FinalStats& s) { return s.mean_bias; }),
       RowFormat::score},
  }};
}

std::string round_half_away(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const long long scaled = std::llround(value * scale);
  const bool negative = scaled < 0;
  const unsigned long long magnitude =
      negative ? 0ULL - static_cast<unsigned long long>(scaled) : static_cast<unsigned long long>(scaled);
  std::string digits = std::to_string(magnitude);
  if (decimals <= 0) return (negative ? "-" : "") + digits;
  if (digits.size() <= static_cast<std::size_t>(decimals)) {
    digits.insert(0, static_cast<std::size_t>(decimals) + 1 - digits.size(), '0');
  }
  digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
  return (negative ? "-" : "") + digits;
}

std::string format_row_value(const MetricRow& row) {
  if (!row.value) return "null";
  switch (row.format) {
    case RowFormat::score: return round_half_away(*row.value, 3);
    case RowFormat::percent: return round_half_away(*row.value, 1);
    case RowFormat::count: return round_half_away(*row.value, 0);
  }
  return "null";
}

std::optional<ReportFormat> parse_report_format(std::string_view token) noexcept {
  if (token == "json") return ReportFormat::json;
  if (token == "csv") return ReportFormat::csv;
  if (token == "md") return ReportFormat::md;
  return std::nullopt;
}

namespace {

ojson optional_number(const std::optional<double>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

ojson stats_json(const std::optional<FinalStats>& s) {
  if (!s) return nullptr;
  ojson o;
  o["n"] = s->n;
  o["mean_divergence"] = s->mean_divergence;
  o["std_divergence"] = optional_number(s->std_divergence);
  o["robust_count"] = s->robust_count;
  o["robustness_pct"] = s->robustness_pct;
  o["inversion_count"] = s->inversion_count;
  o["inversion_rate_pct"] = s->inversion_rate_pct;
  o["mean_bias"] = s->mean_bias;
  return o;
}

ojson gap_json(const std::optional<DialectGapReport>& g) {
  if (!g) return nullptr;
  ojson o;
  o["sadhu_mean_divergence"] = g->sadhu_mean_divergence;
  o["cholito_mean_divergence"] = g->cholito_mean_divergence;
  o["gap"] = g->gap;
  o["gap_pct"] = optional_number(g->gap_pct);
  return o;
}

ojson integrity_json(const PairingReport& r) {
  ojson o;
  o["total_records"] = r.total_records;
  o["paired_count"] = r.paired_count;
  o["orphaned_bn"] = r.orphaned_bn;
  o["orphaned_en"] = r.orphaned_en;
  o["dialect_conflicts"] = r.dialect_conflicts;
  o["duplicates_rejected"] = r.duplicates_rejected;
  o["conflict_pair_ids"] = r.conflict_pair_ids;
  o["duplicate_pair_ids"] = r.duplicate_pair_ids;
  o["orphan_pair_ids"] = r.orphan_pair_ids;
  return o;
}

ojson bundle_json(const ReportBundle& bundle) {
  ojson doc;
  doc["config"]["tau"] = bundle.config.tau;
  doc["config"]["robust_threshold"] = bundle.config.robust_threshold;
  doc["models"] = ojson::array();
  for (const auto& m : bundle.models) {
    ojson block;
    block["model_id"] = m.model_id;
    block["all"] = stats_json(m.all);
    block["sadhu"] = stats_json(m.sadhu);
    block["cholito"] = stats_json(m.cholito);
    block["dialect_gap"] = gap_json(m.gap);
    block["integrity"] = integrity_json(m.integrity);
    block["table"] = ojson::array();
    for (const auto& row : render_model_block(m)) {
      block["table"].push_back({{"metric", row.label}, {"value", format_row_value(row)}});
    }
    block["warnings"] = m.warnings;
    doc["models"].push_back(std::move(block));
  }
  doc["integrity"] = integrity_json(bundle.integrity);
  doc["histograms"] = bundle.histograms;
  if (bundle.inversion_series) {
    ojson series = ojson::array();
    for (const auto& [model, rate] : *bundle.inversion_series) {
      series.push_back({{"model_id", model},
                        {"inversion_rate_pct", rate},
                        {"display", round_half_away(rate, 1)}});
    }
    doc["inversion_series"] = std::move(series);
  }
  doc["notes"] = ojson::array({kGapFootnote});
  return doc;
}

std::string render_csv(const ReportBundle& bundle) {
  std::ostringstream out;
  csv::write_row(out, {"model_id", "metric", "value"});
  for (const auto& m : bundle.models) {
    for (const auto& row : render_model_block(m)) {
      csv::write_row(out, {m.model_id, std::string(row.label), format_row_value(row)});
    }
  }
  return out.str();
}

std::string render_md(const ReportBundle& bundle) {
  std::ostringstream out;
  out << "# Cross-lingual sentiment alignment audit\n\n";
  out << "tau = " << ojson(bundle.config.tau).dump()
      << ", robust threshold = " << ojson(bundle.config.robust_threshold).dump() << "\n";
  for (const auto& m : bundle.models) {
    out << "\n## " << m.model_id << "\n\n";
    out << "| Metric | " << m.model_id << " |\n";
    out << "|---|---:|\n";
    for (const auto& row : render_model_block(m)) {
      out << "| " << row.label << " | " << format_row_value(row) << " |\n";
    }
    const auto& r = m.integrity;
    out << "\nPairs: " << r.paired_count << " of " << r.total_records << " records paired; "
        << "orphaned bn " << r.orphaned_bn << ", orphaned en " << r.orphaned_en
        << ", dialect conflicts " << r.dialect_conflicts << ", duplicates rejected "
        << r.duplicates_rejected << ".\n";
    for (const auto& w : m.warnings) out << "\n> warning: " << w << "\n";
  }
  if (bundle.inversion_series) {
    out << "\n## Inversion rate by model\n\n";
    for (const auto& [model, rate] : *bundle.inversion_series) {
      out << "- " << model << ": " << round_half_away(rate, 1) << "%\n";
    }
  }
  if (!bundle.histograms.empty()) {
    out << "\n## Histograms\n\n";
    for (const auto& h : bundle.histograms) out << "- " << h << "\n";
  }
  out << "\nNote: " << kGapFootnote << "\n";
  return out.str();
}

std::optional<double> read_optional(const nlohmann::json& v) {
  if (v.is_null()) return std::nullopt;
  return v.get<double>();
}

std::optional<FinalStats> read_stats(const nlohmann::json& v, const std::string& model,
                                     Stratum stratum) {
  if (v.is_null()) return std::nullopt;
  FinalStats s;
  s.model_id = model;
  s.stratum = stratum;
  s.n = v.at("n").get<std::size_t>();
  s.mean_divergence = v.at("mean_divergence").get<double>();
  s.std_divergence = read_optional(v.at("std_divergence"));
  s.robust_count = v.at("robust_count").get<std::size_t>();
  s.robustness_pct = v.at("robustness_pct").get<double>();
  s.inversion_count = v.at("inversion_count").get<std::size_t>();
  s.inversion_rate_pct = v.at("inversion_rate_pct").get<double>();
  s.mean_bias = v.at("mean_bias").get<double>();
  return s;
}

PairingReport read_integrity(const nlohmann::json& v) {
  PairingReport r;
  r.total_records = v.at("total_records").get<std::size_t>();
  r.paired_count = v.at("paired_count").get<std::size_t>();
  r.orphaned_bn = v.at("orphaned_bn").get<std::size_t>();
  r.orphaned_en = v.at("orphaned_en").get<std::size_t>();
  r.dialect_conflicts = v.at("dialect_conflicts").get<std::size_t>();
  r.duplicates_rejected = v.at("duplicates_rejected").get<std::size_t>();
  r.conflict_pair_ids = v.at("conflict_pair_ids").get<std::vector<std::string>>();
  r.duplicate_pair_ids = v.at("duplicate_pair_ids").get<std::vector<std::string>>();
  r.orphan_pair_ids = v.at("orphan_pair_ids").get<std::vector<std::string>>();
  return r;
}

}  // namespace

std::string render_audit(const ReportBundle& bundle, ReportFormat format) {
  if (bundle.models.empty()) throw std::invalid_argument("report needs at least one model block");
  switch (format) {
    case ReportFormat::json: return bundle_json(bundle).dump(2) + "\n";
    case ReportFormat::csv: return render_csv(bundle);
    case ReportFormat::md: return render_md(bundle);
  }
  throw std::invalid_argument("unknown report format");
}

ReportBundle parse_report_json(std::string_view document) {
  try {
    const auto doc = nlohmann::json::parse(document);
    ReportBundle bundle;
    bundle.config.tau = doc.at("config").at("tau").get<double>();
    bundle.config.robust_threshold = doc.at("config").at("robust_threshold").get<double>();
    for (const auto& m : doc.at("models")) {
      ModelBlock block;
      block.model_id = m.at("model_id").get<std::string>();
      block.all = read_stats(m.at("all"), block.model_id, Stratum::all);
      block.sadhu = read_stats(m.at("sadhu"), block.model_id, Stratum::sadhu);
      block.cholito = read_stats(m.at("cholito"), block.model_id, Stratum::cholito);
      if (const auto& g = m.at("dialect_gap"); !g.is_null()) {
        DialectGapReport gap;
        gap.model_id = block.model_id;
        gap.sadhu_mean_divergence = g.at("sadhu_mean_divergence").get<double>();
        gap.cholito_mean_divergence = g.at("cholito_mean_divergence").get<double>();
        gap.gap = g.at("gap").get<double>();
        gap.gap_pct = read_optional(g.at("gap_pct"));
        block.gap = gap;
      }
      block.integrity = read_integrity(m.at("integrity"));
      block.warnings = m.at("warnings").get<std::vector<std::string>>();
      bundle.models.push_back(std::move(block));
    }
    bundle.integrity = read_integrity(doc.at("integrity"));
    bundle.histograms = doc.at("histograms").get<std::vector<std::string>>();
    if (const auto s = doc.find("inversion_series"); s != doc.end()) {
      std::vector<std::pair<std::string, double>> series;
      for (const auto& e : *s) {
        series.emplace_back(e.at("model_id").get<std::string>(),
                            e.at("inversion_rate_pct").get<double>());
      }
      bundle.inversion_series = std::move(series);
    }
    return bundle;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid report JSON: ") + e.what());
  }
}

}  // namespace sentaudit
