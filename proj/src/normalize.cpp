#include "sentaudit/normalize.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sentaudit {

namespace detail {
std::vector<std::string_view> builtin_scheme_documents();
std::string_view builtin_model_map_document();
}  // namespace detail

using nlohmann::json;

Multiplier Multiplier::from_double(double value) {
  const double doubled = value * 2.0;
  if (!std::isfinite(value) || doubled != std::round(doubled) || std::fabs(doubled) > 2.0) {
    throw std::invalid_argument("multiplier must be one of -1, -0.5, 0, 0.5, 1");
  }
  return Multiplier(static_cast<int>(doubled));
}

std::string canonical_label(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  bool pending_space = false;
  for (const char ch : label) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c) || c == '_') {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

LabelScheme::LabelScheme(std::string scheme_id, std::vector<LabelClass> classes)
    : id_(std::move(scheme_id)), classes_(std::move(classes)) {
  bool has_positive = false;
  bool has_negative = false;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto& cls = classes_[i];
    has_positive |= cls.multiplier.halves() > 0;
    has_negative |= cls.multiplier.halves() < 0;

    std::vector<std::string> keys{canonical_label(cls.name)};
    for (const auto& alias : cls.aliases) keys.push_back(canonical_label(alias));
    for (auto& key : keys) {
      if (key.empty()) throw DataError("scheme '" + id_ + "': empty class name or alias");
      const auto [it, inserted] = index_.emplace(key, i);
      if (!inserted && it->second != i) {
        throw DataError("scheme '" + id_ + "': alias '" + key + "' maps to both '" +
                        classes_[it->second].name + "' and '" + cls.name + "'");
      }
    }
  }
  if (!has_positive || !has_negative) {
    throw DataError("scheme '" + id_ + "' needs at least one positive and one negative class");
  }
}

const LabelClass* LabelScheme::resolve(std::string_view label) const {
  const auto it = index_.find(canonical_label(label));
  return it == index_.end() ? nullptr : &classes_[it->second];
}

LabelScheme parse_scheme_json(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed scheme JSON: ") + e.what());
  }
  try {
    std::vector<LabelClass> classes;
    for (const auto& entry : doc.at("classes")) {
      LabelClass cls;
      cls.name = entry.at("name").get<std::string>();
      if (const auto aliases = entry.find("aliases"); aliases != entry.end()) {
        cls.aliases = aliases->get<std::vector<std::string>>();
      }
      cls.multiplier = Multiplier::from_double(entry.at("multiplier").get<double>());
      classes.push_back(std::move(cls));
    }
    return LabelScheme(doc.at("scheme_id").get<std::string>(), std::move(classes));
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid scheme: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid scheme: ") + e.what());
  }
}

LabelScheme load_scheme_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open scheme file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scheme_json(buffer.str());
}

double normalize(const PredictionRecord& record, const LabelScheme& scheme) {
  const LabelClass* cls = scheme.resolve(record.label);
  if (!cls) {
    throw DataError("unknown label '" + record.label + "' for scheme '" + scheme.id() + "'");
  }
  if (cls->multiplier.halves() == 0) return 0.0;
  return cls->multiplier.value() * record.score;
}

void SchemeRegistry::add(LabelScheme scheme) {
  const std::string id = scheme.id();
  schemes_.insert_or_assign(id, std::move(scheme));
}

void SchemeRegistry::bind(std::string model_id, std::string scheme_id) {
  if (!find(scheme_id)) {
    throw DataError("cannot bind model '" + model_id + "' to unknown scheme '" + scheme_id + "'");
  }
  bindings_.insert_or_assign(std::move(model_id), std::move(scheme_id));
}

const LabelScheme* SchemeRegistry::find(std::string_view scheme_id) const {
  const auto it = schemes_.find(scheme_id);
  return it == schemes_.end() ? nullptr : &it->second;
}

const LabelScheme& SchemeRegistry::lookup(std::string_view scheme_id) const {
  if (const auto* s = find(scheme_id)) return *s;
  throw DataError("unknown scheme '" + std::string(scheme_id) + "'");
}

const LabelScheme& SchemeRegistry::for_model(std::string_view model_id) const {
  const auto it = bindings_.find(model_id);
  if (it == bindings_.end()) {
    throw DataError("no label scheme bound to model '" + std::string(model_id) + "'");
  }
  return lookup(it->second);
}

std::vector<std::string> SchemeRegistry::scheme_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, _] : schemes_) ids.push_back(id);
  return ids;
}

namespace {

void apply_model_bindings(SchemeRegistry& registry, const json& doc,
                          const std::filesystem::path& base_dir) {
  const auto models = doc.find("models");
  if (models == doc.end()) return;
  if (!models->is_object()) throw DataError("scheme map 'models' must be an object");
  for (const auto& [model, value] : models->items()) {
    if (!value.is_string()) throw DataError("scheme for model '" + model + "' must be a string");
    const auto target = value.get<std::string>();
    if (registry.find(target)) {
      registry.bind(model, target);
      continue;
    }
    auto path = std::filesystem::path(target);
    if (path.is_relative()) path = base_dir / path;
    auto scheme = load_scheme_file(path);
    const std::string id = scheme.id();
    registry.add(std::move(scheme));
    registry.bind(model, id);
  }
}

}  // namespace

SchemeRegistry builtin_schemes() {
  SchemeRegistry registry;
  for (const auto doc : detail::builtin_scheme_documents()) {
    registry.add(parse_scheme_json(doc));
  }
  apply_model_bindings(registry, json::parse(detail::builtin_model_map_document()), {});
  return registry;
}

void apply_scheme_map(SchemeRegistry& registry, const std::filesystem::path& map_path) {
  std::ifstream in(map_path, std::ios::binary);
  if (!in) throw DataError("cannot open scheme map '" + map_path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed scheme map: ") + e.what());
  }
  const auto base = map_path.parent_path();
  if (const auto files = doc.find("schemes"); files != doc.end()) {
    for (const auto& f : *files) {
      auto path = std::filesystem::path(f.get<std::string>());
      if (path.is_relative()) path = base / path;
      registry.add(load_scheme_file(path));
    }
  }
  apply_model_bindings(registry, doc, base);
}

}  // namespace sentaudit
