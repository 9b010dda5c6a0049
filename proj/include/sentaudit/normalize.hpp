#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sentaudit/records.hpp"

namespace sentaudit {

/// Signed class weight restricted to {-1, -0.5, 0, +0.5, +1}, stored in
/// halves so the allowed set is exact.
class Multiplier {
 public:
  /// Throws std::invalid_argument for any value outside the allowed set.
  static Multiplier from_double(double value);
  static constexpr Multiplier from_halves(int halves) { return Multiplier(halves); }

  [[nodiscard]] constexpr int halves() const noexcept { return halves_; }
  [[nodiscard]] constexpr double value() const noexcept { return halves_ * 0.5; }

  friend constexpr bool operator==(Multiplier, Multiplier) = default;

 private:
  constexpr explicit Multiplier(int halves) : halves_(halves) {}
  int halves_ = 0;
};

struct LabelClass {
  std::string name;
  std::vector<std::string> aliases;
  Multiplier multiplier = Multiplier::from_halves(0);
};

/// Trim, casefold (ASCII), and collapse runs of whitespace and underscores
/// into one space: "  Very_Positive " -> "very positive".
std::string canonical_label(std::string_view label);

/// Declarative mapping from raw classifier labels to signed multipliers.
class LabelScheme {
 public:
  /// Throws DataError if an alias (after canonicalization) maps to two
  /// classes, or if the scheme lacks a positive or a negative class.
  LabelScheme(std::string scheme_id, std::vector<LabelClass> classes);

  [[nodiscard]] const std::string& id() const noexcept { return id_; }
  [[nodiscard]] const std::vector<LabelClass>& classes() const noexcept { return classes_; }

  /// Class whose name or alias matches `label`, or nullptr.
  [[nodiscard]] const LabelClass* resolve(std::string_view label) const;

 private:
  std::string id_;
  std::vector<LabelClass> classes_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Parses the scheme config format:
///   {"scheme_id": str, "classes": [{"name", "aliases": [str], "multiplier"}]}
LabelScheme parse_scheme_json(std::string_view document);
LabelScheme load_scheme_file(const std::filesystem::path& path);

/// multiplier(label) x score. A zero-multiplier class yields exactly +0.0.
/// Throws DataError naming the label and scheme when the label is unknown.
double normalize(const PredictionRecord& record, const LabelScheme& scheme);

/// Schemes by id, plus an optional model_id -> scheme_id binding table.
class SchemeRegistry {
 public:
  /// Adds or replaces a scheme.
  void add(LabelScheme scheme);
  void bind(std::string model_id, std::string scheme_id);

  [[nodiscard]] const LabelScheme* find(std::string_view scheme_id) const;

  /// Throws DataError when the id is unknown.
  [[nodiscard]] const LabelScheme& lookup(std::string_view scheme_id) const;

  /// Scheme bound to a model; throws DataError when the model has no binding
  /// or the binding names an unknown scheme.
  [[nodiscard]] const LabelScheme& for_model(std::string_view model_id) const;

  [[nodiscard]] std::vector<std::string> scheme_ids() const;

 private:
  std::map<std::string, LabelScheme, std::less<>> schemes_;
  std::map<std::string, std::string, std::less<>> bindings_;
};

/// 2class, 3class and 5class schemes plus the default model bindings, read
/// from the scheme files embedded at build time.
SchemeRegistry builtin_schemes();

/// Scheme-map file: {"schemes": [path, ...]?, "models": {model_id: scheme}}.
/// Each scheme value is a registered scheme id or a path to a scheme file;
/// relative paths resolve against the map file's directory.
void apply_scheme_map(SchemeRegistry& registry, const std::filesystem::path& map_path);

}  // namespace sentaudit
