#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperroles/hypergraph.hpp"

namespace hyperroles {

enum class Label : std::uint8_t { kLow, kHigh };

using LabelTuple = std::vector<Label>;

char label_code(Label l) noexcept;
/// "HHL" style rendering of a label tuple.
std::string to_string(const LabelTuple& labels);
/// Parses "HHL" (case-insensitive, separators '|' ',' ' ' ignored).
LabelTuple parse_labels(std::string_view text);

enum class FeatureKind { kNumeric, kCategorical };

struct FeatureDef {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;
  double lo = 0.0;  // declared range, numeric features only
  double hi = 1.0;
};

class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<FeatureDef> defs);

  std::size_t size() const noexcept { return defs_.size(); }
  const FeatureDef& operator[](std::size_t i) const { return defs_.at(i); }
  std::span<const FeatureDef> defs() const noexcept { return defs_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

 private:
  std::vector<FeatureDef> defs_;
};

/// The three features archetypes are built from, all normalized to [0, 1].
FeatureSchema default_user_schema();

struct FeatureVector {
  NodeId user{};
  int t = 0;
  std::vector<double> values;  // aligned with the schema
};

struct ThresholdVector {
  std::vector<std::string> features;
  std::vector<double> thresholds;

  std::size_t size() const noexcept { return features.size(); }
};

/// score/sentiment/toxicity thresholded at 0.5.
ThresholdVector default_thresholds();

struct MinMax {
  double min = 0.0;
  double max = 1.0;

  /// Affine map onto [0, 1]; a degenerate range maps everything to 0.5.
  double apply(double x) const noexcept;
};

MinMax fit_minmax(std::span<const double> values);

/// Min-max normalization to [0, 1]. Throws kEmptyInput or kInvalidValue.
std::vector<double> normalize(std::span<const double> values);

/// low iff value <= threshold.
constexpr Label label(double value, double threshold) noexcept {
  return value <= threshold ? Label::kLow : Label::kHigh;
}

/// Applies label() to each thresholded feature in order. Throws
/// kSchemaMismatch when a thresholded feature is not in the schema.
LabelTuple labeled_vector(const FeatureSchema& schema, const FeatureVector& fv,
                          const ThresholdVector& tv);

/// Projects fv onto the given feature subset, in that order.
std::vector<double> project(const FeatureSchema& schema, const FeatureVector& fv,
                            std::span<const std::string> features);

}  // namespace hyperroles
