#include "hyperroles/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <unordered_set>

#include "hyperroles/error.hpp"

namespace hyperroles {

char label_code(Label l) noexcept { return l == Label::kHigh ? 'H' : 'L'; }

std::string to_string(const LabelTuple& labels) {
  std::string out;
  out.reserve(labels.size());
  for (Label l : labels) out.push_back(label_code(l));
  return out;
}

LabelTuple parse_labels(std::string_view text) {
  LabelTuple out;
  for (char c : text) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
      case 'H': out.push_back(Label::kHigh); break;
      case 'L': out.push_back(Label::kLow); break;
      case '|': case ',': case ' ': break;
      default:
        throw Error(ErrorCode::kInvalidValue, "bad label character in '" + std::string(text) + "'");
    }
  }
  return out;
}

FeatureSchema::FeatureSchema(std::vector<FeatureDef> defs) : defs_(std::move(defs)) {
  std::unordered_set<std::string> seen;
  for (const auto& d : defs_) {
    if (!seen.insert(d.name).second) {
      throw Error(ErrorCode::kSchemaMismatch, "duplicate feature '" + d.name + "'");
    }
    if (d.kind == FeatureKind::kNumeric &&
        (!std::isfinite(d.lo) || !std::isfinite(d.hi) || d.lo > d.hi)) {
      throw Error(ErrorCode::kSchemaMismatch, "feature '" + d.name + "' has an invalid range");
    }
  }
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < defs_.size(); ++i) {
    if (defs_[i].name == name) return i;
  }
  return std::nullopt;
}

FeatureSchema default_user_schema() {
  return FeatureSchema({{"score", FeatureKind::kNumeric, 0.0, 1.0},
                        {"sentiment", FeatureKind::kNumeric, 0.0, 1.0},
                        {"toxicity", FeatureKind::kNumeric, 0.0, 1.0}});
}

ThresholdVector default_thresholds() {
  return ThresholdVector{{"score", "sentiment", "toxicity"}, {0.5, 0.5, 0.5}};
}

double MinMax::apply(double x) const noexcept {
  if (!(max > min)) return 0.5;
  return (x - min) / (max - min);
}

MinMax fit_minmax(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "cannot normalize an empty sequence");
  MinMax mm{values.front(), values.front()};
  for (double x : values) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidValue, "non-finite value in normalize input");
    mm.min = std::min(mm.min, x);
    mm.max = std::max(mm.max, x);
  }
  return mm;
}

std::vector<double> normalize(std::span<const double> values) {
  const MinMax mm = fit_minmax(values);
  std::vector<double> out;
  out.reserve(values.size());
  for (double x : values) out.push_back(mm.apply(x));
  return out;
}

LabelTuple labeled_vector(const FeatureSchema& schema, const FeatureVector& fv,
                          const ThresholdVector& tv) {
  if (tv.features.size() != tv.thresholds.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "threshold vector has mismatched lengths");
  }
  const auto values = project(schema, fv, tv.features);
  LabelTuple out;
  out.reserve(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) out.push_back(label(values[j], tv.thresholds[j]));
  return out;
}

std::vector<double> project(const FeatureSchema& schema, const FeatureVector& fv,
                            std::span<const std::string> features) {
  if (fv.values.size() != schema.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "feature vector length does not match schema");
  }
  std::vector<double> out;
  out.reserve(features.size());
  for (const auto& name : features) {
    const auto idx = schema.index_of(name);
    if (!idx) throw Error(ErrorCode::kSchemaMismatch, "feature '" + name + "' not in schema");
    out.push_back(fv.values[*idx]);
  }
  return out;
}

}  // namespace hyperroles
