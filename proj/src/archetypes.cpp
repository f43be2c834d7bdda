#include "hyperroles/archetypes.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "hyperroles/error.hpp"

namespace hyperroles {

ArchetypeCatalog::ArchetypeCatalog(std::vector<std::string> features,
                                   std::vector<Archetype> archetypes)
    : features_(std::move(features)), archetypes_(std::move(archetypes)) {
  std::set<std::string> names;
  std::set<std::string> tuples;
  for (auto& a : archetypes_) {
    if (a.features.empty()) a.features = features_;
    if (a.features != features_) {
      throw Error(ErrorCode::kSchemaMismatch, "archetype '" + a.name + "' uses a different feature subset");
    }
    if (a.labels.size() != features_.size()) {
      throw Error(ErrorCode::kSchemaMismatch, "archetype '" + a.name + "' label tuple has wrong length");
    }
    if (a.prototype && a.prototype->size() != features_.size()) {
      throw Error(ErrorCode::kSchemaMismatch, "archetype '" + a.name + "' prototype has wrong length");
    }
    if (!names.insert(a.name).second) {
      throw Error(ErrorCode::kSchemaMismatch, "duplicate archetype name '" + a.name + "'");
    }
    if (!tuples.insert(to_string(a.labels)).second) {
      throw Error(ErrorCode::kSchemaMismatch, "duplicate label tuple " + to_string(a.labels));
    }
  }
}

ArchetypeCatalog ArchetypeCatalog::standard() {
  struct Row {
    const char* labels;
    const char* name;
  };
  static constexpr Row kRows[] = {
      {"HHL", "Community Hero"},      {"HHH", "Controversial Star"},
      {"HLL", "Respected Critic"},    {"HLH", "Infamous Celebrity"},
      {"LHL", "Benevolent Underdog"}, {"LHH", "Positive Provoker"},
      {"LLL", "Quiet Critic"},        {"LLH", "Malcontent"},
  };
  std::vector<std::string> features{"score", "sentiment", "toxicity"};
  std::vector<Archetype> out;
  for (const auto& row : kRows) {
    Archetype a{row.name, features, parse_labels(row.labels), std::nullopt};
    std::vector<double> corner;
    for (Label l : a.labels) corner.push_back(l == Label::kHigh ? 1.0 : 0.0);
    a.prototype = std::move(corner);
    out.push_back(std::move(a));
  }
  return ArchetypeCatalog(std::move(features), std::move(out));
}

ArchetypeCatalog ArchetypeCatalog::from_json(const nlohmann::json& j) {
  try {
    auto features = j.at("features").get<std::vector<std::string>>();
    std::vector<Archetype> archetypes;
    for (const auto& item : j.at("archetypes")) {
      Archetype a;
      a.name = item.at("name").get<std::string>();
      a.features = features;
      a.labels = parse_labels(item.at("labels").get<std::string>());
      if (item.contains("prototype")) a.prototype = item.at("prototype").get<std::vector<double>>();
      archetypes.push_back(std::move(a));
    }
    return ArchetypeCatalog(std::move(features), std::move(archetypes));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInputError, std::string("malformed archetype catalog: ") + e.what());
  }
}

ArchetypeCatalog ArchetypeCatalog::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInputError, "cannot open catalog " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInputError, "catalog " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json ArchetypeCatalog::to_json() const {
  nlohmann::json j;
  j["features"] = features_;
  j["archetypes"] = nlohmann::json::array();
  for (const auto& a : archetypes_) {
    nlohmann::json item{{"name", a.name}, {"labels", to_string(a.labels)}};
    if (a.prototype) item["prototype"] = *a.prototype;
    j["archetypes"].push_back(std::move(item));
  }
  return j;
}

std::optional<std::size_t> ArchetypeCatalog::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < archetypes_.size(); ++i) {
    if (archetypes_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> ArchetypeCatalog::find(const LabelTuple& labels) const {
  for (std::size_t i = 0; i < archetypes_.size(); ++i) {
    if (archetypes_[i].labels == labels) return i;
  }
  return std::nullopt;
}

bool ArchetypeCatalog::exhaustive() const noexcept {
  // Label tuples are pairwise distinct, so covering all combinations is a count check.
  return features_.size() < 63 && archetypes_.size() == (std::size_t{1} << features_.size());
}

std::size_t assign(const FeatureSchema& schema, const FeatureVector& fv,
                   const ArchetypeCatalog& catalog, const ThresholdVector& tv) {
  if (tv.features != catalog.features()) {
    throw Error(ErrorCode::kSchemaMismatch, "thresholds and catalog cover different features");
  }
  const auto labels = labeled_vector(schema, fv, tv);
  if (auto idx = catalog.find(labels)) return *idx;
  throw Error(ErrorCode::kNoMatchingArchetype, "no archetype for label tuple " + to_string(labels));
}

double distance(std::span<const double> a, std::span<const double> b, Distance d) {
  if (a.size() != b.size()) throw Error(ErrorCode::kSchemaMismatch, "distance over vectors of different length");
  switch (d) {
    case Distance::kEuclidean: {
      double acc = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
      return std::sqrt(acc);
    }
    case Distance::kMaxAbs: {
      double acc = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) acc = std::max(acc, std::abs(a[i] - b[i]));
      return acc;
    }
    case Distance::kCosine: {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
      }
      if (na == 0.0 && nb == 0.0) return 0.0;
      if (na == 0.0 || nb == 0.0) return 1.0;
      const double cosine = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
      // Exact equality has to land on 0 so eps = 0 means prototype equality.
      if (std::equal(a.begin(), a.end(), b.begin())) return 0.0;
      return 1.0 - cosine;
    }
  }
  return 0.0;
}

bool match_by_distance(const FeatureSchema& schema, const FeatureVector& fv, const Archetype& a,
                       Distance d, double eps) {
  if (!a.prototype) {
    throw Error(ErrorCode::kPrototypeUnavailable, "archetype '" + a.name + "' has no prototype");
  }
  if (eps < 0.0) throw Error(ErrorCode::kInvalidValue, "eps must be non-negative");
  const auto values = project(schema, fv, a.features);
  return distance(values, *a.prototype, d) <= eps;
}

double typicality(std::span<const double> values, const Archetype& a, TypicalityRule rule) {
  if (values.size() != a.labels.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "typicality: value count does not match archetype");
  }
  double product = 1.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double x = values[j];
    if (!(x >= 0.0 && x <= 1.0)) {
      throw Error(ErrorCode::kInvalidValue, "typicality needs features normalized to [0, 1]");
    }
    const bool high = a.labels[j] == Label::kHigh;
    if (rule == TypicalityRule::kContribution) {
      product *= high ? x : 1.0 - x;
    } else {
      product *= high ? x : -x;
    }
  }
  return product;
}

double typicality(const FeatureSchema& schema, const FeatureVector& fv, const Archetype& a,
                  TypicalityRule rule) {
  return typicality(project(schema, fv, a.features), a, rule);
}

TypicalRanking top_k_typical(const FeatureSchema& schema, std::span<const FeatureVector> users,
                             const Archetype& a, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidValue, "top_k_typical requires k >= 1");
  TypicalRanking out;
  out.ranked.reserve(users.size());
  for (const auto& fv : users) {
    out.ranked.push_back({fv.user, a.name, typicality(schema, fv, a)});
  }
  const auto by_rank = [](const TypicalityScore& x, const TypicalityScore& y) {
    if (x.value != y.value) return x.value > y.value;
    return x.user < y.user;
  };
  if (out.ranked.size() > k) {
    std::partial_sort(out.ranked.begin(), out.ranked.begin() + static_cast<std::ptrdiff_t>(k),
                      out.ranked.end(), by_rank);
    out.ranked.resize(k);
  } else {
    std::sort(out.ranked.begin(), out.ranked.end(), by_rank);
    out.short_list = out.ranked.size() < k;
  }
  return out;
}

std::vector<std::size_t> archetype_census(std::span<const std::size_t> assignments,
                                          std::size_t catalog_size) {
  std::vector<std::size_t> counts(catalog_size, 0);
  for (std::size_t a : assignments) {
    if (a >= catalog_size) throw Error(ErrorCode::kInvalidValue, "assignment outside catalog");
    ++counts[a];
  }
  return counts;
}

}  // namespace hyperroles
