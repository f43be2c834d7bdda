#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperroles/features.hpp"

namespace hyperroles {

struct Archetype {
  std::string name;
  std::vector<std::string> features;  // F_A, in label order
  LabelTuple labels;
  std::optional<std::vector<double>> prototype;
};

class ArchetypeCatalog {
 public:
  ArchetypeCatalog() = default;
  ArchetypeCatalog(std::vector<std::string> features, std::vector<Archetype> archetypes);

  /// The eight score/sentiment/toxicity archetypes; prototypes sit on the
  /// extremal corner of each label tuple (high -> 1, low -> 0).
  static ArchetypeCatalog standard();
  static ArchetypeCatalog from_json(const nlohmann::json& j);
  static ArchetypeCatalog load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  std::span<const Archetype> archetypes() const noexcept { return archetypes_; }
  const std::vector<std::string>& features() const noexcept { return features_; }
  std::size_t size() const noexcept { return archetypes_.size(); }
  const Archetype& operator[](std::size_t i) const { return archetypes_.at(i); }

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::optional<std::size_t> find(const LabelTuple& labels) const;
  /// True when every 2^p label combination has an archetype.
  bool exhaustive() const noexcept;

 private:
  std::vector<std::string> features_;
  std::vector<Archetype> archetypes_;
};

/// Index of the archetype whose label tuple matches labeled_vector(fv, tv).
/// Throws kNoMatchingArchetype for tuples the catalog does not cover.
std::size_t assign(const FeatureSchema& schema, const FeatureVector& fv,
                   const ArchetypeCatalog& catalog, const ThresholdVector& tv);

enum class Distance { kEuclidean, kCosine, kMaxAbs };

/// Cosine distance is 1 - cos(a, b); a zero vector is at distance 0 from
/// another zero vector and 1 from anything else.
double distance(std::span<const double> a, std::span<const double> b, Distance d);

bool match_by_distance(const FeatureSchema& schema, const FeatureVector& fv, const Archetype& a,
                       Distance d, double eps);

enum class TypicalityRule {
  kContribution,  // f(u) for high-labelled features, 1 - f(u) for low ones
  kLiteral,       // prod alpha_f * f(u), alpha_f = +1 (high) / -1 (low)
};

/// `values` are the user's normalized features in the archetype's feature order.
double typicality(std::span<const double> values, const Archetype& a,
                  TypicalityRule rule = TypicalityRule::kContribution);
double typicality(const FeatureSchema& schema, const FeatureVector& fv, const Archetype& a,
                  TypicalityRule rule = TypicalityRule::kContribution);

struct TypicalityScore {
  NodeId user{};
  std::string archetype;
  double value = 0.0;
};

struct TypicalRanking {
  std::vector<TypicalityScore> ranked;
  bool short_list = false;  // fewer than k users were available
};

/// k most typical users, descending; ties go to the smaller NodeId.
TypicalRanking top_k_typical(const FeatureSchema& schema, std::span<const FeatureVector> users,
                             const Archetype& a, std::size_t k);

/// Member counts per catalog entry, aligned with the catalog order.
std::vector<std::size_t> archetype_census(std::span<const std::size_t> assignments,
                                          std::size_t catalog_size);

}  // namespace hyperroles
