#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hyperroles/features.hpp"
#include "hyperroles/hypergraph.hpp"

// Hyperedge characterization functions (omega). Each specialization maps a
// hyperedge, optionally through one member feature, to a characteristic value.

namespace hyperroles {

enum class OmegaKind {
  kMean,
  kMedian,
  kMode,
  kVariance,
  kStd,
  kMad,
  kGini,
  kEntropy,
  kGiniImpurity,
  kSize,
  kPurity,
  kCohesion,
  kInteractionPotential,
};

std::string_view to_string(OmegaKind kind) noexcept;
OmegaKind parse_omega_kind(std::string_view name);

/// Feature kind an omega consumes; nullopt for purely structural ones.
std::optional<FeatureKind> required_feature_kind(OmegaKind kind) noexcept;

/// How entropy and Gini impurity aggregate category proportions.
enum class CategorySum {
  kDistinctCategories,  // standard Shannon / Gini over distinct categories
  kMembers,             // one term per member, so each category counts |c| times
};

enum class PotentialDenominator { kMembers, kComplement };

using Similarity = std::function<double(double, double)>;

struct OmegaOptions {
  CategorySum category_sum = CategorySum::kDistinctCategories;
  PotentialDenominator denominator = PotentialDenominator::kMembers;
  Similarity similarity;  // empty: 1 - |a - b|
};

struct OmegaSpec {
  OmegaKind kind = OmegaKind::kMean;
  std::string feature;  // empty for size and interaction potential
  OmegaOptions options;
};

/// Parses "kind[:feature]", e.g. "gini:toxicity" or "size".
OmegaSpec parse_omega_spec(std::string_view text);

// Value-level specializations. Categorical values are integer category codes.
double omega_mean(std::span<const double> values);
double omega_median(std::span<const double> values);
/// Most frequent value; ties go to the smallest value.
double omega_mode(std::span<const double> values);
/// Population variance (divides by |e|).
double omega_variance(std::span<const double> values);
double omega_std(std::span<const double> values);
double omega_mad(std::span<const double> values);
/// Zero when every value is zero.
double omega_gini(std::span<const double> values);
/// Natural-log entropy of the category proportions.
double omega_entropy(std::span<const std::int64_t> categories,
                     CategorySum mode = CategorySum::kDistinctCategories);
double omega_gini_impurity(std::span<const std::int64_t> categories,
                           CategorySum mode = CategorySum::kDistinctCategories);
double omega_purity(std::span<const std::int64_t> categories);
/// Mean similarity over unordered member pairs. Throws kUndefined for |e| < 2.
double omega_cohesion(std::span<const double> values, const Similarity& sim = {});

std::size_t omega_size(const Hyperedge& e) noexcept;
/// Members of V \ e adjacent to some member of e through a hyperedge other
/// than e, divided by |e| or |V \ e|.
double omega_interaction_potential(const Hypergraph& h, EdgeId e,
                                   PotentialDenominator denom = PotentialDenominator::kMembers);

/// Per-node feature columns indexed by NodeId. Missing numeric values are NaN,
/// missing categories are negative.
class NodeAttributes {
 public:
  void set_numeric(std::string name, std::vector<double> values);
  void set_categorical(std::string name, std::vector<std::int64_t> codes);

  std::optional<FeatureKind> kind(std::string_view name) const;
  /// Throws kMissingFeature when the feature or a member's value is absent.
  std::vector<double> numeric(std::string_view name, std::span<const NodeId> members) const;
  std::vector<std::int64_t> categorical(std::string_view name, std::span<const NodeId> members) const;

 private:
  std::unordered_map<std::string, std::vector<double>> numeric_;
  std::unordered_map<std::string, std::vector<std::int64_t>> categorical_;
};

double omega(const Hypergraph& h, EdgeId e, const OmegaSpec& spec, const NodeAttributes& attrs);

struct OmegaRow {
  EdgeId edge{};
  std::size_t spec_index = 0;
  std::optional<double> value;  // empty when the omega is undefined for this edge
  std::string error;            // reason when value is empty
};

/// Evaluates every spec on every hyperedge; per-edge failures become empty rows.
std::vector<OmegaRow> evaluate_omegas(const Hypergraph& h, std::span<const OmegaSpec> specs,
                                      const NodeAttributes& attrs);

}  // namespace hyperroles
