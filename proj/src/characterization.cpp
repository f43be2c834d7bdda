#include "hyperroles/characterization.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hyperroles/error.hpp"
#include "hyperroles/kernels.hpp"

namespace hyperroles {
namespace {

struct KindName {
  OmegaKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {OmegaKind::kMean, "mean"},
    {OmegaKind::kMedian, "median"},
    {OmegaKind::kMode, "mode"},
    {OmegaKind::kVariance, "variance"},
    {OmegaKind::kStd, "std"},
    {OmegaKind::kMad, "mad"},
    {OmegaKind::kGini, "gini"},
    {OmegaKind::kEntropy, "entropy"},
    {OmegaKind::kGiniImpurity, "gini_impurity"},
    {OmegaKind::kSize, "size"},
    {OmegaKind::kPurity, "purity"},
    {OmegaKind::kCohesion, "cohesion"},
    {OmegaKind::kInteractionPotential, "interaction_potential"},
};

void require_values(std::size_t n, std::string_view what) {
  if (n == 0) throw Error(ErrorCode::kEmptyInput, std::string(what) + " over an empty hyperedge");
}

std::map<std::int64_t, std::size_t> category_counts(std::span<const std::int64_t> categories) {
  std::map<std::int64_t, std::size_t> counts;
  for (auto c : categories) ++counts[c];
  return counts;
}

}  // namespace

std::string_view to_string(OmegaKind kind) noexcept {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "unknown";
}

OmegaKind parse_omega_kind(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  if (name == "avg") return OmegaKind::kMean;
  if (name == "intpot") return OmegaKind::kInteractionPotential;
  throw Error(ErrorCode::kInvalidValue, "unknown omega kind '" + std::string(name) + "'");
}

std::optional<FeatureKind> required_feature_kind(OmegaKind kind) noexcept {
  switch (kind) {
    case OmegaKind::kSize:
    case OmegaKind::kInteractionPotential:
      return std::nullopt;
    case OmegaKind::kEntropy:
    case OmegaKind::kGiniImpurity:
    case OmegaKind::kPurity:
      return FeatureKind::kCategorical;
    default:
      return FeatureKind::kNumeric;
  }
}

OmegaSpec parse_omega_spec(std::string_view text) {
  OmegaSpec spec;
  const auto colon = text.find(':');
  spec.kind = parse_omega_kind(text.substr(0, colon));
  if (colon != std::string_view::npos) spec.feature = std::string(text.substr(colon + 1));
  if (required_feature_kind(spec.kind) && spec.feature.empty()) {
    throw Error(ErrorCode::kInvalidValue, "omega '" + std::string(text) + "' needs a feature");
  }
  if (spec.kind == OmegaKind::kInteractionPotential && spec.feature == "complement") {
    spec.options.denominator = PotentialDenominator::kComplement;
    spec.feature.clear();
  }
  return spec;
}

double omega_mean(std::span<const double> values) {
  require_values(values.size(), "mean");
  return kernels::sum(values) / static_cast<double>(values.size());
}

double omega_median(std::span<const double> values) {
  require_values(values.size(), "median");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

double omega_mode(std::span<const double> values) {
  require_values(values.size(), "mode");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double best = sorted.front();
  std::size_t best_run = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    if (j - i > best_run) {
      best_run = j - i;
      best = sorted[i];
    }
    i = j;
  }
  return best;
}

double omega_variance(std::span<const double> values) {
  const double mean = omega_mean(values);
  return kernels::sum_sq_dev(values, mean) / static_cast<double>(values.size());
}

double omega_std(std::span<const double> values) { return std::sqrt(omega_variance(values)); }

double omega_mad(std::span<const double> values) {
  const double mean = omega_mean(values);
  return kernels::sum_abs_dev(values, mean) / static_cast<double>(values.size());
}

double omega_gini(std::span<const double> values) {
  const double mean = omega_mean(values);
  const double n = static_cast<double>(values.size());
  // Ordered-pair numerator is twice the unordered one, cancelling the 2 in 2*mean*n^2.
  const double unordered = kernels::pairwise_abs_diff(values);
  if (mean == 0.0) {
    if (unordered == 0.0) return 0.0;
    throw Error(ErrorCode::kUndefined, "gini coefficient undefined for zero mean");
  }
  return unordered / (mean * n * n);
}

double omega_entropy(std::span<const std::int64_t> categories, CategorySum mode) {
  require_values(categories.size(), "entropy");
  const double n = static_cast<double>(categories.size());
  double h = 0.0;
  for (const auto& [category, count] : category_counts(categories)) {
    const double r = static_cast<double>(count) / n;
    const double weight = mode == CategorySum::kMembers ? static_cast<double>(count) : 1.0;
    h -= weight * r * std::log(r);
  }
  return h == 0.0 ? 0.0 : h;
}

double omega_gini_impurity(std::span<const std::int64_t> categories, CategorySum mode) {
  require_values(categories.size(), "gini_impurity");
  const double n = static_cast<double>(categories.size());
  double acc = 0.0;
  for (const auto& [category, count] : category_counts(categories)) {
    const double r = static_cast<double>(count) / n;
    const double weight = mode == CategorySum::kMembers ? static_cast<double>(count) : 1.0;
    acc += weight * r * r;
  }
  return 1.0 - acc;
}

double omega_purity(std::span<const std::int64_t> categories) {
  require_values(categories.size(), "purity");
  std::size_t best = 0;
  for (const auto& [category, count] : category_counts(categories)) best = std::max(best, count);
  return static_cast<double>(best) / static_cast<double>(categories.size());
}

double omega_cohesion(std::span<const double> values, const Similarity& sim) {
  const std::size_t n = values.size();
  if (n < 2) throw Error(ErrorCode::kUndefined, "cohesion needs at least two members");
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  if (!sim) {
    // sum over pairs of 1 - |a - b| = pairs - sum |a - b|
    return (pairs - kernels::pairwise_abs_diff(values)) / pairs;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) acc += sim(values[i], values[j]);
  }
  return acc / pairs;
}

std::size_t omega_size(const Hyperedge& e) noexcept { return e.size(); }

double omega_interaction_potential(const Hypergraph& h, EdgeId e, PotentialDenominator denom) {
  const Hyperedge& edge = h.edge(e);
  std::vector<char> seen(h.node_bound(), 0);
  for (NodeId u : edge.members) seen[to_index(u)] = 1;  // members never count as external
  std::size_t external = 0;
  for (NodeId u : edge.members) {
    for (EdgeId other : h.incidence(u)) {
      if (other == e) continue;
      for (NodeId v : h.edge(other).members) {
        auto& s = seen[to_index(v)];
        if (!s) {
          s = 1;
          ++external;
        }
      }
    }
  }
  if (denom == PotentialDenominator::kMembers) {
    return static_cast<double>(external) / static_cast<double>(edge.size());
  }
  const std::size_t complement = h.order() - edge.size();
  if (complement == 0) {
    throw Error(ErrorCode::kUndefined, "interaction potential over an empty complement");
  }
  return static_cast<double>(external) / static_cast<double>(complement);
}

void NodeAttributes::set_numeric(std::string name, std::vector<double> values) {
  categorical_.erase(name);
  numeric_[std::move(name)] = std::move(values);
}

void NodeAttributes::set_categorical(std::string name, std::vector<std::int64_t> codes) {
  numeric_.erase(name);
  categorical_[std::move(name)] = std::move(codes);
}

std::optional<FeatureKind> NodeAttributes::kind(std::string_view name) const {
  const std::string key(name);
  if (numeric_.contains(key)) return FeatureKind::kNumeric;
  if (categorical_.contains(key)) return FeatureKind::kCategorical;
  return std::nullopt;
}

std::vector<double> NodeAttributes::numeric(std::string_view name,
                                            std::span<const NodeId> members) const {
  const auto it = numeric_.find(std::string(name));
  if (it == numeric_.end()) {
    throw Error(ErrorCode::kMissingFeature, "no numeric feature '" + std::string(name) + "'");
  }
  std::vector<double> out;
  out.reserve(members.size());
  for (NodeId v : members) {
    const auto i = to_index(v);
    if (i >= it->second.size() || std::isnan(it->second[i])) {
      throw Error(ErrorCode::kMissingFeature,
                  "node " + std::to_string(i) + " has no value for '" + std::string(name) + "'");
    }
    out.push_back(it->second[i]);
  }
  return out;
}

std::vector<std::int64_t> NodeAttributes::categorical(std::string_view name,
                                                      std::span<const NodeId> members) const {
  const auto it = categorical_.find(std::string(name));
  if (it == categorical_.end()) {
    throw Error(ErrorCode::kMissingFeature, "no categorical feature '" + std::string(name) + "'");
  }
  std::vector<std::int64_t> out;
  out.reserve(members.size());
  for (NodeId v : members) {
    const auto i = to_index(v);
    if (i >= it->second.size() || it->second[i] < 0) {
      throw Error(ErrorCode::kMissingFeature,
                  "node " + std::to_string(i) + " has no category for '" + std::string(name) + "'");
    }
    out.push_back(it->second[i]);
  }
  return out;
}

double omega(const Hypergraph& h, EdgeId e, const OmegaSpec& spec, const NodeAttributes& attrs) {
  const Hyperedge& edge = h.edge(e);
  const auto needs = required_feature_kind(spec.kind);
  if (needs) {
    const auto have = attrs.kind(spec.feature);
    if (!have) throw Error(ErrorCode::kMissingFeature, "unknown feature '" + spec.feature + "'");
    if (*have != *needs) {
      throw Error(ErrorCode::kSchemaMismatch, std::string(to_string(spec.kind)) +
                                                  " cannot be applied to feature '" + spec.feature + "'");
    }
  }
  switch (spec.kind) {
    case OmegaKind::kMean: return omega_mean(attrs.numeric(spec.feature, edge.members));
    case OmegaKind::kMedian: return omega_median(attrs.numeric(spec.feature, edge.members));
    case OmegaKind::kMode: return omega_mode(attrs.numeric(spec.feature, edge.members));
    case OmegaKind::kVariance: return omega_variance(attrs.numeric(spec.feature, edge.members));
    case OmegaKind::kStd: return omega_std(attrs.numeric(spec.feature, edge.members));
    case OmegaKind::kMad: return omega_mad(attrs.numeric(spec.feature, edge.members));
    case OmegaKind::kGini: return omega_gini(attrs.numeric(spec.feature, edge.members));
    case OmegaKind::kCohesion:
      return omega_cohesion(attrs.numeric(spec.feature, edge.members), spec.options.similarity);
    case OmegaKind::kEntropy:
      return omega_entropy(attrs.categorical(spec.feature, edge.members), spec.options.category_sum);
    case OmegaKind::kGiniImpurity:
      return omega_gini_impurity(attrs.categorical(spec.feature, edge.members),
                                 spec.options.category_sum);
    case OmegaKind::kPurity: return omega_purity(attrs.categorical(spec.feature, edge.members));
    case OmegaKind::kSize: return static_cast<double>(omega_size(edge));
    case OmegaKind::kInteractionPotential:
      return omega_interaction_potential(h, e, spec.options.denominator);
  }
  throw Error(ErrorCode::kInvalidValue, "unhandled omega kind");
}

std::vector<OmegaRow> evaluate_omegas(const Hypergraph& h, std::span<const OmegaSpec> specs,
                                      const NodeAttributes& attrs) {
  for (const auto& spec : specs) {
    if (required_feature_kind(spec.kind) && !attrs.kind(spec.feature)) {
      throw Error(ErrorCode::kMissingFeature, "unknown feature '" + spec.feature + "'");
    }
  }
  std::vector<OmegaRow> rows;
  rows.reserve(h.size() * specs.size());
  for (const auto& edge : h.edges()) {
    for (std::size_t s = 0; s < specs.size(); ++s) {
      OmegaRow row{edge.id, s, std::nullopt, {}};
      try {
        row.value = omega(h, edge.id, specs[s], attrs);
      } catch (const Error& err) {
        if (err.code() == ErrorCode::kSchemaMismatch) throw;
        row.error = std::string(to_string(err.code()));
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace hyperroles
