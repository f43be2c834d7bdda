#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperroles/hypergraph.hpp"
#include "hyperroles/random.hpp"

namespace hyperroles {

struct ArchetypeStep {
  int t = 0;
  std::size_t archetype = 0;
};

struct ArchetypeSequence {
  NodeId user{};
  std::vector<ArchetypeStep> steps;  // strictly increasing t
};

/// Row-stochastic P(B|A) estimate. Rows without any outgoing transition are
/// undefined and hold NaN.
struct TransitionMatrix {
  std::size_t k = 0;
  std::vector<std::size_t> counts;      // k*k, row-major (from, to)
  std::vector<std::size_t> row_totals;  // k
  std::vector<double> prob;             // k*k

  bool row_defined(std::size_t from) const { return row_totals.at(from) > 0; }
  double at(std::size_t from, std::size_t to) const { return prob.at(from * k + to); }
};

/// A transition from t contributes only when the user is also labelled at t+1.
/// Throws kEmptyInput when no adjacent pair exists.
TransitionMatrix observed_transitions(std::span<const ArchetypeSequence> seqs, std::size_t k);

/// Month-major layout of the same sequences: labels per month plus the
/// (position at t, position at t+1) links for users present in both months.
class LabelPanel {
 public:
  LabelPanel(std::span<const ArchetypeSequence> seqs, std::size_t k);

  std::size_t k() const noexcept { return k_; }
  std::span<const int> months() const noexcept { return months_; }
  std::span<const std::vector<std::uint8_t>> labels() const noexcept { return labels_; }

  /// Each month's labels permuted independently.
  std::vector<std::vector<std::uint8_t>> shuffled(Rng& rng) const;
  TransitionMatrix transitions(std::span<const std::vector<std::uint8_t>> labels) const;

 private:
  std::size_t k_;
  std::vector<int> months_;
  std::vector<std::vector<std::uint8_t>> labels_;
  // links_[i] connects month i to month i+1 (empty when they are not consecutive).
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> links_;
};

struct NullModelOptions {
  std::size_t n_shuffles = 500;
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0: hardware concurrency
};

/// Per-pair statistics of P(B|A) across shuffled replicas. A replica in which
/// row A has no support contributes no sample for that row.
struct NullStats {
  std::size_t k = 0;
  std::size_t n_shuffles = 0;
  std::uint64_t seed = 0;
  std::vector<double> mean;                  // k*k
  std::vector<double> stddev;                // k*k, sample std (n-1)
  std::vector<std::vector<double>> samples;  // k*k lists, replica order
};

NullStats null_model(std::span<const ArchetypeSequence> seqs, std::size_t k,
                     const NullModelOptions& options);

struct TransitionCell {
  std::size_t from = 0;
  std::size_t to = 0;
  double observed = 0.0;
  double null_mean = 0.0;
  double null_std = 0.0;
  double z = 0.0;
  double p_normal = 1.0;     // one-sided upper tail
  double p_empirical = 1.0;  // fraction of null samples >= observed
  bool testable = false;
  bool significant = false;
};

struct TransitionReport {
  std::size_t k = 0;
  double alpha = 0.01;
  std::size_t n_shuffles = 0;
  std::uint64_t seed = 0;
  std::vector<TransitionCell> cells;  // k*k, row-major

  const TransitionCell& at(std::size_t from, std::size_t to) const { return cells.at(from * k + to); }
  std::size_t significant_count() const;
  std::size_t testable_count() const;
  nlohmann::json metadata() const;
};

/// Upper-tail standard normal probability.
double upper_tail_p(double z);

/// significant iff testable, p_normal < alpha and observed > null mean.
/// Undefined rows and zero-variance pairs are untestable.
TransitionReport significance(const TransitionMatrix& observed, const NullStats& null_stats,
                              double alpha = 0.01);

/// observed_transitions + null_model + significance.
TransitionReport analyze_transitions(std::span<const ArchetypeSequence> seqs, std::size_t k,
                                     const NullModelOptions& options, double alpha = 0.01);

}  // namespace hyperroles
